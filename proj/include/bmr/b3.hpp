#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "bmr/ring.hpp"

namespace bmr {

class B3Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Row-major square matrix over F_p.
using ModpMat = std::vector<std::vector<std::uint64_t>>;
/// Row-major square matrix over the Laurent ring in l1..lk.
using PolyMat = std::vector<std::vector<LaurentPoly>>;

/// Eigenvalue data of a B3 representation of dimension k.
struct RepSpec {
  int k = 2;
  std::vector<std::uint64_t> lambda;
  /// k = 4: r with r^2 = l1 l2 l3 l4. k = 5: r~ with r~^5 = l1 ... l5. Unused otherwise.
  std::uint64_t root = 0;
  std::uint64_t prime = kDefaultPrime;
};

struct RepPair {
  int k = 0;
  std::uint64_t prime = 0;
  ModpMat A;
  ModpMat B;
};

/// Throws B3Error for k = 5 (no matrix model), for zero denominators and for an
/// inconsistent root.
RepPair build_rep(const RepSpec& spec);

/// The nonvanishing product for dimension k at spec (k = 5 includes r~).
std::uint64_t condition_value(const RepSpec& spec);
/// condition_value != 0, and for k = 5 also det A != -l_i^6 / l_j for all i, j.
bool irreducibility_condition(const RepSpec& spec);

/// Absolute irreducibility: the algebra generated by A and B is all of M_k(F_p).
bool brute_irreducible(const RepPair& pair);
/// Dimension of the algebra generated by A and B.
std::size_t generated_algebra_dim(const RepPair& pair);
/// Dimension (1 or k-1) of a common invariant subspace found from eigenvectors of A
/// with one-dimensional eigenspaces, if any.
std::optional<int> invariant_subspace_witness(const RepPair& pair, const RepSpec& spec);

struct ConjugatorReport {
  ModpMat D;
  std::uint64_t det = 0;
  bool det_formula_ok = false;
  /// D^-1 A D lower triangular with diagonal (l1, l2, l3).
  bool a_triangular = false;
  /// D^-1 B D upper triangular with diagonal (l2, l3, l1).
  bool b_triangular = false;
};

/// The explicit k = 3 conjugator. Throws B3Error when det D = 0.
ConjugatorReport ordered_triangular_conjugate(const RepSpec& spec);

/// Random spec with pairwise distinct nonzero eigenvalues; for k = 4, 5 the root is
/// sampled first and the last eigenvalue solved from it. `branch` = 1 negates r (k = 4).
RepSpec random_rep_spec(int k, std::uint64_t seed, std::uint64_t prime = kDefaultPrime, int branch = 0);

/// All k-th roots of d in F_p. Throws B3Error when no method applies.
std::vector<std::uint64_t> kth_roots(std::uint64_t d, int k, const PrimeField& F);

ModpMat mat_mul(const ModpMat& a, const ModpMat& b, const PrimeField& F);
std::uint64_t mat_det(ModpMat a, const PrimeField& F);
/// Coefficients c_0..c_k of det(X I - a).
std::vector<std::uint64_t> mat_charpoly(const ModpMat& a, const PrimeField& F);

/// Exact models over Z[l1^+-1, ..., lk^+-1] for k = 2, 3.
struct SymbolicRep {
  VarSetPtr vars;
  PolyMat A;
  PolyMat B;
};
SymbolicRep symbolic_rep(int k);
PolyMat poly_mul(const PolyMat& a, const PolyMat& b);
LaurentPoly poly_det(const PolyMat& a);
/// Coefficients c_0..c_k of det(X I - a), k <= 3.
std::vector<LaurentPoly> poly_charpoly(const PolyMat& a);
/// The k = 3 conjugator with symbolic entries.
PolyMat symbolic_conjugator(const VarSetPtr& vars);

}  // namespace bmr
