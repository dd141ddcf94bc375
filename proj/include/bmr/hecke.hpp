#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bmr/catalog.hpp"
#include "bmr/group.hpp"
#include "bmr/ring.hpp"

namespace bmr {

/// Generic Hecke algebra of a catalog group: braid presentation plus one
/// parameter list u_{c,1..e_c} per conjugacy class of generators.
struct HeckeSpec {
  std::string group;
  Presentation braid;
  VarSetPtr vars;
  /// Class index of each generator.
  std::vector<int> gen_class;
  /// Parameter names per class, e.g. {"u_s1", "u_s2", "u_s3"}.
  std::vector<std::vector<std::string>> class_params;
  /// e_c, the generator order in the group flavor.
  std::vector<int> class_order;
  std::uint64_t group_order = 0;
  std::uint64_t center_order = 0;

  std::vector<LaurentPoly> params_of(int gen) const;
};

HeckeSpec make_hecke_spec(const GroupEntry& e);

/// Coefficients of g^e = sum_j a_j g^j for (g - u_1)...(g - u_e) = 0, indexed by j.
std::vector<LaurentPoly> eq1_coeffs(const std::vector<LaurentPoly>& params);

class SpanningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SpanningSet {
  std::string group;
  std::vector<Word> words;
  std::size_t expected_size = 0;
};

/// Monomial exponents spanning the subalgebra of a generator of order e: 0, 1, -1, 2, -2, ...
std::vector<int> subalgebra_exponents(int e);

/// Raw expansion z^k * term over the recipe, in recipe order. Duplicates are kept.
std::vector<Word> expand_recipe(const SpanningRecipe& r, const Presentation& bmr);

/// Throws SpanningError when there is no recipe, on duplicates, or when the size is not |W|.
SpanningSet expand_spanning_set(const GroupEntry& e);

enum class CoeffMode { ModP, Exact };
std::string to_string(CoeffMode m);

enum class FailureKind {
  RankDeficient,
  DimensionMismatch,
  CapExceeded,
  NonUnitPivot,
  CheckFailed,
  CoefficientOverflow,
};
std::string to_string(FailureKind k);

/// Column-major sparse matrix; cols[j] lists (row, value) in increasing row order.
template <class T>
struct SparseMatrix {
  std::size_t n = 0;
  std::vector<std::vector<std::pair<int, T>>> cols;
};

using ModpMatrix = SparseMatrix<std::uint64_t>;
using ExactMatrix = SparseMatrix<LaurentPoly>;

struct CertifyOptions {
  CoeffMode mode = CoeffMode::ModP;
  std::uint64_t prime = kDefaultPrime;
  std::uint64_t seed = 1;
  /// Cap on vectors ever defined during enumeration.
  std::size_t max_vectors = 4'000'000;
  /// Parameters distinct within each class when sampling.
  bool distinct_params = true;
  /// Explicit specialization; overrides seed-based sampling.
  std::optional<SpecPoint> point;
};

struct CertifyStats {
  std::size_t vectors_defined = 0;
  std::size_t max_live = 0;
  std::size_t kills = 0;
  std::size_t deductions = 0;
  std::size_t sweeps = 0;
  std::size_t dimension = 0;
  double enumerate_seconds = 0;
  double check_seconds = 0;
};

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct FreenessCertificate {
  std::string group;
  CoeffMode mode = CoeffMode::ModP;
  std::uint64_t seed = 0;
  std::uint64_t prime = 0;
  /// Populated in ModP mode.
  SpecPoint point;
  std::vector<std::string> generators;
  std::vector<Word> basis;
  std::size_t rank = 0;
  /// Left multiplication by each unit letter (column 2g is g, 2g+1 is g^-1) in the basis.
  std::vector<ModpMatrix> modp;
  std::vector<ExactMatrix> exact;
  std::vector<CheckResult> checks;

  std::size_t dim() const { return basis.size(); }
  bool all_checks_pass() const;
};

struct CertifyFailure {
  FailureKind kind = FailureKind::RankDeficient;
  std::string message;
  std::size_t dimension = 0;
  std::size_t rank = 0;
  std::size_t basis_size = 0;
};

struct CertifyResult {
  std::optional<FreenessCertificate> certificate;
  std::optional<CertifyFailure> failure;
  CertifyStats stats;

  bool ok() const { return certificate.has_value() && !failure.has_value(); }
};

/// Closes the regular module under the generators by vector enumeration, then
/// expresses the action in `basis`. Returns a certificate only when the basis
/// words span a module of exactly their number and every identity holds.
CertifyResult certify_freeness(const HeckeSpec& spec, const SpanningSet& basis, const CertifyOptions& opts = {});

/// Inverse, defining polynomial, braid relations and centrality of z, recomputed from the matrices.
std::vector<CheckResult> run_certificate_checks(const HeckeSpec& spec, const FreenessCertificate& cert);

SpecPoint sample_point(const HeckeSpec& spec, std::uint64_t seed, std::uint64_t prime, bool distinct = true);

/// Each class's parameters become the e_c distinct e_c-th roots of unity. Throws RingError
/// when e_c does not divide p - 1.
SpecPoint roots_of_unity_point(const HeckeSpec& spec, std::uint64_t prime);

struct GroupAlgebraReport {
  bool powers_ok = false;
  std::size_t algebra_dim = 0;
  bool dimension_ok = false;
  bool charpoly_ok = false;
  std::vector<std::string> failures;

  bool pass() const { return powers_ok && dimension_ok && charpoly_ok; }
};

/// At a roots-of-unity point: L_g^{e_g} = I, the generated algebra has dimension |W|
/// (cyclic span of a random vector), and characteristic polynomials of every L_g and
/// of L_z match the permutation action on `table`.
GroupAlgebraReport group_algebra_check(const HeckeSpec& spec, const FreenessCertificate& cert,
                                       const CosetTable& table, std::uint64_t seed = 1);

/// Coordinates of b_i * b_j: the letters of b_i applied, right to left, to e_j.
std::vector<std::uint64_t> structure_constants(const FreenessCertificate& cert, std::size_t i, std::size_t j);
std::vector<LaurentPoly> structure_constants_exact(const HeckeSpec& spec, const FreenessCertificate& cert,
                                                   std::size_t i, std::size_t j);

/// Byte-stable text form: header, basis, sparse row-major triplets per letter, checks.
std::string serialize_certificate(const FreenessCertificate& cert);

/// Characteristic polynomial over F_p, coefficients from X^0 up to the monic X^n.
std::vector<std::uint64_t> charpoly_modp(std::vector<std::vector<std::uint64_t>> dense, const PrimeField& F);

}  // namespace bmr
