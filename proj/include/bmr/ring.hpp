#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace bmr {

class RingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an operation would produce more terms than the configured cap.
class RingOverflow : public RingError {
 public:
  using RingError::RingError;
};

/// Ordered list of parameter names; exponent vectors index into it.
class VarSet {
 public:
  explicit VarSet(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  const std::vector<std::string>& names() const { return names_; }
  /// Index of a name, or -1.
  long index(const std::string& name) const;

 private:
  std::vector<std::string> names_;
};

using VarSetPtr = std::shared_ptr<const VarSet>;

VarSetPtr make_varset(std::vector<std::string> names);

/// Multivariate Laurent polynomial with arbitrary-precision integer coefficients.
///
/// Terms are kept in canonical form: no zero coefficients, exponent vectors of
/// length vars()->size(), ordered lexicographically by exponent vector.
class LaurentPoly {
 public:
  using Exponents = std::vector<int>;
  using TermMap = std::map<Exponents, mpz_class>;

  LaurentPoly() = default;
  explicit LaurentPoly(VarSetPtr vars);

  static LaurentPoly constant(VarSetPtr vars, long c);
  static LaurentPoly constant(VarSetPtr vars, const mpz_class& c);
  static LaurentPoly variable(VarSetPtr vars, std::size_t index, int power = 1);
  static LaurentPoly variable(VarSetPtr vars, const std::string& name, int power = 1);
  static LaurentPoly monomial(VarSetPtr vars, Exponents exps, const mpz_class& coeff);
  /// Parses `3*u_s1^2*u_t2^-1 - 1`. Names must belong to `vars`.
  static LaurentPoly parse(const std::string& text, VarSetPtr vars);

  const VarSetPtr& vars() const { return vars_; }
  const TermMap& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }

  bool is_zero() const { return terms_.empty(); }
  bool is_one() const;
  /// A single term with coefficient +1 or -1.
  bool is_unit() const;
  /// Inverse of a unit; throws RingError for non-units.
  LaurentPoly inverse_unit() const;

  LaurentPoly operator-() const;
  LaurentPoly& operator+=(const LaurentPoly& o);
  LaurentPoly& operator-=(const LaurentPoly& o);
  LaurentPoly& operator*=(const LaurentPoly& o);
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  bool operator==(const LaurentPoly& o) const;
  bool operator!=(const LaurentPoly& o) const { return !(*this == o); }

  /// Canonical text form; parse(str()) == *this.
  std::string str() const;

  /// Global cap on the number of terms any single result may hold.
  static void set_term_cap(std::size_t cap);
  static std::size_t term_cap();

 private:
  void check_compatible(const LaurentPoly& o) const;
  void check_cap() const;

  VarSetPtr vars_;
  TermMap terms_;
};

enum class LpOp { Add, Sub, Mul };

/// Exact ring arithmetic; throws RingError on variable-set mismatch.
LaurentPoly lp_arith(const LaurentPoly& a, const LaurentPoly& b, LpOp op);
LaurentPoly lp_invert_unit(const LaurentPoly& a);

/// Arithmetic in Z/pZ for an odd prime p < 2^63.
class PrimeField {
 public:
  explicit PrimeField(std::uint64_t p);

  std::uint64_t p() const { return p_; }
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    std::uint64_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return a >= b ? a - b : a + p_ - b; }
  std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : p_ - a; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p_);
  }
  std::uint64_t pow(std::uint64_t a, std::uint64_t e) const;
  /// Throws RingError on zero.
  std::uint64_t inv(std::uint64_t a) const;
  std::uint64_t reduce(long long v) const;
  std::uint64_t reduce(const mpz_class& v) const;

  /// Generator of the multiplicative group.
  std::uint64_t primitive_root() const;
  /// A primitive n-th root of unity; throws if n does not divide p-1.
  std::uint64_t root_of_unity(std::uint64_t n) const;

 private:
  std::uint64_t p_;
};

bool is_prime(std::uint64_t n);

inline constexpr std::uint64_t kDefaultPrime = 2147483629ULL;

/// Residue modulo a prime, carrying its modulus.
struct FieldElem {
  std::uint64_t value = 0;
  std::uint64_t modulus = kDefaultPrime;

  FieldElem() = default;
  FieldElem(std::uint64_t v, std::uint64_t p) : value(v % p), modulus(p) {}

  friend FieldElem operator+(FieldElem a, FieldElem b);
  friend FieldElem operator-(FieldElem a, FieldElem b);
  friend FieldElem operator*(FieldElem a, FieldElem b);
  FieldElem inverse() const;
  bool operator==(const FieldElem& o) const = default;
};

/// An assignment of nonzero residues to parameter names.
struct SpecPoint {
  std::map<std::string, std::uint64_t> assignment;
  std::uint64_t seed = 0;
  std::uint64_t prime = kDefaultPrime;

  std::uint64_t at(const std::string& name) const;
};

/// Uniform nonzero residues from a seeded generator. Each group in
/// `distinct_groups` lists names whose values must be pairwise distinct;
/// collisions are resampled.
SpecPoint random_point(const VarSet& vars, std::uint64_t seed, std::uint64_t prime,
                       const std::vector<std::vector<std::string>>& distinct_groups = {});

/// Ring homomorphism R -> F_p; negative exponents use field inverses.
FieldElem specialize(const LaurentPoly& a, const SpecPoint& pt);

}  // namespace bmr
