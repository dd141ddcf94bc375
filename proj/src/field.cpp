#include "bmr/ring.hpp"

#include <random>
#include <set>

namespace bmr {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t q = 2; q * q <= n; ++q) {
    if (n % q == 0) {
      out.push_back(q);
      while (n % q == 0) n /= q;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These bases are deterministic for all 64-bit n.
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

PrimeField::PrimeField(std::uint64_t p) : p_(p) {
  if (p < 3 || p >= (1ULL << 63) || !is_prime(p))
    throw RingError("modulus " + std::to_string(p) + " is not an odd prime below 2^63");
}

std::uint64_t PrimeField::pow(std::uint64_t a, std::uint64_t e) const { return powmod(a, e, p_); }

std::uint64_t PrimeField::inv(std::uint64_t a) const {
  a %= p_;
  if (a == 0) throw RingError("inverse of zero");
  return powmod(a, p_ - 2, p_);
}

std::uint64_t PrimeField::reduce(long long v) const {
  long long r = v % static_cast<long long>(p_);
  if (r < 0) r += static_cast<long long>(p_);
  return static_cast<std::uint64_t>(r);
}

std::uint64_t PrimeField::reduce(const mpz_class& v) const {
  mpz_class m(std::to_string(p_));
  mpz_class r = v % m;
  if (r < 0) r += m;
  return std::stoull(r.get_str());
}

std::uint64_t PrimeField::primitive_root() const {
  const auto factors = prime_factors(p_ - 1);
  for (std::uint64_t g = 2; g < p_; ++g) {
    bool ok = true;
    for (std::uint64_t q : factors) {
      if (powmod(g, (p_ - 1) / q, p_) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  throw RingError("no primitive root found");
}

std::uint64_t PrimeField::root_of_unity(std::uint64_t n) const {
  if (n == 0 || (p_ - 1) % n != 0)
    throw RingError(std::to_string(n) + " does not divide p-1 for p = " + std::to_string(p_));
  return powmod(primitive_root(), (p_ - 1) / n, p_);
}

FieldElem operator+(FieldElem a, FieldElem b) {
  if (a.modulus != b.modulus) throw RingError("modulus mismatch");
  return FieldElem(PrimeField(a.modulus).add(a.value, b.value), a.modulus);
}

FieldElem operator-(FieldElem a, FieldElem b) {
  if (a.modulus != b.modulus) throw RingError("modulus mismatch");
  std::uint64_t v = a.value >= b.value ? a.value - b.value : a.value + a.modulus - b.value;
  return FieldElem(v, a.modulus);
}

FieldElem operator*(FieldElem a, FieldElem b) {
  if (a.modulus != b.modulus) throw RingError("modulus mismatch");
  return FieldElem(mulmod(a.value, b.value, a.modulus), a.modulus);
}

FieldElem FieldElem::inverse() const {
  if (value == 0) throw RingError("inverse of zero");
  return FieldElem(powmod(value, modulus - 2, modulus), modulus);
}

std::uint64_t SpecPoint::at(const std::string& name) const {
  auto it = assignment.find(name);
  if (it == assignment.end()) throw RingError("parameter '" + name + "' is not assigned");
  return it->second;
}

SpecPoint random_point(const VarSet& vars, std::uint64_t seed, std::uint64_t prime,
                       const std::vector<std::vector<std::string>>& distinct_groups) {
  PrimeField F(prime);
  std::mt19937_64 rng(seed);
  SpecPoint pt;
  pt.seed = seed;
  pt.prime = prime;
  for (const auto& name : vars.names()) pt.assignment[name] = rng() % (prime - 1) + 1;
  // Resample collisions in declaration order so the result depends only on the seed.
  for (const auto& group : distinct_groups) {
    std::set<std::uint64_t> seen;
    for (const auto& name : group) {
      auto it = pt.assignment.find(name);
      if (it == pt.assignment.end()) throw RingError("distinct group names unknown parameter " + name);
      while (seen.count(it->second)) it->second = rng() % (prime - 1) + 1;
      seen.insert(it->second);
    }
  }
  return pt;
}

FieldElem specialize(const LaurentPoly& a, const SpecPoint& pt) {
  PrimeField F(pt.prime);
  if (!a.vars()) return FieldElem(0, pt.prime);
  const auto& names = a.vars()->names();
  std::vector<std::uint64_t> val(names.size()), inv(names.size());
  std::vector<bool> used(names.size(), false);
  for (const auto& [e, c] : a.terms())
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] != 0) used[i] = true;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!used[i]) continue;
    val[i] = pt.at(names[i]) % pt.prime;
    inv[i] = F.inv(val[i]);
  }
  std::uint64_t acc = 0;
  for (const auto& [e, c] : a.terms()) {
    std::uint64_t t = F.reduce(c);
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] > 0) t = F.mul(t, F.pow(val[i], static_cast<std::uint64_t>(e[i])));
      else if (e[i] < 0) t = F.mul(t, F.pow(inv[i], static_cast<std::uint64_t>(-e[i])));
    }
    acc = F.add(acc, t);
  }
  return FieldElem(acc, pt.prime);
}

}  // namespace bmr
