#include <random>

#include "bmr/hecke.hpp"

namespace bmr {

namespace {

using DenseModp = std::vector<std::vector<std::uint64_t>>;  // row-major

DenseModp to_dense(const ModpMatrix& m) {
  DenseModp d(m.n, std::vector<std::uint64_t>(m.cols.size(), 0));
  for (std::size_t j = 0; j < m.cols.size(); ++j)
    for (const auto& [i, v] : m.cols[j]) d[static_cast<std::size_t>(i)][j] = v;
  return d;
}

DenseModp identity(std::size_t n) {
  DenseModp d(n, std::vector<std::uint64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 1;
  return d;
}

// L * X, X row-major.
DenseModp left_mul(const PrimeField& F, const ModpMatrix& L, const DenseModp& X) {
  const std::size_t n = X.size();
  const std::size_t m = n ? X[0].size() : 0;
  DenseModp out(L.n, std::vector<std::uint64_t>(m, 0));
  for (std::size_t k = 0; k < L.cols.size(); ++k) {
    const auto& src = X[k];
    for (const auto& [i, v] : L.cols[k]) {
      auto& dst = out[static_cast<std::size_t>(i)];
      for (std::size_t j = 0; j < m; ++j)
        if (src[j]) dst[j] = F.add(dst[j], F.mul(v, src[j]));
    }
  }
  return out;
}

std::vector<std::uint64_t> apply(const PrimeField& F, const ModpMatrix& L, const std::vector<std::uint64_t>& v) {
  std::vector<std::uint64_t> out(L.n, 0);
  for (std::size_t k = 0; k < L.cols.size(); ++k) {
    if (!v[k]) continue;
    for (const auto& [i, a] : L.cols[k]) out[static_cast<std::size_t>(i)] = F.add(out[static_cast<std::size_t>(i)], F.mul(a, v[k]));
  }
  return out;
}

DenseModp word_matrix(const PrimeField& F, const FreenessCertificate& cert, const Word& w) {
  DenseModp m = identity(cert.dim());
  auto cols = unit_letters(w);
  for (auto it = cols.rbegin(); it != cols.rend(); ++it) m = left_mul(F, cert.modp[static_cast<std::size_t>(*it)], m);
  return m;
}

std::vector<std::uint64_t> perm_charpoly(const Perm& p, const PrimeField& F) {
  std::vector<std::uint64_t> poly{1};
  std::vector<char> seen(p.size(), 0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(p[j])) {
      seen[j] = 1;
      ++len;
    }
    // times (X^len - 1)
    std::vector<std::uint64_t> next(poly.size() + len, 0);
    for (std::size_t k = 0; k < poly.size(); ++k) {
      next[k + len] = F.add(next[k + len], poly[k]);
      next[k] = F.sub(next[k], poly[k]);
    }
    poly = std::move(next);
  }
  return poly;
}

// Echelon basis of flattened vectors, reduced in insertion order.
class Echelon {
 public:
  explicit Echelon(const PrimeField& F) : F_(F) {}

  bool insert(std::vector<std::uint64_t> v) {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      std::uint64_t c = v[pivots_[r]];
      if (!c) continue;
      const auto& row = rows_[r];
      for (std::size_t k = 0; k < v.size(); ++k)
        if (row[k]) v[k] = F_.sub(v[k], F_.mul(c, row[k]));
    }
    std::size_t piv = 0;
    while (piv < v.size() && !v[piv]) ++piv;
    if (piv == v.size()) return false;
    std::uint64_t inv = F_.inv(v[piv]);
    for (auto& x : v) x = F_.mul(x, inv);
    rows_.push_back(std::move(v));
    pivots_.push_back(piv);
    return true;
  }
  std::size_t size() const { return rows_.size(); }

 private:
  PrimeField F_;
  std::vector<std::vector<std::uint64_t>> rows_;
  std::vector<std::size_t> pivots_;
};

std::vector<std::uint64_t> flatten(const DenseModp& m) {
  std::vector<std::uint64_t> out;
  for (const auto& row : m) out.insert(out.end(), row.begin(), row.end());
  return out;
}

}  // namespace

std::vector<std::uint64_t> charpoly_modp(std::vector<std::vector<std::uint64_t>> a, const PrimeField& F) {
  const std::size_t n = a.size();
  // Reduce to upper Hessenberg form by similarity.
  for (std::size_t j = 0; j + 2 < n; ++j) {
    std::size_t piv = j + 1;
    while (piv < n && !a[piv][j]) ++piv;
    if (piv == n) continue;
    if (piv != j + 1) {
      std::swap(a[piv], a[j + 1]);
      for (std::size_t r = 0; r < n; ++r) std::swap(a[r][piv], a[r][j + 1]);
    }
    std::uint64_t inv = F.inv(a[j + 1][j]);
    for (std::size_t i = j + 2; i < n; ++i) {
      if (!a[i][j]) continue;
      std::uint64_t u = F.mul(a[i][j], inv);
      for (std::size_t k = 0; k < n; ++k) a[i][k] = F.sub(a[i][k], F.mul(u, a[j + 1][k]));
      for (std::size_t r = 0; r < n; ++r) a[r][j + 1] = F.add(a[r][j + 1], F.mul(u, a[r][i]));
    }
  }
  // p_m = (X - h_mm) p_{m-1} - sum_i h_im (prod h_{k,k-1}) p_{i-1}
  std::vector<std::vector<std::uint64_t>> p(n + 1);
  p[0] = {1};
  for (std::size_t m = 1; m <= n; ++m) {
    std::vector<std::uint64_t> cur(m + 1, 0);
    for (std::size_t k = 0; k < p[m - 1].size(); ++k) {
      cur[k + 1] = F.add(cur[k + 1], p[m - 1][k]);
      cur[k] = F.sub(cur[k], F.mul(a[m - 1][m - 1], p[m - 1][k]));
    }
    std::uint64_t t = 1;
    for (std::size_t i = m - 1; i >= 1; --i) {
      t = F.mul(t, a[i][i - 1]);
      if (!t) break;
      std::uint64_t f = F.mul(t, a[i - 1][m - 1]);
      for (std::size_t k = 0; k < p[i - 1].size(); ++k) cur[k] = F.sub(cur[k], F.mul(f, p[i - 1][k]));
    }
    p[m] = std::move(cur);
  }
  return p[n];
}

GroupAlgebraReport group_algebra_check(const HeckeSpec& spec, const FreenessCertificate& cert, const CosetTable& table,
                                       std::uint64_t seed) {
  GroupAlgebraReport rep;
  if (cert.mode != CoeffMode::ModP) {
    rep.failures.push_back("group algebra check needs a prime-field certificate");
    return rep;
  }
  PrimeField F(cert.prime);
  const std::size_t n = cert.dim();
  const std::size_t ngens = spec.braid.generators.size();

  rep.powers_ok = true;
  for (std::size_t g = 0; g < ngens; ++g) {
    int e = spec.class_order[static_cast<std::size_t>(spec.gen_class[g])];
    if (word_matrix(F, cert, Word({Letter{static_cast<int>(g), e}})) != identity(n)) {
      rep.powers_ok = false;
      rep.failures.push_back("L_" + spec.braid.generators[g] + "^" + std::to_string(e) + " != I");
    }
  }

  // Span of all products of the L matrices, grown breadth-first from I.
  Echelon ech(F);
  std::vector<DenseModp> frontier{identity(n)};
  ech.insert(flatten(frontier[0]));
  for (std::size_t h = 0; h < frontier.size() && ech.size() <= n; ++h) {
    for (std::size_t x = 0; x < 2 * ngens; ++x) {
      DenseModp m = left_mul(F, cert.modp[x], frontier[h]);
      if (ech.insert(flatten(m))) frontier.push_back(std::move(m));
      if (ech.size() > n) break;
    }
  }
  rep.algebra_dim = ech.size();
  rep.dimension_ok = rep.algebra_dim == n && n == table.size;
  if (!rep.dimension_ok)
    rep.failures.push_back("generated algebra has dimension " + std::to_string(rep.algebra_dim) + ", expected " +
                           std::to_string(table.size));

  // A random vector must be cyclic for the regular module.
  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> v(n);
  for (auto& x : v) x = rng() % cert.prime;
  Echelon orbit(F);
  std::vector<std::vector<std::uint64_t>> queue{v};
  orbit.insert(v);
  for (std::size_t h = 0; h < queue.size(); ++h)
    for (std::size_t x = 0; x < 2 * ngens; ++x) {
      auto w = apply(F, cert.modp[x], queue[h]);
      if (orbit.insert(w)) queue.push_back(std::move(w));
    }
  if (orbit.size() != n) {
    rep.dimension_ok = false;
    rep.failures.push_back("random vector spans only " + std::to_string(orbit.size()) + " dimensions");
  }

  rep.charpoly_ok = table.size == n;
  if (!rep.charpoly_ok) rep.failures.push_back("coset table size differs from certificate dimension");
  for (std::size_t g = 0; g <= ngens && rep.charpoly_ok; ++g) {
    Word w = g < ngens ? Word({Letter{static_cast<int>(g), 1}}) : spec.braid.center;
    std::string label = g < ngens ? "L_" + spec.braid.generators[g] : "L_z";
    if (charpoly_modp(word_matrix(F, cert, w), F) != perm_charpoly(eval_word(table, w), F)) {
      rep.charpoly_ok = false;
      rep.failures.push_back("characteristic polynomial of " + label + " differs from the regular representation");
    }
  }
  return rep;
}

std::vector<std::uint64_t> structure_constants(const FreenessCertificate& cert, std::size_t i, std::size_t j) {
  if (cert.mode != CoeffMode::ModP) throw std::invalid_argument("structure_constants needs a prime-field certificate");
  PrimeField F(cert.prime);
  std::vector<std::uint64_t> v(cert.dim(), 0);
  v.at(j) = 1;
  auto cols = unit_letters(cert.basis.at(i));
  for (auto it = cols.rbegin(); it != cols.rend(); ++it) v = apply(F, cert.modp[static_cast<std::size_t>(*it)], v);
  return v;
}

std::vector<LaurentPoly> structure_constants_exact(const HeckeSpec& spec, const FreenessCertificate& cert,
                                                   std::size_t i, std::size_t j) {
  if (cert.mode != CoeffMode::Exact) throw std::invalid_argument("structure_constants_exact needs an exact certificate");
  std::vector<LaurentPoly> v(cert.dim(), LaurentPoly(spec.vars));
  v.at(j) = LaurentPoly::constant(spec.vars, 1);
  auto cols = unit_letters(cert.basis.at(i));
  for (auto it = cols.rbegin(); it != cols.rend(); ++it) {
    const auto& L = cert.exact[static_cast<std::size_t>(*it)];
    std::vector<LaurentPoly> out(cert.dim(), LaurentPoly(spec.vars));
    for (std::size_t k = 0; k < L.cols.size(); ++k) {
      if (v[k].is_zero()) continue;
      for (const auto& [r, a] : L.cols[k]) out[static_cast<std::size_t>(r)] += a * v[k];
    }
    v = std::move(out);
  }
  return v;
}

}  // namespace bmr
