#include "bmr/b3.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

namespace bmr {

namespace {

ModpMat zeros(std::size_t k) { return ModpMat(k, std::vector<std::uint64_t>(k, 0)); }

ModpMat eye(std::size_t k) {
  ModpMat m = zeros(k);
  for (std::size_t i = 0; i < k; ++i) m[i][i] = 1;
  return m;
}

VarSetPtr lambda_vars(int k) {
  std::vector<std::string> names;
  for (int i = 1; i <= k; ++i) names.push_back("l" + std::to_string(i));
  return make_varset(names);
}

PolyMat parse_matrix(const std::vector<std::vector<std::string>>& rows, const VarSetPtr& vars) {
  PolyMat m;
  for (const auto& row : rows) {
    std::vector<LaurentPoly> r;
    for (const auto& e : row) r.push_back(LaurentPoly::parse(e, vars));
    m.push_back(std::move(r));
  }
  return m;
}

SpecPoint lambda_point(const RepSpec& s) {
  SpecPoint pt;
  pt.prime = s.prime;
  for (int i = 0; i < s.k; ++i) pt.assignment["l" + std::to_string(i + 1)] = s.lambda.at(static_cast<std::size_t>(i));
  return pt;
}

ModpMat specialize_matrix(const PolyMat& m, const SpecPoint& pt) {
  ModpMat out = zeros(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) out[i][j] = specialize(m[i][j], pt).value;
  return out;
}

void check_lambdas(const RepSpec& s) {
  if (s.k < 2 || s.k > 5) throw B3Error("dimension must be between 2 and 5");
  if (s.lambda.size() != static_cast<std::size_t>(s.k)) throw B3Error("need exactly k eigenvalues");
  for (auto l : s.lambda)
    if (l % s.prime == 0) throw B3Error("eigenvalues must be nonzero");
}

std::uint64_t product(const std::vector<std::uint64_t>& xs, const PrimeField& F) {
  std::uint64_t p = 1;
  for (auto x : xs) p = F.mul(p, x);
  return p;
}

void check_root(const RepSpec& s, const PrimeField& F) {
  std::uint64_t det = product(s.lambda, F);
  if (s.k == 4 && F.pow(s.root, 2) != det) throw B3Error("r^2 must equal l1 l2 l3 l4");
  if (s.k == 5 && F.pow(s.root, 5) != det) throw B3Error("r~^5 must equal det A");
}

// Basis of the right kernel of m.
std::vector<std::vector<std::uint64_t>> kernel(ModpMat m, const PrimeField& F) {
  const std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
  std::vector<std::size_t> pivcol;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && !m[piv][c]) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[r]);
    std::uint64_t inv = F.inv(m[r][c]);
    for (auto& x : m[r]) x = F.mul(x, inv);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || !m[i][c]) continue;
      std::uint64_t f = m[i][c];
      for (std::size_t k = 0; k < cols; ++k) m[i][k] = F.sub(m[i][k], F.mul(f, m[r][k]));
    }
    pivcol.push_back(c);
    ++r;
  }
  std::vector<std::vector<std::uint64_t>> out;
  std::set<std::size_t> pivots(pivcol.begin(), pivcol.end());
  for (std::size_t free = 0; free < cols; ++free) {
    if (pivots.count(free)) continue;
    std::vector<std::uint64_t> v(cols, 0);
    v[free] = 1;
    for (std::size_t i = 0; i < pivcol.size(); ++i) v[pivcol[i]] = F.neg(m[i][free]);
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<std::uint64_t> mat_vec(const ModpMat& a, const std::vector<std::uint64_t>& v, const PrimeField& F) {
  std::vector<std::uint64_t> out(a.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out[i] = F.add(out[i], F.mul(a[i][j], v[j]));
  return out;
}

bool parallel(const std::vector<std::uint64_t>& v, const std::vector<std::uint64_t>& w, const PrimeField& F) {
  // w = c v for some c
  std::size_t i = 0;
  while (i < v.size() && !v[i]) ++i;
  if (i == v.size()) return true;
  std::uint64_t c = F.mul(w[i], F.inv(v[i]));
  for (std::size_t j = 0; j < v.size(); ++j)
    if (w[j] != F.mul(c, v[j])) return false;
  return true;
}

ModpMat transpose(const ModpMat& a) {
  ModpMat t = zeros(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) t[j][i] = a[i][j];
  return t;
}

bool common_eigenvector(const ModpMat& A, const ModpMat& B, const std::vector<std::uint64_t>& eigen, const PrimeField& F) {
  for (auto l : std::set<std::uint64_t>(eigen.begin(), eigen.end())) {
    ModpMat m = A;
    for (std::size_t i = 0; i < m.size(); ++i) m[i][i] = F.sub(m[i][i], l);
    auto ker = kernel(m, F);
    if (ker.size() == 1 && parallel(ker[0], mat_vec(B, ker[0], F), F)) return true;
  }
  return false;
}

std::optional<ModpMat> inverse(ModpMat a, const PrimeField& F) {
  const std::size_t n = a.size();
  ModpMat inv = eye(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && !a[piv][c]) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(a[piv], a[c]);
    std::swap(inv[piv], inv[c]);
    std::uint64_t pi = F.inv(a[c][c]);
    for (std::size_t k = 0; k < n; ++k) {
      a[c][k] = F.mul(a[c][k], pi);
      inv[c][k] = F.mul(inv[c][k], pi);
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || !a[i][c]) continue;
      std::uint64_t f = a[i][c];
      for (std::size_t k = 0; k < n; ++k) {
        a[i][k] = F.sub(a[i][k], F.mul(f, a[c][k]));
        inv[i][k] = F.sub(inv[i][k], F.mul(f, inv[c][k]));
      }
    }
  }
  return inv;
}

std::uint64_t sample_nonzero(std::mt19937_64& rng, std::uint64_t p) { return rng() % (p - 1) + 1; }

}  // namespace

ModpMat mat_mul(const ModpMat& a, const ModpMat& b, const PrimeField& F) {
  const std::size_t n = a.size();
  ModpMat c = zeros(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      if (!a[i][k]) continue;
      for (std::size_t j = 0; j < n; ++j) c[i][j] = F.add(c[i][j], F.mul(a[i][k], b[k][j]));
    }
  return c;
}

std::uint64_t mat_det(ModpMat a, const PrimeField& F) {
  const std::size_t n = a.size();
  std::uint64_t det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && !a[piv][c]) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      std::swap(a[piv], a[c]);
      det = F.neg(det);
    }
    det = F.mul(det, a[c][c]);
    std::uint64_t inv = F.inv(a[c][c]);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (!a[i][c]) continue;
      std::uint64_t f = F.mul(a[i][c], inv);
      for (std::size_t k = c; k < n; ++k) a[i][k] = F.sub(a[i][k], F.mul(f, a[c][k]));
    }
  }
  return det;
}

std::vector<std::uint64_t> mat_charpoly(const ModpMat& a, const PrimeField& F) {
  // Faddeev-LeVerrier; needs p > k.
  const std::size_t n = a.size();
  std::vector<std::uint64_t> c(n + 1, 0);
  c[n] = 1;
  ModpMat M = zeros(n);
  for (std::size_t m = 1; m <= n; ++m) {
    ModpMat AM = mat_mul(a, M, F);
    for (std::size_t i = 0; i < n; ++i) AM[i][i] = F.add(AM[i][i], c[n - m + 1]);
    M = AM;
    ModpMat AM2 = mat_mul(a, M, F);
    std::uint64_t tr = 0;
    for (std::size_t i = 0; i < n; ++i) tr = F.add(tr, AM2[i][i]);
    c[n - m] = F.neg(F.mul(tr, F.inv(m)));
  }
  return c;
}

RepPair build_rep(const RepSpec& s) {
  check_lambdas(s);
  PrimeField F(s.prime);
  RepPair out;
  out.k = s.k;
  out.prime = s.prime;
  if (s.k == 5) throw B3Error("no explicit matrix model for dimension 5");
  if (s.k <= 3) {
    SymbolicRep sym = symbolic_rep(s.k);
    SpecPoint pt = lambda_point(s);
    out.A = specialize_matrix(sym.A, pt);
    out.B = specialize_matrix(sym.B, pt);
    return out;
  }
  check_root(s, F);
  const auto l1 = s.lambda[0], l2 = s.lambda[1], l3 = s.lambda[2], l4 = s.lambda[3];
  const auto r = s.root;
  auto mul = [&](std::initializer_list<std::uint64_t> xs) {
    std::uint64_t p = 1;
    for (auto x : xs) p = F.mul(p, x);
    return p;
  };
  const auto i1 = F.inv(l1), i3 = F.inv(l3), ir = F.inv(r);
  // alpha = (r - l2 l3 - l1 l4) / l1^2
  const auto alpha = F.mul(F.sub(F.sub(r, mul({l2, l3})), mul({l1, l4})), mul({i1, i1}));
  out.A = zeros(4);
  out.A[0][0] = l1;
  out.A[1][0] = mul({l1, l1, i3});
  out.A[1][1] = l2;
  out.A[2][0] = mul({l1, l1, l1, ir});
  out.A[2][1] = F.mul(F.sub(mul({l1, l2, l3}), mul({l1, r})), ir);
  out.A[2][2] = l3;
  out.A[3][0] = F.neg(l2);
  out.A[3][1] = mul({l2, alpha});
  out.A[3][2] = mul({r, alpha, i1});
  out.A[3][3] = l4;
  out.B = zeros(4);
  out.B[0][0] = l4;
  out.B[0][1] = mul({l3, alpha});
  out.B[0][2] = mul({l2, l3, alpha, i1});
  out.B[0][3] = F.neg(mul({l2, l3, l3, ir}));
  out.B[1][1] = l3;
  out.B[1][2] = F.mul(F.sub(mul({l2, l3}), r), i1);
  out.B[1][3] = mul({l1, l1, l3, ir});
  out.B[2][2] = l2;
  out.B[2][3] = mul({l1, l1, l1, ir});
  out.B[3][3] = l1;
  return out;
}

std::uint64_t condition_value(const RepSpec& s) {
  check_lambdas(s);
  PrimeField F(s.prime);
  const auto& l = s.lambda;
  auto sq = [&](std::uint64_t x) { return F.mul(x, x); };
  switch (s.k) {
    case 2:
      return F.add(F.sub(sq(l[0]), F.mul(l[0], l[1])), sq(l[1]));
    case 3:
      return F.mul(F.mul(F.add(sq(l[0]), F.mul(l[1], l[2])), F.add(sq(l[1]), F.mul(l[0], l[2]))),
                   F.add(sq(l[2]), F.mul(l[0], l[1])));
    case 4: {
      check_root(s, F);
      const auto r = s.root;
      std::uint64_t v = F.mul(2, r);
      for (auto x : l) v = F.mul(v, F.sub(r, sq(x)));
      const int parts[3][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}};
      for (const auto& p : parts)
        v = F.mul(v, F.sub(F.sub(r, F.mul(l[p[0]], l[p[1]])), F.mul(l[p[2]], l[p[3]])));
      return v;
    }
    case 5: {
      check_root(s, F);
      const auto t = s.root;
      std::uint64_t v = 1;
      for (auto x : l) v = F.mul(v, F.add(F.add(sq(t), F.mul(x, t)), sq(x)));
      for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = i + 1; j < 5; ++j) v = F.mul(v, F.add(sq(t), F.mul(l[i], l[j])));
      return v;
    }
  }
  throw B3Error("unsupported dimension");
}

bool irreducibility_condition(const RepSpec& s) {
  if (condition_value(s) == 0) return false;
  if (s.k == 5) {
    PrimeField F(s.prime);
    std::uint64_t det = product(s.lambda, F);
    for (auto li : s.lambda)
      for (auto lj : s.lambda)
        if (det == F.neg(F.mul(F.pow(li, 6), F.inv(lj)))) return false;
  }
  return true;
}

std::size_t generated_algebra_dim(const RepPair& pair) {
  PrimeField F(pair.prime);
  const std::size_t k = static_cast<std::size_t>(pair.k);
  std::vector<std::vector<std::uint64_t>> rows;
  std::vector<std::size_t> pivots;
  auto insert = [&](const ModpMat& m) {
    std::vector<std::uint64_t> v;
    for (const auto& row : m) v.insert(v.end(), row.begin(), row.end());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      std::uint64_t c = v[pivots[r]];
      if (!c) continue;
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = F.sub(v[i], F.mul(c, rows[r][i]));
    }
    std::size_t p = 0;
    while (p < v.size() && !v[p]) ++p;
    if (p == v.size()) return false;
    std::uint64_t inv = F.inv(v[p]);
    for (auto& x : v) x = F.mul(x, inv);
    rows.push_back(std::move(v));
    pivots.push_back(p);
    return true;
  };
  std::vector<ModpMat> queue{eye(k)};
  insert(queue[0]);
  for (std::size_t h = 0; h < queue.size() && rows.size() < k * k; ++h) {
    for (const ModpMat* g : {&pair.A, &pair.B}) {
      ModpMat m = mat_mul(*g, queue[h], F);
      if (insert(m)) queue.push_back(std::move(m));
    }
  }
  return rows.size();
}

bool brute_irreducible(const RepPair& pair) {
  const std::size_t k = static_cast<std::size_t>(pair.k);
  return generated_algebra_dim(pair) == k * k;
}

std::optional<int> invariant_subspace_witness(const RepPair& pair, const RepSpec& spec) {
  PrimeField F(pair.prime);
  if (common_eigenvector(pair.A, pair.B, spec.lambda, F)) return 1;
  if (common_eigenvector(transpose(pair.A), transpose(pair.B), spec.lambda, F)) return pair.k - 1;
  return std::nullopt;
}

SymbolicRep symbolic_rep(int k) {
  SymbolicRep s;
  s.vars = lambda_vars(k);
  if (k == 2) {
    s.A = parse_matrix({{"l1", "l1"}, {"0", "l2"}}, s.vars);
    s.B = parse_matrix({{"l2", "0"}, {"-l2", "l1"}}, s.vars);
  } else if (k == 3) {
    s.A = parse_matrix({{"l3", "0", "0"}, {"l1*l3 + l2^2", "l2", "0"}, {"l2", "1", "l1"}}, s.vars);
    s.B = parse_matrix({{"l1", "-1", "l2"}, {"0", "l2", "-l1*l3 - l2^2"}, {"0", "0", "l3"}}, s.vars);
  } else {
    throw B3Error("symbolic models exist for k = 2, 3 only");
  }
  return s;
}

PolyMat symbolic_conjugator(const VarSetPtr& vars) {
  return parse_matrix(
      {{"-l1*l2 - l3^2", "l1*l3 - l1^2", "l2*l3 - l1*l2 - l3^2 + l1*l3"},
       {"l2*l3^2 + l1*l2^2 - l1*l3^2 - l1^2*l2", "2*l1^2*l2 - l1^3 + 2*l1^2*l3 - l1*l2*l3",
        "l1*l2^2 + l1^2*l3 - l2^2*l3 - l1*l3^2"},
       {"0", "l1^2 - l1*l3", "-l1*l3 - l2*l3"}},
      vars);
}

PolyMat poly_mul(const PolyMat& a, const PolyMat& b) {
  const std::size_t n = a.size();
  const VarSetPtr& vars = a[0][0].vars();
  PolyMat c(n, std::vector<LaurentPoly>(n, LaurentPoly(vars)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) c[i][j] += a[i][k] * b[k][j];
  return c;
}

LaurentPoly poly_det(const PolyMat& a) {
  const std::size_t n = a.size();
  if (n == 1) return a[0][0];
  if (n == 2) return a[0][0] * a[1][1] - a[0][1] * a[1][0];
  // Cofactor expansion along the first row.
  LaurentPoly det(a[0][0].vars());
  for (std::size_t j = 0; j < n; ++j) {
    PolyMat minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<LaurentPoly> row;
      for (std::size_t c = 0; c < n; ++c)
        if (c != j) row.push_back(a[i][c]);
      minor.push_back(std::move(row));
    }
    LaurentPoly term = a[0][j] * poly_det(minor);
    if (j % 2) det -= term;
    else det += term;
  }
  return det;
}

std::vector<LaurentPoly> poly_charpoly(const PolyMat& a) {
  const std::size_t n = a.size();
  if (n > 3) throw B3Error("symbolic characteristic polynomial is implemented for k <= 3");
  const VarSetPtr& vars = a[0][0].vars();
  LaurentPoly tr(vars);
  for (std::size_t i = 0; i < n; ++i) tr += a[i][i];
  if (n == 2) return {poly_det(a), -tr, LaurentPoly::constant(vars, 1)};
  LaurentPoly minors(vars);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) minors += a[i][i] * a[j][j] - a[i][j] * a[j][i];
  return {-poly_det(a), minors, -tr, LaurentPoly::constant(vars, 1)};
}

ConjugatorReport ordered_triangular_conjugate(const RepSpec& s) {
  if (s.k != 3) throw B3Error("the ordered conjugator is defined for k = 3");
  check_lambdas(s);
  PrimeField F(s.prime);
  ConjugatorReport rep;
  VarSetPtr vars = lambda_vars(3);
  SpecPoint pt = lambda_point(s);
  rep.D = specialize_matrix(symbolic_conjugator(vars), pt);
  rep.det = mat_det(rep.D, F);
  if (rep.det == 0) throw B3Error("det D vanishes at this point");
  const auto l1 = s.lambda[0], l2 = s.lambda[1], l3 = s.lambda[2];
  // l1 (l1^2 + l2 l3) (l3^2 + l1 l2)^2
  std::uint64_t q = F.add(F.mul(l3, l3), F.mul(l1, l2));
  std::uint64_t formula = F.mul(F.mul(l1, F.add(F.mul(l1, l1), F.mul(l2, l3))), F.mul(q, q));
  rep.det_formula_ok = formula == rep.det;
  RepPair pair = build_rep(s);
  ModpMat Dinv = *inverse(rep.D, F);
  ModpMat a = mat_mul(Dinv, mat_mul(pair.A, rep.D, F), F);
  ModpMat b = mat_mul(Dinv, mat_mul(pair.B, rep.D, F), F);
  const std::uint64_t adiag[3] = {l1, l2, l3}, bdiag[3] = {l2, l3, l1};
  rep.a_triangular = rep.b_triangular = true;
  for (std::size_t i = 0; i < 3; ++i) {
    if (a[i][i] != adiag[i]) rep.a_triangular = false;
    if (b[i][i] != bdiag[i]) rep.b_triangular = false;
    for (std::size_t j = i + 1; j < 3; ++j) {
      if (a[i][j]) rep.a_triangular = false;
      if (b[j][i]) rep.b_triangular = false;
    }
  }
  return rep;
}

RepSpec random_rep_spec(int k, std::uint64_t seed, std::uint64_t prime, int branch) {
  if (k < 2 || k > 5) throw B3Error("dimension must be between 2 and 5");
  PrimeField F(prime);
  std::mt19937_64 rng(seed);
  RepSpec s;
  s.k = k;
  s.prime = prime;
  while (true) {
    s.lambda.clear();
    const int free = k <= 3 ? k : k - 1;
    for (int i = 0; i < free; ++i) s.lambda.push_back(sample_nonzero(rng, prime));
    if (k == 4) {
      std::uint64_t r = sample_nonzero(rng, prime);
      s.lambda.push_back(F.mul(F.mul(r, r), F.inv(product(s.lambda, F))));
      s.root = branch ? F.neg(r) : r;
    } else if (k == 5) {
      std::uint64_t t = sample_nonzero(rng, prime);
      s.lambda.push_back(F.mul(F.pow(t, 5), F.inv(product(s.lambda, F))));
      s.root = t;
    }
    if (std::set<std::uint64_t>(s.lambda.begin(), s.lambda.end()).size() == s.lambda.size()) return s;
  }
}

std::vector<std::uint64_t> kth_roots(std::uint64_t d, int k, const PrimeField& F) {
  const std::uint64_t p = F.p();
  d %= p;
  if (d == 0) return {0};
  const std::uint64_t kk = static_cast<std::uint64_t>(k);
  if (std::gcd(kk, p - 1) == 1) {
    // x -> x^k is a bijection; invert the exponent modulo p - 1.
    __int128 a = static_cast<__int128>(kk), m = static_cast<__int128>(p - 1), x0 = 1, x1 = 0;
    while (m) {
      __int128 q = a / m, t = a % m;
      a = m;
      m = t;
      t = x0 - q * x1;
      x0 = x1;
      x1 = t;
    }
    __int128 e = x0 % static_cast<__int128>(p - 1);
    if (e < 0) e += static_cast<__int128>(p - 1);
    return {F.pow(d, static_cast<std::uint64_t>(e))};
  }
  if (k == 2) {
    if (F.pow(d, (p - 1) / 2) != 1) return {};
    // Tonelli-Shanks
    std::uint64_t q = p - 1, s = 0;
    while ((q & 1) == 0) {
      q >>= 1;
      ++s;
    }
    std::uint64_t z = 2;
    while (F.pow(z, (p - 1) / 2) != p - 1) ++z;
    std::uint64_t m = s, c = F.pow(z, q), t = F.pow(d, q), r = F.pow(d, (q + 1) / 2);
    while (t != 1) {
      std::uint64_t i = 0, tt = t;
      while (tt != 1) {
        tt = F.mul(tt, tt);
        ++i;
      }
      std::uint64_t b = c;
      for (std::uint64_t j = 0; j + i + 1 < m; ++j) b = F.mul(b, b);
      m = i;
      c = F.mul(b, b);
      t = F.mul(t, c);
      r = F.mul(r, b);
    }
    std::vector<std::uint64_t> out{r, F.neg(r)};
    std::sort(out.begin(), out.end());
    return out;
  }
  if (p < 2'000'000) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t x = 1; x < p; ++x)
      if (F.pow(x, kk) == d) out.push_back(x);
    return out;
  }
  throw B3Error("no k-th root method for k = " + std::to_string(k) + " at this prime");
}

}  // namespace bmr
