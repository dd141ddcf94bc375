#include <chrono>
#include <type_traits>

#include "bmr/hecke.hpp"
#include "vector_enum.hpp"

namespace bmr {

namespace detail {
extern template class VectorEnumerator<ModpCarrier>;
extern template class VectorEnumerator<ExactCarrier>;
}  // namespace detail

namespace {

using detail::ExactCarrier;
using detail::LinRelator;
using detail::LinTerm;
using detail::ModpCarrier;

struct PolyTerm {
  LaurentPoly coeff;
  std::vector<int> letters;
};

std::vector<int> repeat(int col, int k) { return std::vector<int>(static_cast<std::size_t>(k), col); }

// Elements of the free algebra on g, g^-1 that vanish in H.
std::vector<std::vector<PolyTerm>> hecke_relators(const HeckeSpec& spec) {
  std::vector<std::vector<PolyTerm>> out;
  const auto& vars = spec.vars;
  LaurentPoly one = LaurentPoly::constant(vars, 1);
  const std::size_t ngens = spec.braid.generators.size();
  for (std::size_t g = 0; g < ngens; ++g) {
    int x = static_cast<int>(2 * g), X = x + 1;
    out.push_back({{one, {x, X}}, {-one, {}}});
    out.push_back({{one, {X, x}}, {-one, {}}});
  }
  for (std::size_t g = 0; g < ngens; ++g) {
    int x = static_cast<int>(2 * g), X = x + 1;
    auto a = eq1_coeffs(spec.params_of(static_cast<int>(g)));
    int e = static_cast<int>(a.size());
    // g^e - sum a_j g^j
    std::vector<PolyTerm> p{{one, repeat(x, e)}};
    for (int j = 0; j < e; ++j) p.push_back({-a[static_cast<std::size_t>(j)], repeat(x, j)});
    out.push_back(std::move(p));
    // a_0 g^-e + sum_{j>=1} a_j g^{-(e-j)} - 1
    std::vector<PolyTerm> q{{a[0], repeat(X, e)}};
    for (int j = 1; j < e; ++j) q.push_back({a[static_cast<std::size_t>(j)], repeat(X, e - j)});
    q.push_back({-one, {}});
    out.push_back(std::move(q));
    // a_0 g^-1 - g^{e-1} + sum_{j>=1} a_j g^{j-1}
    std::vector<PolyTerm> r{{a[0], {X}}, {-one, repeat(x, e - 1)}};
    for (int j = 1; j < e; ++j) r.push_back({a[static_cast<std::size_t>(j)], repeat(x, j - 1)});
    out.push_back(std::move(r));
  }
  for (const auto& rel : spec.braid.relations)
    out.push_back({{one, unit_letters(rel.lhs)}, {-one, unit_letters(rel.rhs)}});
  return out;
}

template <class C, class Conv>
std::vector<LinRelator<typename C::T>> convert(const std::vector<std::vector<PolyTerm>>& rels, Conv conv) {
  std::vector<LinRelator<typename C::T>> out;
  for (const auto& r : rels) {
    LinRelator<typename C::T> lr;
    for (const auto& t : r) lr.push_back({conv(t.coeff), t.letters});
    out.push_back(std::move(lr));
  }
  return out;
}

template <class C>
using Dense = std::vector<std::vector<typename C::T>>;  // column-major: m[col][row]

template <class C>
Dense<C> identity(const C& c, std::size_t n) {
  Dense<C> m(n, std::vector<typename C::T>(n, c.zero()));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = c.one();
  return m;
}

// L * X for sparse L.
template <class C>
Dense<C> left_mul(const C& c, const SparseMatrix<typename C::T>& L, const Dense<C>& X) {
  const std::size_t n = X.size();
  Dense<C> out(n, std::vector<typename C::T>(L.n, c.zero()));
  for (std::size_t j = 0; j < n; ++j) {
    auto& dst = out[j];
    for (std::size_t k = 0; k < X[j].size(); ++k) {
      const auto& xk = X[j][k];
      if (c.is_zero(xk)) continue;
      for (const auto& [row, v] : L.cols[k]) dst[static_cast<std::size_t>(row)] = c.add(dst[static_cast<std::size_t>(row)], c.mul(v, xk));
    }
  }
  return out;
}

// X * L for sparse L.
template <class C>
Dense<C> right_mul(const C& c, const Dense<C>& X, const SparseMatrix<typename C::T>& L) {
  const std::size_t n = L.cols.size();
  Dense<C> out(n, std::vector<typename C::T>(X.empty() ? 0 : X[0].size(), c.zero()));
  for (std::size_t j = 0; j < n; ++j) {
    auto& dst = out[j];
    for (const auto& [k, v] : L.cols[j]) {
      const auto& src = X[static_cast<std::size_t>(k)];
      for (std::size_t r = 0; r < src.size(); ++r)
        if (!c.is_zero(src[r])) dst[r] = c.add(dst[r], c.mul(src[r], v));
    }
  }
  return out;
}

template <class C>
Dense<C> word_matrix(const C& c, const std::vector<SparseMatrix<typename C::T>>& letters, const Word& w, std::size_t n) {
  Dense<C> m = identity(c, n);
  auto cols = unit_letters(w);
  for (auto it = cols.rbegin(); it != cols.rend(); ++it) m = left_mul(c, letters[static_cast<std::size_t>(*it)], m);
  return m;
}

template <class C>
bool equal(const C& c, const Dense<C>& a, const Dense<C>& b) {
  for (std::size_t j = 0; j < a.size(); ++j)
    for (std::size_t i = 0; i < a[j].size(); ++i)
      if (!c.is_zero(c.sub(a[j][i], b[j][i]))) return false;
  return true;
}

template <class C>
bool is_zero_matrix(const C& c, const Dense<C>& a) {
  for (const auto& col : a)
    for (const auto& v : col)
      if (!c.is_zero(v)) return false;
  return true;
}

template <class C, class Conv>
std::vector<CheckResult> checks_impl(const C& c, const HeckeSpec& spec, const std::vector<SparseMatrix<typename C::T>>& L,
                                     std::size_t n, Conv conv) {
  std::vector<CheckResult> out;
  const auto& P = spec.braid;
  const Dense<C> I = identity(c, n);
  {
    CheckResult r{"inverse", true, ""};
    for (std::size_t g = 0; g < P.generators.size() && r.pass; ++g) {
      for (auto [a, b] : {std::pair{2 * g, 2 * g + 1}, std::pair{2 * g + 1, 2 * g}}) {
        Dense<C> m = left_mul(c, L[a], right_mul(c, I, L[b]));
        if (!equal(c, m, I)) {
          r.pass = false;
          r.detail = "L_" + P.generators[g] + (a == 2 * g ? " L_" : "^-1 L_") + P.generators[g] +
                     (a == 2 * g ? "^-1" : "") + " != I";
          break;
        }
      }
    }
    out.push_back(r);
  }
  {
    CheckResult r{"defining_polynomial", true, ""};
    for (std::size_t g = 0; g < P.generators.size() && r.pass; ++g) {
      Dense<C> m = I;
      for (const auto& u : spec.params_of(static_cast<int>(g))) {
        auto uval = conv(u);
        Dense<C> lm = left_mul(c, L[2 * g], m);
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t i = 0; i < n; ++i) lm[j][i] = c.sub(lm[j][i], c.mul(uval, m[j][i]));
        m = std::move(lm);
      }
      if (!is_zero_matrix(c, m)) {
        r.pass = false;
        r.detail = "defining polynomial of " + P.generators[g] + " does not vanish";
      }
    }
    out.push_back(r);
  }
  {
    CheckResult r{"braid_relations", true, ""};
    for (const auto& rel : P.relations) {
      if (!equal(c, word_matrix(c, L, rel.lhs, n), word_matrix(c, L, rel.rhs, n))) {
        r.pass = false;
        r.detail = "fails " + P.format(rel.lhs) + " = " + P.format(rel.rhs);
        break;
      }
    }
    out.push_back(r);
  }
  {
    CheckResult r{"center_commutes", true, ""};
    Dense<C> Z = word_matrix(c, L, P.center, n);
    for (std::size_t g = 0; g < P.generators.size(); ++g) {
      if (!equal(c, left_mul(c, L[2 * g], Z), right_mul(c, Z, L[2 * g]))) {
        r.pass = false;
        r.detail = "L_z does not commute with L_" + P.generators[g];
        break;
      }
    }
    out.push_back(r);
  }
  return out;
}

// Gauss-Jordan inverse over the carrier using unit pivots; returns false when singular
// (or, in exact mode, when no unit pivot exists). rank receives the rank found.
template <class C>
bool invert_dense(const C& c, Dense<C> a, Dense<C>& inv, std::size_t& rank) {
  // Work row-major for elimination convenience.
  const std::size_t rows = a.empty() ? 0 : a[0].size();
  const std::size_t cols = a.size();
  std::vector<std::vector<typename C::T>> m(rows, std::vector<typename C::T>(cols + rows, c.zero()));
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i < rows; ++i) m[i][j] = a[j][i];
  for (std::size_t i = 0; i < rows; ++i) m[i][cols + i] = c.one();
  rank = 0;
  bool stuck = false;
  for (std::size_t j = 0; j < cols && rank < rows; ++j) {
    std::size_t piv = rows;
    bool saw_nonzero = false;
    for (std::size_t i = rank; i < rows; ++i) {
      if (c.is_zero(m[i][j])) continue;
      saw_nonzero = true;
      if (c.is_unit(m[i][j])) {
        piv = i;
        break;
      }
    }
    if (piv == rows) {
      if (saw_nonzero) stuck = true;
      continue;
    }
    std::swap(m[piv], m[rank]);
    auto pinv = c.inv(m[rank][j]);
    for (auto& v : m[rank]) v = c.mul(v, pinv);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == rank || c.is_zero(m[i][j])) continue;
      auto f = m[i][j];
      for (std::size_t k = 0; k < cols + rows; ++k)
        if (!c.is_zero(m[rank][k])) m[i][k] = c.sub(m[i][k], c.mul(f, m[rank][k]));
    }
    ++rank;
  }
  if (stuck || rank != rows || rows != cols) return false;
  inv.assign(cols, std::vector<typename C::T>(rows, c.zero()));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < rows; ++j) inv[j][i] = m[i][cols + j];
  return !stuck;
}

template <class C>
SparseMatrix<typename C::T> to_sparse(const C& c, const Dense<C>& d) {
  SparseMatrix<typename C::T> s;
  s.n = d.size();
  s.cols.resize(d.size());
  for (std::size_t j = 0; j < d.size(); ++j)
    for (std::size_t i = 0; i < d[j].size(); ++i)
      if (!c.is_zero(d[j][i])) s.cols[j].emplace_back(static_cast<int>(i), d[j][i]);
  return s;
}

template <class C>
Dense<C> to_dense(const C& c, const SparseMatrix<typename C::T>& s, std::size_t rows) {
  Dense<C> d(s.cols.size(), std::vector<typename C::T>(rows, c.zero()));
  for (std::size_t j = 0; j < s.cols.size(); ++j)
    for (const auto& [i, v] : s.cols[j]) d[j][static_cast<std::size_t>(i)] = v;
  return d;
}

template <class C, class Conv>
CertifyResult certify_impl(const C& carrier, Conv conv, const HeckeSpec& spec, const SpanningSet& basis,
                           const CertifyOptions& opts, FreenessCertificate cert) {
  using T = typename C::T;
  CertifyResult result;
  auto t0 = std::chrono::steady_clock::now();
  const std::size_t ncols = 2 * spec.braid.generators.size();
  auto relators = convert<C>(hecke_relators(spec), conv);
  detail::VectorEnumerator<C> en(carrier, ncols, std::move(relators), opts.max_vectors);

  std::vector<int> endpoint;
  auto fail = [&](FailureKind kind, std::string msg) {
    result.failure = CertifyFailure{kind, std::move(msg), 0, 0, basis.words.size()};
  };
  auto record_stats = [&] {
    const auto& k = en.counters();
    result.stats.vectors_defined = k.defined;
    result.stats.max_live = k.max_live;
    result.stats.kills = k.kills;
    result.stats.deductions = k.deductions;
    result.stats.sweeps = k.sweeps;
  };

  try {
    for (const auto& w : basis.words) endpoint.push_back(en.seed_path(unit_letters(w)));
    for (int v : endpoint) en.mark_spanning(v);
    en.run();
  } catch (const detail::VectorCapExceeded& ex) {
    record_stats();
    fail(FailureKind::CapExceeded, ex.what());
    return result;
  } catch (const detail::NonUnitStall& ex) {
    record_stats();
    fail(FailureKind::NonUnitPivot, ex.what());
    return result;
  } catch (const RingOverflow& ex) {
    record_stats();
    fail(FailureKind::CoefficientOverflow, ex.what());
    return result;
  }
  record_stats();
  result.stats.enumerate_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const auto live = en.live_vectors();
  const std::size_t D = live.size();
  result.stats.dimension = D;
  std::vector<int> pos(en.size(), -1);
  for (std::size_t i = 0; i < D; ++i) pos[static_cast<std::size_t>(live[i])] = static_cast<int>(i);

  // Module action in the enumeration basis.
  std::vector<SparseMatrix<T>> M(ncols);
  for (std::size_t x = 0; x < ncols; ++x) {
    M[x].n = D;
    M[x].cols.resize(D);
    for (std::size_t j = 0; j < D; ++j)
      for (auto& [v, a] : en.image(x, live[j])) M[x].cols[j].emplace_back(pos[static_cast<std::size_t>(v)], a);
    for (auto& col : M[x].cols) std::sort(col.begin(), col.end(), [](const auto& p, const auto& q) { return p.first < q.first; });
  }
  // Coordinates of the basis words.
  const std::size_t U = basis.words.size();
  SparseMatrix<T> S;
  S.n = D;
  S.cols.resize(U);
  bool permutation = U == D;
  std::vector<int> slot(D, -1);
  for (std::size_t k = 0; k < U; ++k) {
    for (auto& [v, a] : en.coordinates(endpoint[k])) S.cols[k].emplace_back(pos[static_cast<std::size_t>(v)], a);
    std::sort(S.cols[k].begin(), S.cols[k].end(), [](const auto& p, const auto& q) { return p.first < q.first; });
    if (S.cols[k].size() != 1 || !carrier.is_zero(carrier.sub(S.cols[k][0].second, carrier.one())) ||
        slot[static_cast<std::size_t>(S.cols[k][0].first)] >= 0) {
      permutation = false;
    } else {
      slot[static_cast<std::size_t>(S.cols[k][0].first)] = static_cast<int>(k);
    }
  }

  std::vector<SparseMatrix<T>> L(ncols);
  if (permutation) {
    // Live vectors are exactly the basis words: relabel.
    for (std::size_t x = 0; x < ncols; ++x) {
      L[x].n = U;
      L[x].cols.resize(U);
      for (std::size_t j = 0; j < D; ++j) {
        auto& col = L[x].cols[static_cast<std::size_t>(slot[j])];
        for (const auto& [i, a] : M[x].cols[j]) col.emplace_back(slot[static_cast<std::size_t>(i)], a);
        std::sort(col.begin(), col.end(), [](const auto& p, const auto& q) { return p.first < q.first; });
      }
    }
    cert.rank = U;
  } else {
    Dense<C> Sd = to_dense(carrier, S, D);
    Dense<C> Sinv;
    std::size_t rank = 0;
    bool ok = invert_dense(carrier, Sd, Sinv, rank);
    if (!ok) {
      result.failure = CertifyFailure{rank < std::min(U, D) || U != D ? FailureKind::RankDeficient : FailureKind::NonUnitPivot,
                                      "", D, rank, U};
      if (rank < D) {
        result.failure->kind = FailureKind::RankDeficient;
        result.failure->message = "basis words span a space of dimension " + std::to_string(rank) +
                                  " inside a module of dimension " + std::to_string(D) + " (deficiency " +
                                  std::to_string(D - rank) + ")";
      } else if (U != D) {
        result.failure->kind = FailureKind::DimensionMismatch;
        result.failure->message = std::to_string(U) + " basis words for a module of dimension " + std::to_string(D);
      } else {
        result.failure->message = "change of basis has no unit pivot";
      }
      return result;
    }
    for (std::size_t x = 0; x < ncols; ++x) {
      // Sinv * M_x * S
      Dense<C> ms = left_mul(carrier, M[x], Sd);
      Dense<C> res(U, std::vector<T>(U, carrier.zero()));
      for (std::size_t j = 0; j < U; ++j)
        for (std::size_t k = 0; k < D; ++k) {
          if (carrier.is_zero(ms[j][k])) continue;
          for (std::size_t i = 0; i < U; ++i)
            if (!carrier.is_zero(Sinv[k][i])) res[j][i] = carrier.add(res[j][i], carrier.mul(Sinv[k][i], ms[j][k]));
        }
      L[x] = to_sparse(carrier, res);
    }
    cert.rank = rank;
  }

  if (D != basis.expected_size && basis.expected_size != 0) {
    result.failure = CertifyFailure{FailureKind::DimensionMismatch,
                                    "module dimension " + std::to_string(D) + " differs from |W| = " +
                                        std::to_string(basis.expected_size),
                                    D, cert.rank, U};
    return result;
  }

  auto t1 = std::chrono::steady_clock::now();
  cert.checks = checks_impl(carrier, spec, L, U, conv);
  result.stats.check_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t1).count();
  if constexpr (std::is_same_v<T, std::uint64_t>) {
    cert.modp = std::move(L);
  } else {
    cert.exact = std::move(L);
  }
  if (!cert.all_checks_pass()) {
    std::string msg;
    for (const auto& c : cert.checks)
      if (!c.pass) msg += (msg.empty() ? "" : "; ") + c.name + ": " + c.detail;
    result.failure = CertifyFailure{FailureKind::CheckFailed, msg, D, cert.rank, U};
  }
  result.certificate = std::move(cert);
  return result;
}

}  // namespace

bool FreenessCertificate::all_checks_pass() const {
  if (checks.empty()) return false;
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

CertifyResult certify_freeness(const HeckeSpec& spec, const SpanningSet& basis, const CertifyOptions& opts) {
  FreenessCertificate cert;
  cert.group = spec.group;
  cert.mode = opts.mode;
  cert.seed = opts.seed;
  cert.generators = spec.braid.generators;
  cert.basis = basis.words;
  if (opts.mode == CoeffMode::ModP) {
    SpecPoint pt = opts.point ? *opts.point : sample_point(spec, opts.seed, opts.prime, opts.distinct_params);
    cert.prime = pt.prime;
    cert.point = pt;
    ModpCarrier c{PrimeField(pt.prime)};
    auto conv = [pt](const LaurentPoly& a) { return specialize(a, pt).value; };
    return certify_impl(c, conv, spec, basis, opts, std::move(cert));
  }
  ExactCarrier c{spec.vars};
  auto conv = [](const LaurentPoly& a) { return a; };
  return certify_impl(c, conv, spec, basis, opts, std::move(cert));
}

std::vector<CheckResult> run_certificate_checks(const HeckeSpec& spec, const FreenessCertificate& cert) {
  if (cert.mode == CoeffMode::ModP) {
    ModpCarrier c{PrimeField(cert.prime)};
    SpecPoint pt = cert.point;
    auto conv = [pt](const LaurentPoly& a) { return specialize(a, pt).value; };
    return checks_impl(c, spec, cert.modp, cert.dim(), conv);
  }
  ExactCarrier c{spec.vars};
  auto conv = [](const LaurentPoly& a) { return a; };
  return checks_impl(c, spec, cert.exact, cert.dim(), conv);
}

}  // namespace bmr
