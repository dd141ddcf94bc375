#pragma once

// Vector enumeration of the regular left module H.1 over a coefficient carrier.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bmr/ring.hpp"

namespace bmr::detail {

struct ModpCarrier {
  using T = std::uint64_t;
  PrimeField F;

  explicit ModpCarrier(PrimeField f) : F(f) {}
  T zero() const { return 0; }
  T one() const { return 1; }
  bool is_zero(const T& a) const { return a == 0; }
  bool is_unit(const T& a) const { return a != 0; }
  T add(const T& a, const T& b) const { return F.add(a, b); }
  T sub(const T& a, const T& b) const { return F.sub(a, b); }
  T neg(const T& a) const { return F.neg(a); }
  T mul(const T& a, const T& b) const { return F.mul(a, b); }
  T inv(const T& a) const { return F.inv(a); }
};

struct ExactCarrier {
  using T = LaurentPoly;
  VarSetPtr vars;

  explicit ExactCarrier(VarSetPtr v) : vars(std::move(v)) {}
  T zero() const { return LaurentPoly(vars); }
  T one() const { return LaurentPoly::constant(vars, 1); }
  bool is_zero(const T& a) const { return a.is_zero(); }
  bool is_unit(const T& a) const { return a.is_unit(); }
  T add(const T& a, const T& b) const { return a + b; }
  T sub(const T& a, const T& b) const { return a - b; }
  T neg(const T& a) const { return -a; }
  T mul(const T& a, const T& b) const { return a * b; }
  T inv(const T& a) const { return a.inverse_unit(); }
};

template <class T>
using Sparse = std::vector<std::pair<int, T>>;

/// coeff * w, where the unit letters of w act right to left.
template <class T>
struct LinTerm {
  T coeff;
  std::vector<int> letters;
};

template <class T>
using LinRelator = std::vector<LinTerm<T>>;

class VectorCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonUnitStall : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EnumCounters {
  std::size_t defined = 0;
  std::size_t max_live = 0;
  std::size_t kills = 0;
  std::size_t deductions = 0;
  std::size_t sweeps = 0;
};

template <class C>
class VectorEnumerator {
 public:
  using T = typename C::T;
  using Vec = Sparse<T>;

  VectorEnumerator(C carrier, std::size_t ncols, std::vector<LinRelator<T>> relators, std::size_t max_vectors)
      : c_(std::move(carrier)), ncols_(ncols), relators_(std::move(relators)), cap_(max_vectors) {
    table_.resize(ncols_);
    defined_.resize(ncols_);
    new_vector();  // the identity
  }

  /// Defines the path of `letters` (applied right to left) from the identity; returns its endpoint.
  int seed_path(const std::vector<int>& letters) {
    int cur = 0;
    for (auto it = letters.rbegin(); it != letters.rend(); ++it) {
      std::size_t x = static_cast<std::size_t>(*it);
      if (defined(x, cur)) {
        const Vec& v = table_[x][static_cast<std::size_t>(cur)];
        if (v.size() != 1 || !is_one(v[0].second))
          throw std::logic_error("seed paths must be laid down before any relation is processed");
        cur = v[0].first;
      } else {
        cur = define(cur, x);
      }
    }
    return cur;
  }

  void mark_spanning(int v) {
    if (static_cast<std::size_t>(v) >= spanning_.size()) spanning_.resize(static_cast<std::size_t>(v) + 1, 0);
    spanning_[static_cast<std::size_t>(v)] = 1;
  }

  /// Runs to closure. Throws VectorCapExceeded or NonUnitStall.
  void run() {
    std::size_t next = 0;
    while (true) {
      for (; next < n_; ++next) {
        int v = static_cast<int>(next);
        if (!live_[next]) continue;
        for (const auto& r : relators_) {
          push_relation(evaluate(r, v));
          drain();
          if (!live_[next]) break;
        }
        if (!live_[next]) continue;
        for (std::size_t x = 0; x < ncols_; ++x)
          if (!defined(x, v)) define(v, x);
      }
      ++counters_.sweeps;
      bool changed = false;
      for (std::size_t v = 0; v < n_; ++v) {
        if (!live_[v]) continue;
        for (const auto& r : relators_) {
          std::size_t before = n_;
          Vec rel = evaluate(r, static_cast<int>(v));
          if (!rel.empty() || n_ != before) changed = true;
          push_relation(std::move(rel));
          drain();
          if (!live_[v]) break;
        }
      }
      if (retry_stalled()) changed = true;
      if (!changed && next == n_) break;
    }
    if (!stalled_.empty())
      throw NonUnitStall(std::to_string(stalled_.size()) + " relations have no unit coefficient to pivot on");
  }

  std::size_t size() const { return n_; }
  bool live(int v) const { return live_[static_cast<std::size_t>(v)] != 0; }
  std::vector<int> live_vectors() const {
    std::vector<int> out;
    for (std::size_t v = 0; v < n_; ++v)
      if (live_[v]) out.push_back(static_cast<int>(v));
    return out;
  }
  /// x.v in terms of live vectors; v must be live.
  Vec image(std::size_t x, int v) {
    Vec& e = table_[x][static_cast<std::size_t>(v)];
    normalize(e);
    return e;
  }
  /// Vector v rewritten in terms of live vectors.
  Vec coordinates(int v) {
    Vec e{{v, c_.one()}};
    normalize(e);
    return e;
  }
  const EnumCounters& counters() const { return counters_; }
  const C& carrier() const { return c_; }

 private:
  struct Obligation {
    std::size_t x;
    Vec vec;
    Vec target;
  };

  bool is_one(const T& a) const { return !c_.is_zero(a) && c_.is_zero(c_.sub(a, c_.one())); }

  bool defined(std::size_t x, int v) const { return defined_[x][static_cast<std::size_t>(v)] != 0; }

  int new_vector() {
    if (n_ >= cap_) throw VectorCapExceeded("vector cap of " + std::to_string(cap_) + " exceeded");
    for (std::size_t x = 0; x < ncols_; ++x) {
      table_[x].emplace_back();
      defined_[x].push_back(0);
    }
    live_.push_back(1);
    repl_.emplace_back();
    int v = static_cast<int>(n_++);
    ++nlive_;
    ++counters_.defined;
    counters_.max_live = std::max(counters_.max_live, nlive_);
    return v;
  }

  int define(int v, std::size_t x) {
    int n = new_vector();
    table_[x][static_cast<std::size_t>(v)] = Vec{{n, c_.one()}};
    defined_[x][static_cast<std::size_t>(v)] = 1;
    table_[x ^ 1U][static_cast<std::size_t>(n)] = Vec{{v, c_.one()}};
    defined_[x ^ 1U][static_cast<std::size_t>(n)] = 1;
    return n;
  }

  // Sorted merge of a list of (index, coeff) pairs, dropping zeros.
  Vec combine(std::vector<std::pair<int, T>>& raw) const {
    std::sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    Vec out;
    for (auto& [i, v] : raw) {
      if (!out.empty() && out.back().first == i) {
        out.back().second = c_.add(out.back().second, v);
      } else {
        if (!out.empty() && c_.is_zero(out.back().second)) out.pop_back();
        out.emplace_back(i, std::move(v));
      }
    }
    if (!out.empty() && c_.is_zero(out.back().second)) out.pop_back();
    return out;
  }

  bool all_live(const Vec& v) const {
    for (const auto& [i, a] : v)
      if (!live_[static_cast<std::size_t>(i)]) return false;
    return true;
  }

  // Rewrites dead vectors through their replacements, compressing paths.
  void normalize(Vec& v) {
    if (all_live(v)) return;
    std::vector<std::pair<int, T>> raw;
    for (auto& [i, a] : v) {
      if (live_[static_cast<std::size_t>(i)]) {
        raw.emplace_back(i, std::move(a));
      } else {
        Vec& r = repl_[static_cast<std::size_t>(i)];
        normalize(r);
        for (const auto& [j, b] : r) raw.emplace_back(j, c_.mul(a, b));
      }
    }
    v = combine(raw);
  }

  // x applied to a normalized combination; undefined entries are defined when `fill` is set.
  Vec apply(std::size_t x, const Vec& vec) {
    std::vector<std::pair<int, T>> raw;
    for (const auto& [u, a] : vec) {
      if (!defined(x, u)) define(u, x);
      Vec& img = table_[x][static_cast<std::size_t>(u)];
      normalize(img);
      for (const auto& [w, b] : img) raw.emplace_back(w, c_.mul(a, b));
    }
    return combine(raw);
  }

  Vec evaluate(const LinRelator<T>& r, int v) {
    std::vector<std::pair<int, T>> raw;
    for (const auto& term : r) {
      Vec cur{{v, c_.one()}};
      for (auto it = term.letters.rbegin(); it != term.letters.rend(); ++it)
        cur = apply(static_cast<std::size_t>(*it), cur);
      for (auto& [w, b] : cur) raw.emplace_back(w, c_.mul(term.coeff, b));
    }
    // Definitions made while applying never kill, but earlier terms may predate a
    // normalization of a later one, so normalize the result.
    Vec out = combine(raw);
    normalize(out);
    return out;
  }

  void push_relation(Vec rel) {
    if (!rel.empty()) relations_.push_back(std::move(rel));
  }

  // Index into rel of the pivot, or -1 when no admissible coefficient exists.
  int choose_pivot(const Vec& rel) const {
    int best = -1;
    int best_rank = -1;
    for (std::size_t k = 0; k < rel.size(); ++k) {
      if (!c_.is_unit(rel[k].second)) continue;
      std::size_t i = static_cast<std::size_t>(rel[k].first);
      bool span = i < spanning_.size() && spanning_[i];
      // Non-spanning vectors first, then higher index.
      int rank = span ? 0 : 1;
      if (rank > best_rank || (rank == best_rank && rel[k].first > rel[static_cast<std::size_t>(best)].first)) {
        best = static_cast<int>(k);
        best_rank = rank;
      }
    }
    return best;
  }

  void kill(Vec rel, std::size_t k) {
    int p = rel[k].first;
    T cp = rel[k].second;
    T factor = c_.neg(c_.inv(cp));
    Vec repl;
    repl.reserve(rel.size() - 1);
    for (std::size_t i = 0; i < rel.size(); ++i)
      if (i != k) repl.emplace_back(rel[i].first, c_.mul(factor, rel[i].second));
    std::size_t pp = static_cast<std::size_t>(p);
    live_[pp] = 0;
    --nlive_;
    ++counters_.kills;
    for (std::size_t x = 0; x < ncols_; ++x) {
      if (!defined_[x][pp]) continue;
      obligations_.push_back({x, repl, std::move(table_[x][pp])});
      table_[x][pp].clear();
      defined_[x][pp] = 0;
    }
    repl_[pp] = std::move(repl);
  }

  void settle(Obligation& ob) {
    normalize(ob.vec);
    normalize(ob.target);
    int missing = -1;
    std::size_t nmissing = 0;
    for (std::size_t k = 0; k < ob.vec.size(); ++k) {
      if (!defined(ob.x, ob.vec[k].first)) {
        ++nmissing;
        missing = static_cast<int>(k);
      }
    }
    if (nmissing == 1 && c_.is_unit(ob.vec[static_cast<std::size_t>(missing)].second)) {
      // x.u = a^-1 (target - sum of the known images)
      const auto& [u, a] = ob.vec[static_cast<std::size_t>(missing)];
      std::vector<std::pair<int, T>> raw;
      for (auto& [w, b] : ob.target) raw.emplace_back(w, b);
      for (std::size_t k = 0; k < ob.vec.size(); ++k) {
        if (static_cast<int>(k) == missing) continue;
        Vec& img = table_[ob.x][static_cast<std::size_t>(ob.vec[k].first)];
        normalize(img);
        for (const auto& [w, b] : img) raw.emplace_back(w, c_.neg(c_.mul(ob.vec[k].second, b)));
      }
      Vec val = combine(raw);
      T ainv = c_.inv(a);
      for (auto& [w, b] : val) b = c_.mul(ainv, b);
      table_[ob.x][static_cast<std::size_t>(u)] = std::move(val);
      defined_[ob.x][static_cast<std::size_t>(u)] = 1;
      ++counters_.deductions;
      return;
    }
    Vec lhs = apply(ob.x, ob.vec);
    std::vector<std::pair<int, T>> raw;
    for (auto& [w, b] : lhs) raw.emplace_back(w, std::move(b));
    for (auto& [w, b] : ob.target) raw.emplace_back(w, c_.neg(b));
    Vec rel = combine(raw);
    normalize(rel);
    push_relation(std::move(rel));
  }

  void drain() {
    while (!relations_.empty() || !obligations_.empty()) {
      if (!relations_.empty()) {
        Vec rel = std::move(relations_.front());
        relations_.pop_front();
        normalize(rel);
        if (rel.empty()) continue;
        int k = choose_pivot(rel);
        if (k < 0) {
          stalled_.push_back(std::move(rel));
          continue;
        }
        kill(std::move(rel), static_cast<std::size_t>(k));
      } else {
        Obligation ob = std::move(obligations_.front());
        obligations_.pop_front();
        settle(ob);
      }
    }
  }

  bool retry_stalled() {
    if (stalled_.empty()) return false;
    std::vector<Vec> keep;
    bool progress = false;
    for (auto& rel : stalled_) {
      normalize(rel);
      if (rel.empty()) {
        progress = true;
        continue;
      }
      if (choose_pivot(rel) >= 0) {
        relations_.push_back(std::move(rel));
        progress = true;
      } else {
        keep.push_back(std::move(rel));
      }
    }
    stalled_ = std::move(keep);
    drain();
    return progress;
  }

  C c_;
  std::size_t ncols_;
  std::vector<LinRelator<T>> relators_;
  std::size_t cap_;
  std::vector<std::vector<Vec>> table_;
  std::vector<std::vector<char>> defined_;
  std::vector<char> live_;
  std::vector<char> spanning_;
  std::vector<Vec> repl_;
  std::deque<Vec> relations_;
  std::deque<Obligation> obligations_;
  std::vector<Vec> stalled_;
  std::size_t n_ = 0;
  std::size_t nlive_ = 0;
  EnumCounters counters_;
};

}  // namespace bmr::detail
