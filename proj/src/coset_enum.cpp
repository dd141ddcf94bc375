#include <algorithm>
#include <deque>
#include <numeric>

#include "bmr/group.hpp"

namespace bmr {

namespace {

class Enumerator {
 public:
  Enumerator(const Presentation& p, const EnumOptions& opts) : cap_(opts.max_cosets) {
    ncols_ = 2 * p.generators.size();
    for (const Word& r : p.relators()) {
      auto cols = unit_letters(r);
      if (!cols.empty()) relators_.push_back(std::move(cols));
    }
    for (const auto& r : relators_) room_ += r.size();
    room_ += ncols_;
    if (cap_ < room_ + 1) cap_ = room_ + 1;
    table_.assign(cap_ * ncols_, -1);
    parent_.assign(cap_, 0);
    live_.assign(cap_, 0);
    // Coset 0 is the trivial subgroup.
    n_ = 1;
    live_[0] = 1;
    parent_[0] = 0;
    nlive_ = 1;
  }

  void run() {
    for (std::size_t a = 0; a < n_; ++a) {
      if (!live_[a]) continue;
      if (n_ + room_ > cap_) {
        a = make_room(a);
      }
      for (const auto& r : relators_) {
        scan_and_fill(static_cast<int>(a), r);
        if (!live_[a]) break;
      }
      if (!live_[a]) continue;
      for (std::size_t x = 0; x < ncols_; ++x)
        if (at(static_cast<int>(a), x) < 0) define(static_cast<int>(a), x);
    }
  }

  CosetTable finish(const Presentation& p, EnumStats* stats) {
    // Breadth-first renumbering from the identity coset.
    std::vector<int> order;
    std::vector<int> fresh(n_, -1);
    order.push_back(0);
    fresh[0] = 0;
    for (std::size_t h = 0; h < order.size(); ++h) {
      for (std::size_t x = 0; x < ncols_; ++x) {
        int y = at(order[h], x);
        if (y < 0) throw EnumerationError("incomplete coset table");
        if (fresh[static_cast<std::size_t>(y)] < 0) {
          fresh[static_cast<std::size_t>(y)] = static_cast<int>(order.size());
          order.push_back(y);
        }
      }
    }
    CosetTable t;
    t.group = p.group;
    t.generators = p.generators;
    t.size = order.size();
    t.action.assign(ncols_, Perm(t.size));
    for (std::size_t i = 0; i < order.size(); ++i)
      for (std::size_t x = 0; x < ncols_; ++x)
        t.action[x][i] = fresh[static_cast<std::size_t>(at(order[i], x))];
    if (stats) {
      stats->max_live = max_live_;
      stats->total_defined = total_defined_;
      stats->lookaheads = lookaheads_;
    }
    return t;
  }

 private:
  int& at(int c, std::size_t x) { return table_[static_cast<std::size_t>(c) * ncols_ + x]; }
  static std::size_t inv(std::size_t x) { return x ^ 1U; }

  void define(int f, std::size_t x) {
    if (n_ >= cap_) throw EnumerationError("coset cap of " + std::to_string(cap_) + " exceeded");
    int c = static_cast<int>(n_++);
    live_[static_cast<std::size_t>(c)] = 1;
    parent_[static_cast<std::size_t>(c)] = c;
    for (std::size_t y = 0; y < ncols_; ++y) at(c, y) = -1;
    at(f, x) = c;
    at(c, inv(x)) = f;
    ++nlive_;
    ++total_defined_;
    max_live_ = std::max(max_live_, nlive_);
  }

  // Scans r at a; with `fill` unset no new cosets are defined.
  void scan_and_fill(int a, const std::vector<int>& r, bool fill = true) {
    int f = a, b = a;
    std::size_t i = 0;
    std::size_t j = r.size();  // one past the last unscanned letter
    while (true) {
      while (i < j && at(f, static_cast<std::size_t>(r[i])) >= 0) {
        f = at(f, static_cast<std::size_t>(r[i]));
        ++i;
      }
      if (i == j) {
        if (f != b) coincidence(f, b);
        return;
      }
      while (j > i && at(b, inv(static_cast<std::size_t>(r[j - 1]))) >= 0) {
        b = at(b, inv(static_cast<std::size_t>(r[j - 1])));
        --j;
      }
      if (j == i) {
        coincidence(f, b);
        return;
      }
      if (j == i + 1) {
        std::size_t x = static_cast<std::size_t>(r[i]);
        at(f, x) = b;
        at(b, inv(x)) = f;
        return;
      }
      if (!fill) return;
      define(f, static_cast<std::size_t>(r[i]));
    }
  }

  int rep(int k) {
    int l = k;
    while (parent_[static_cast<std::size_t>(l)] != l) l = parent_[static_cast<std::size_t>(l)];
    while (parent_[static_cast<std::size_t>(k)] != l) {
      int next = parent_[static_cast<std::size_t>(k)];
      parent_[static_cast<std::size_t>(k)] = l;
      k = next;
    }
    return l;
  }

  void merge(int k, int l, std::deque<int>& queue) {
    int a = rep(k), b = rep(l);
    if (a == b) return;
    int lo = std::min(a, b), hi = std::max(a, b);
    parent_[static_cast<std::size_t>(hi)] = lo;
    live_[static_cast<std::size_t>(hi)] = 0;
    --nlive_;
    queue.push_back(hi);
  }

  void coincidence(int a, int b) {
    std::deque<int> queue;
    merge(a, b, queue);
    while (!queue.empty()) {
      int g = queue.front();
      queue.pop_front();
      for (std::size_t x = 0; x < ncols_; ++x) {
        int d = at(g, x);
        if (d < 0) continue;
        if (at(d, inv(x)) == g) at(d, inv(x)) = -1;
        int m = rep(g), n = rep(d);
        if (at(m, x) >= 0) {
          merge(n, at(m, x), queue);
        } else if (at(n, inv(x)) >= 0) {
          merge(m, at(n, inv(x)), queue);
        } else {
          at(m, x) = n;
          at(n, inv(x)) = m;
        }
      }
    }
  }

  // Lookahead then compaction; returns the new index of coset a.
  std::size_t make_room(std::size_t a) {
    ++lookaheads_;
    for (std::size_t c = 0; c < n_; ++c) {
      for (const auto& r : relators_) {
        if (!live_[c]) break;
        scan_and_fill(static_cast<int>(c), r, false);
      }
    }
    std::size_t kept = compact(a);
    if (n_ + room_ > cap_)
      throw EnumerationError("coset cap of " + std::to_string(cap_) + " exceeded");
    return kept;
  }

  std::size_t compact(std::size_t a) {
    // `a` may have died during lookahead; continue from its representative's slot.
    std::vector<int> fresh(n_, -1);
    std::size_t m = 0;
    for (std::size_t c = 0; c < n_; ++c)
      if (live_[c]) fresh[c] = static_cast<int>(m++);
    std::size_t new_a = 0;
    for (std::size_t c = 0; c < a && c < n_; ++c)
      if (live_[c]) ++new_a;
    // new_a counts live cosets before a, so the loop resumes at a's position.
    for (std::size_t c = 0; c < n_; ++c) {
      if (!live_[c]) continue;
      std::size_t dst = static_cast<std::size_t>(fresh[c]);
      for (std::size_t x = 0; x < ncols_; ++x) {
        int y = at(static_cast<int>(c), x);
        table_[dst * ncols_ + x] = y < 0 ? -1 : fresh[static_cast<std::size_t>(y)];
      }
    }
    for (std::size_t c = 0; c < m; ++c) {
      live_[c] = 1;
      parent_[c] = static_cast<int>(c);
    }
    for (std::size_t c = m; c < n_; ++c) live_[c] = 0;
    n_ = m;
    nlive_ = m;
    return new_a;
  }

  std::size_t cap_;
  std::size_t ncols_ = 0;
  std::size_t room_ = 0;
  std::vector<std::vector<int>> relators_;
  std::vector<int> table_;
  std::vector<int> parent_;
  std::vector<char> live_;
  std::size_t n_ = 0;
  std::size_t nlive_ = 0;
  std::size_t max_live_ = 1;
  std::size_t total_defined_ = 0;
  std::size_t lookaheads_ = 0;
};

}  // namespace

CosetTable enumerate(const Presentation& p, const EnumOptions& opts, EnumStats* stats) {
  if (p.braid) throw EnumerationError(p.group + ": braid-flavor presentations define infinite groups");
  Enumerator e(p, opts);
  e.run();
  return e.finish(p, stats);
}

Perm identity_perm(std::size_t n) {
  Perm p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

Perm compose(const Perm& a, const Perm& b) {
  Perm r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = b[static_cast<std::size_t>(a[i])];
  return r;
}

Perm invert(const Perm& a) {
  Perm r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[static_cast<std::size_t>(a[i])] = static_cast<int>(i);
  return r;
}

std::uint64_t perm_order(const Perm& a) {
  std::vector<char> seen(a.size(), 0);
  std::uint64_t order = 1;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (seen[i]) continue;
    std::uint64_t len = 0;
    for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(a[j])) {
      seen[j] = 1;
      ++len;
    }
    order = std::lcm(order, len);
  }
  return order;
}

Perm eval_word(const CosetTable& t, const Word& w) {
  Perm r = identity_perm(t.size);
  for (int col : unit_letters(w)) {
    const Perm& g = t.action.at(static_cast<std::size_t>(col));
    for (auto& x : r) x = g[static_cast<std::size_t>(x)];
  }
  return r;
}

CenterCheck center_check(const CosetTable& t, const Presentation& p) {
  CenterCheck c;
  Perm z = eval_word(t, p.center);
  c.central = true;
  for (std::size_t g = 0; g < p.generators.size(); ++g) {
    const Perm& s = t.action[2 * g];
    if (compose(z, s) != compose(s, z)) {
      c.central = false;
      break;
    }
  }
  c.order = perm_order(z);
  return c;
}

}  // namespace bmr
