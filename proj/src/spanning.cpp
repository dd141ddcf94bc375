#include <set>

#include "bmr/hecke.hpp"

namespace bmr {

namespace {

// One factor of a recipe term: either a fixed word or every monomial of a cyclic subalgebra.
struct Factor {
  std::vector<Word> choices;
};

std::vector<Factor> parse_term(const std::string& term, const Presentation& p) {
  std::vector<Factor> out;
  std::size_t pos = 0;
  while (pos < term.size()) {
    std::size_t open = term.find('<', pos);
    std::string fixed = term.substr(pos, open == std::string::npos ? std::string::npos : open - pos);
    if (fixed.find_first_not_of(" \t") != std::string::npos) out.push_back({{p.word(fixed)}});
    if (open == std::string::npos) break;
    std::size_t close = term.find('>', open);
    if (close == std::string::npos) throw SpanningError("unterminated '<' in term '" + term + "'");
    std::string name = term.substr(open + 1, close - open - 1);
    name.erase(0, name.find_first_not_of(' '));
    name.erase(name.find_last_not_of(' ') + 1);
    int g = p.gen_index(name);
    if (g < 0) throw SpanningError("unknown generator '" + name + "' in term '" + term + "'");
    Factor f;
    for (int k : subalgebra_exponents(p.orders[static_cast<std::size_t>(g)]))
      f.choices.push_back(Word({Letter{g, k}}));
    out.push_back(std::move(f));
    pos = close + 1;
  }
  if (out.empty()) throw SpanningError("empty spanning term");
  return out;
}

}  // namespace

std::vector<int> subalgebra_exponents(int e) {
  if (e < 2) throw SpanningError("subalgebra of a generator of order " + std::to_string(e));
  std::vector<int> out{0};
  for (int k = 1; static_cast<int>(out.size()) < e; ++k) {
    out.push_back(k);
    if (static_cast<int>(out.size()) < e) out.push_back(-k);
  }
  return out;
}

std::vector<Word> expand_recipe(const SpanningRecipe& r, const Presentation& bmr) {
  std::vector<std::vector<Factor>> terms;
  for (const auto& t : r.terms) terms.push_back(parse_term(t, bmr));
  std::vector<Word> out;
  for (int k = r.z_min; k <= r.z_max; ++k) {
    Word zk = power(bmr.center, k);
    for (const auto& factors : terms) {
      std::vector<std::size_t> idx(factors.size(), 0);
      while (true) {
        Word w = zk;
        for (std::size_t f = 0; f < factors.size(); ++f) w = concat(w, factors[f].choices[idx[f]]);
        out.push_back(std::move(w));
        // Odometer with the last factor fastest.
        bool wrapped = true;
        for (std::size_t f = factors.size(); f-- > 0;) {
          if (++idx[f] < factors[f].choices.size()) {
            wrapped = false;
            break;
          }
          idx[f] = 0;
        }
        if (wrapped) break;
      }
    }
  }
  return out;
}

SpanningSet expand_spanning_set(const GroupEntry& e) {
  if (!e.spanning) throw SpanningError(e.id + " has no spanning-set recipe");
  SpanningSet s;
  s.group = e.id;
  s.expected_size = e.bmr.group_order;
  s.words = expand_recipe(*e.spanning, e.bmr);
  std::set<Word> seen;
  for (const auto& w : s.words)
    if (!seen.insert(w).second)
      throw SpanningError(e.id + ": duplicate spanning word " + e.bmr.format(w));
  if (s.words.size() != s.expected_size)
    throw SpanningError(e.id + ": recipe expands to " + std::to_string(s.words.size()) + " words, expected " +
                        std::to_string(s.expected_size));
  return s;
}

}  // namespace bmr
