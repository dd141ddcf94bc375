#include "bmr/word.hpp"

#include <cctype>
#include <cstdlib>

namespace bmr {

namespace {

void push_letter(std::vector<Letter>& out, Letter l) {
  if (l.exp == 0) return;
  if (!out.empty() && out.back().gen == l.gen) {
    out.back().exp += l.exp;
    if (out.back().exp == 0) out.pop_back();
  } else {
    out.push_back(l);
  }
}

class WordParser {
 public:
  WordParser(const std::string& s, const std::vector<std::string>& gens) : s_(s), gens_(gens) {}

  Word parse() {
    std::vector<Letter> out = sequence();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected character");
    return Word(std::move(out));
  }

 private:
  std::vector<Letter> sequence() {
    std::vector<Letter> out;
    while (true) {
      skip_ws();
      if (pos_ >= s_.size() || s_[pos_] == ')') break;
      std::vector<Letter> atom_letters;
      if (s_[pos_] == '(') {
        ++pos_;
        atom_letters = sequence();
        skip_ws();
        if (pos_ >= s_.size() || s_[pos_] != ')') fail("missing ')'");
        ++pos_;
        int n = exponent();
        Word w = power(Word(std::move(atom_letters)), n);
        for (const auto& l : w.letters) push_letter(out, l);
      } else if (s_[pos_] == '1' && (pos_ + 1 == s_.size() || !std::isalnum(static_cast<unsigned char>(s_[pos_ + 1])))) {
        ++pos_;
      } else if (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_') {
        std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        std::string tok = s_.substr(start, pos_ - start);
        std::vector<int> idx = resolve(tok);
        int n = exponent();
        // Exponent binds to the last letter of a split token.
        for (std::size_t i = 0; i < idx.size(); ++i)
          push_letter(out, Letter{idx[i], i + 1 == idx.size() ? n : 1});
      } else {
        fail("unexpected character");
      }
    }
    return out;
  }

  std::vector<int> resolve(const std::string& tok) const {
    for (std::size_t g = 0; g < gens_.size(); ++g)
      if (gens_[g] == tok) return {static_cast<int>(g)};
    std::vector<int> out;
    for (char c : tok) {
      int found = -1;
      for (std::size_t g = 0; g < gens_.size(); ++g)
        if (gens_[g].size() == 1 && gens_[g][0] == c) found = static_cast<int>(g);
      if (found < 0) throw WordError("unknown generator '" + tok + "' in word '" + s_ + "'");
      out.push_back(found);
    }
    return out;
  }

  int exponent() {
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] != '^') return 1;
    ++pos_;
    skip_ws();
    std::size_t start = pos_;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    std::string num = s_.substr(start, pos_ - start);
    if (num.empty() || num == "-" || num == "+") fail("expected exponent");
    return std::stoi(num);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw WordError("word parse error in '" + s_ + "' at offset " + std::to_string(pos_) + ": " + what);
  }

  const std::string& s_;
  const std::vector<std::string>& gens_;
  std::size_t pos_ = 0;
};

}  // namespace

Word::Word(std::vector<Letter> raw) {
  letters.reserve(raw.size());
  for (const auto& l : raw) push_letter(letters, l);
}

int Word::length() const {
  int n = 0;
  for (const auto& l : letters) n += std::abs(l.exp);
  return n;
}

Word concat(const Word& a, const Word& b) {
  Word r = a;
  for (const auto& l : b.letters) push_letter(r.letters, l);
  return r;
}

Word inverse(const Word& w) {
  Word r;
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) r.letters.push_back({it->gen, -it->exp});
  return r;
}

Word power(const Word& w, int n) {
  Word base = n < 0 ? inverse(w) : w;
  Word r;
  for (int i = 0; i < std::abs(n); ++i) r = concat(r, base);
  return r;
}

std::vector<int> unit_letters(const Word& w) {
  std::vector<int> out;
  for (const auto& l : w.letters) {
    int col = 2 * l.gen + (l.exp < 0 ? 1 : 0);
    for (int i = 0; i < std::abs(l.exp); ++i) out.push_back(col);
  }
  return out;
}

Word parse_word(const std::string& text, const std::vector<std::string>& gens) {
  return WordParser(text, gens).parse();
}

std::string format_word(const Word& w, const std::vector<std::string>& gens) {
  if (w.empty()) return "1";
  std::string out;
  for (const auto& l : w.letters) {
    if (!out.empty()) out += ' ';
    out += gens.at(static_cast<std::size_t>(l.gen));
    if (l.exp != 1) out += '^' + std::to_string(l.exp);
  }
  return out;
}

}  // namespace bmr
