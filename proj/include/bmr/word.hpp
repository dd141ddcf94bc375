#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace bmr {

class WordError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Letter {
  int gen = 0;
  int exp = 1;
  bool operator==(const Letter&) const = default;
  auto operator<=>(const Letter&) const = default;
};

/// Freely reduced word: adjacent letters never share a generator and no
/// exponent is zero. The empty word is the identity.
struct Word {
  std::vector<Letter> letters;

  Word() = default;
  /// Reduces its argument.
  explicit Word(std::vector<Letter> raw);

  bool empty() const { return letters.empty(); }
  /// Sum of |exp|.
  int length() const;
  bool operator==(const Word&) const = default;
  auto operator<=>(const Word&) const = default;
};

Word concat(const Word& a, const Word& b);
Word inverse(const Word& w);
Word power(const Word& w, int n);

/// Unit letters of `w` as column indices: 2g for g, 2g+1 for g^-1, left to right.
std::vector<int> unit_letters(const Word& w);

/// Parses `s t^-1 u^2` or `(s t s)^-1`. Letters are separated by whitespace;
/// a token that is not a generator name but spells one-character generators
/// (`sts`) is split. `1` is the identity.
Word parse_word(const std::string& text, const std::vector<std::string>& gens);

std::string format_word(const Word& w, const std::vector<std::string>& gens);

}  // namespace bmr
