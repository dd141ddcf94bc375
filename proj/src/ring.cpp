#include "bmr/ring.hpp"

#include <atomic>
#include <cctype>
#include <sstream>

namespace bmr {

namespace {

std::atomic<std::size_t> g_term_cap{1'000'000};

bool is_name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class PolyParser {
 public:
  PolyParser(const std::string& text, VarSetPtr vars) : s_(text), vars_(std::move(vars)) {}

  LaurentPoly parse() {
    LaurentPoly result(vars_);
    skip_ws();
    if (pos_ == s_.size()) throw RingError("empty polynomial text");
    bool first = true;
    while (true) {
      skip_ws();
      if (pos_ == s_.size()) break;
      int sign = 1;
      if (s_[pos_] == '+' || s_[pos_] == '-') {
        sign = s_[pos_] == '-' ? -1 : 1;
        ++pos_;
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      first = false;
      LaurentPoly t = term();
      if (sign < 0) t = -t;
      result += t;
    }
    return result;
  }

 private:
  LaurentPoly term() {
    skip_ws();
    mpz_class coeff = 1;
    LaurentPoly::Exponents exps(vars_->size(), 0);
    bool any = false;
    while (true) {
      skip_ws();
      if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        coeff *= mpz_class(s_.substr(start, pos_ - start));
      } else if (pos_ < s_.size() && is_name_start(s_[pos_])) {
        std::size_t start = pos_;
        while (pos_ < s_.size() && is_name_char(s_[pos_])) ++pos_;
        std::string name = s_.substr(start, pos_ - start);
        long idx = vars_->index(name);
        if (idx < 0) fail("unknown parameter '" + name + "'");
        int power = 1;
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == '^') {
          ++pos_;
          power = integer();
        }
        exps[static_cast<std::size_t>(idx)] += power;
      } else {
        fail("expected a coefficient or parameter");
      }
      any = true;
      skip_ws();
      if (pos_ < s_.size() && s_[pos_] == '*') {
        ++pos_;
        continue;
      }
      break;
    }
    if (!any) fail("empty term");
    return LaurentPoly::monomial(vars_, std::move(exps), coeff);
  }

  int integer() {
    skip_ws();
    int sign = 1;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) {
      sign = s_[pos_] == '-' ? -1 : 1;
      ++pos_;
    }
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an exponent");
    return sign * std::stoi(s_.substr(start, pos_ - start));
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw RingError("polynomial parse error at offset " + std::to_string(pos_) + ": " + what);
  }

  const std::string& s_;
  VarSetPtr vars_;
  std::size_t pos_ = 0;
};

}  // namespace

VarSet::VarSet(std::vector<std::string> names) : names_(std::move(names)) {}

long VarSet::index(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return static_cast<long>(i);
  return -1;
}

VarSetPtr make_varset(std::vector<std::string> names) {
  return std::make_shared<const VarSet>(std::move(names));
}

LaurentPoly::LaurentPoly(VarSetPtr vars) : vars_(std::move(vars)) {}

LaurentPoly LaurentPoly::constant(VarSetPtr vars, long c) { return constant(vars, mpz_class(c)); }

LaurentPoly LaurentPoly::constant(VarSetPtr vars, const mpz_class& c) {
  Exponents e(vars->size(), 0);
  return monomial(std::move(vars), std::move(e), c);
}

LaurentPoly LaurentPoly::variable(VarSetPtr vars, std::size_t index, int power) {
  if (index >= vars->size()) throw RingError("variable index out of range");
  Exponents e(vars->size(), 0);
  e[index] = power;
  return monomial(std::move(vars), std::move(e), 1);
}

LaurentPoly LaurentPoly::variable(VarSetPtr vars, const std::string& name, int power) {
  long idx = vars->index(name);
  if (idx < 0) throw RingError("unknown parameter '" + name + "'");
  return variable(std::move(vars), static_cast<std::size_t>(idx), power);
}

LaurentPoly LaurentPoly::monomial(VarSetPtr vars, Exponents exps, const mpz_class& coeff) {
  if (exps.size() != vars->size()) throw RingError("exponent vector length mismatch");
  LaurentPoly p(std::move(vars));
  if (coeff != 0) p.terms_.emplace(std::move(exps), coeff);
  return p;
}

LaurentPoly LaurentPoly::parse(const std::string& text, VarSetPtr vars) {
  return PolyParser(text, std::move(vars)).parse();
}

bool LaurentPoly::is_one() const {
  if (terms_.size() != 1) return false;
  const auto& [e, c] = *terms_.begin();
  if (c != 1) return false;
  for (int x : e)
    if (x != 0) return false;
  return true;
}

bool LaurentPoly::is_unit() const {
  if (terms_.size() != 1) return false;
  const auto& c = terms_.begin()->second;
  return c == 1 || c == -1;
}

LaurentPoly LaurentPoly::inverse_unit() const {
  if (!is_unit()) throw RingError("not a unit: " + str());
  const auto& [e, c] = *terms_.begin();
  Exponents inv(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) inv[i] = -e[i];
  return monomial(vars_, std::move(inv), c);
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly r(*this);
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

void LaurentPoly::check_compatible(const LaurentPoly& o) const {
  if (!vars_ || !o.vars_) throw RingError("uninitialised polynomial");
  if (vars_ != o.vars_ && vars_->names() != o.vars_->names())
    throw RingError("variable-set mismatch");
}

void LaurentPoly::check_cap() const {
  if (terms_.size() > g_term_cap.load())
    throw RingOverflow("term count " + std::to_string(terms_.size()) + " exceeds cap " +
                       std::to_string(g_term_cap.load()));
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
  check_compatible(o);
  for (const auto& [e, c] : o.terms_) {
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(e, c);
    } else {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }
  check_cap();
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
  check_compatible(o);
  for (const auto& [e, c] : o.terms_) {
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(e, -c);
    } else {
      it->second -= c;
      if (it->second == 0) terms_.erase(it);
    }
  }
  check_cap();
  return *this;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  a.check_compatible(b);
  LaurentPoly r(a.vars_);
  const std::size_t n = a.vars_->size();
  LaurentPoly::Exponents e(n);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t i = 0; i < n; ++i) e[i] = ea[i] + eb[i];
      auto it = r.terms_.find(e);
      if (it == r.terms_.end()) {
        r.terms_.emplace(e, ca * cb);
      } else {
        it->second += ca * cb;
        if (it->second == 0) r.terms_.erase(it);
      }
    }
    r.check_cap();
  }
  return r;
}

LaurentPoly& LaurentPoly::operator*=(const LaurentPoly& o) {
  *this = *this * o;
  return *this;
}

bool LaurentPoly::operator==(const LaurentPoly& o) const {
  if (terms_.empty() && o.terms_.empty()) return true;
  check_compatible(o);
  return terms_ == o.terms_;
}

std::string LaurentPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  // Highest exponent vector first so the constant term tends to come last.
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    mpz_class mag = abs(c);
    if (first) {
      if (c < 0) out << '-';
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    first = false;
    bool wrote = false;
    bool constant = true;
    for (int x : e)
      if (x != 0) constant = false;
    if (mag != 1 || constant) {
      out << mag.get_str();
      wrote = true;
    }
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (wrote) out << '*';
      out << vars_->name(i);
      if (e[i] != 1) out << '^' << e[i];
      wrote = true;
    }
  }
  return out.str();
}

void LaurentPoly::set_term_cap(std::size_t cap) { g_term_cap.store(cap); }
std::size_t LaurentPoly::term_cap() { return g_term_cap.load(); }

LaurentPoly lp_arith(const LaurentPoly& a, const LaurentPoly& b, LpOp op) {
  switch (op) {
    case LpOp::Add: return a + b;
    case LpOp::Sub: return a - b;
    case LpOp::Mul: return a * b;
  }
  throw RingError("unknown operation");
}

LaurentPoly lp_invert_unit(const LaurentPoly& a) { return a.inverse_unit(); }

}  // namespace bmr
