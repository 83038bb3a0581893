#include "normcomb/poly.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "normcomb/error.hpp"

namespace normcomb {

Poly::Poly(Rational r) {
  if (!r.is_zero())
    terms_[{}] = r;
}

Poly Poly::variable(const std::string &name) {
  Poly p;
  p.terms_[{{name, 1}}] = Rational(1);
  return p;
}

void Poly::add_term(const PolyMonomial &m, const Rational &q) {
  if (q.is_zero())
    return;
  auto [it, inserted] = terms_.try_emplace(m, q);
  if (!inserted) {
    it->second += q;
    if (it->second.is_zero())
      terms_.erase(it);
  }
}

bool Poly::only_uses(const std::vector<std::string> &vars) const {
  for (const auto &[m, q] : terms_)
    for (const auto &[v, e] : m)
      if (std::find(vars.begin(), vars.end(), v) == vars.end())
        return false;
  return true;
}

int Poly::degree_in(const std::string &var) const {
  int d = 0;
  for (const auto &[m, q] : terms_)
    for (const auto &[v, e] : m)
      if (v == var)
        d = std::max(d, e);
  return d;
}

Poly Poly::operator-() const {
  Poly p = *this;
  for (auto &[m, q] : p.terms_)
    q = -q;
  return p;
}

Poly &Poly::operator+=(const Poly &o) {
  for (const auto &[m, q] : o.terms_)
    add_term(m, q);
  return *this;
}

Poly &Poly::operator-=(const Poly &o) {
  for (const auto &[m, q] : o.terms_)
    add_term(m, -q);
  return *this;
}

namespace {

PolyMonomial mono_mul(const PolyMonomial &a, const PolyMonomial &b) {
  PolyMonomial out;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first))
      out.push_back(a[i++]);
    else if (i == a.size() || b[j].first < a[i].first)
      out.push_back(b[j++]);
    else {
      out.emplace_back(a[i].first, a[i].second + b[j].second);
      ++i;
      ++j;
    }
  }
  return out;
}

} // namespace

Poly operator*(const Poly &a, const Poly &b) {
  Poly out;
  for (const auto &[ma, qa] : a.terms_)
    for (const auto &[mb, qb] : b.terms_)
      out.add_term(mono_mul(ma, mb), qa * qb);
  return out;
}

std::string Poly::str() const {
  if (terms_.empty())
    return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto &[m, q] : terms_) {
    const bool neg = q.sign() < 0;
    const Rational mag = neg ? -q : q;
    os << (first ? (neg ? "-" : "") : (neg ? " - " : " + "));
    first = false;
    bool need_star = false;
    if (m.empty() || mag != Rational(1)) {
      os << mag.str();
      need_star = true;
    }
    for (const auto &[v, e] : m) {
      if (need_star)
        os << '*';
      os << v;
      if (e != 1)
        os << '^' << e;
      need_star = true;
    }
  }
  return os.str();
}

RationalFunction operator+(const RationalFunction &a, const RationalFunction &b) {
  if (a.den == b.den)
    return {a.num + b.num, a.den};
  return {a.num * b.den + b.num * a.den, a.den * b.den};
}

RationalFunction operator-(const RationalFunction &a, const RationalFunction &b) {
  return a + (-b);
}

RationalFunction operator*(const RationalFunction &a, const RationalFunction &b) {
  return {a.num * b.num, a.den * b.den};
}

RationalFunction operator/(const RationalFunction &a, const RationalFunction &b) {
  if (b.num.is_zero())
    throw Error(ErrorKind::DivisionByZero, "division by the zero polynomial");
  return {a.num * b.den, a.den * b.num};
}

namespace {

std::string normalize_text(std::string_view in) {
  std::string out;
  for (std::size_t i = 0; i < in.size(); ++i) {
    auto rest = in.substr(i);
    if (rest.rfind("\xE2\x88\x92", 0) == 0) { // minus sign
      out += '-';
      i += 2;
    } else if (rest.rfind("\xE2\x80\xB2", 0) == 0) { // prime
      out += '\'';
      i += 2;
    } else if (rest.rfind("\xC2\xB7", 0) == 0 || rest.rfind("\xC3\x97", 0) == 0) {
      out += '*';
      i += 1;
    } else {
      out += in[i];
    }
  }
  return out;
}

class Parser {
public:
  explicit Parser(std::string text) : s_(std::move(text)) {}

  RationalFunction parse() {
    RationalFunction r = expr();
    skip();
    if (pos_ != s_.size())
      fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return r;
  }

private:
  [[noreturn]] void fail(const std::string &why) const {
    throw Error(ErrorKind::Parse,
                "cannot parse '" + s_ + "' at " + std::to_string(pos_) + ": " + why);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }

  char peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  static bool ident_start(char ch) {
    return std::isalpha(static_cast<unsigned char>(ch)) || ch == '_';
  }

  RationalFunction expr() {
    RationalFunction acc;
    char ch = peek();
    bool neg = false;
    if (ch == '+' || ch == '-') {
      neg = ch == '-';
      ++pos_;
    }
    acc = term();
    if (neg)
      acc = -acc;
    for (;;) {
      ch = peek();
      if (ch != '+' && ch != '-')
        return acc;
      ++pos_;
      RationalFunction t = term();
      acc = ch == '+' ? acc + t : acc - t;
    }
  }

  RationalFunction term() {
    RationalFunction acc = power();
    for (;;) {
      char ch = peek();
      if (ch == '*') {
        ++pos_;
        acc = acc * power();
      } else if (ch == '/') {
        ++pos_;
        acc = acc / power();
      } else if (ch == '(' || ident_start(ch) ||
                 std::isdigit(static_cast<unsigned char>(ch))) {
        acc = acc * power();
      } else {
        return acc;
      }
    }
  }

  RationalFunction power() {
    RationalFunction base = primary();
    if (peek() != '^')
      return base;
    ++pos_;
    bool neg = false;
    if (peek() == '-') {
      neg = true;
      ++pos_;
    }
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
    if (start == pos_)
      fail("expected exponent");
    const int e = std::stoi(s_.substr(start, pos_ - start));
    if (e > 64)
      fail("exponent too large");
    RationalFunction out;
    out.num = Poly(Rational(1));
    for (int i = 0; i < e; ++i)
      out = out * base;
    if (neg)
      out = RationalFunction{Poly(Rational(1)), Poly(Rational(1))} / out;
    return out;
  }

  RationalFunction primary() {
    char ch = peek();
    if (ch == '(') {
      ++pos_;
      RationalFunction r = expr();
      if (peek() != ')')
        fail("expected ')'");
      ++pos_;
      return r;
    }
    if (ch == '-') {
      ++pos_;
      return -power();
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
        ++pos_;
      return {Poly(Rational::parse(s_.substr(start, pos_ - start))),
              Poly(Rational(1))};
    }
    if (ident_start(ch)) {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' ||
              s_[pos_] == '\''))
        ++pos_;
      return {Poly::variable(s_.substr(start, pos_ - start)), Poly(Rational(1))};
    }
    fail(ch == '\0' ? "unexpected end of input" : "unexpected character");
  }

  std::string s_;
  std::size_t pos_ = 0;
};

} // namespace

RationalFunction parse_rational_function(std::string_view text) {
  return Parser(normalize_text(text)).parse();
}

bool verify_identity(const RationalFunction &lhs, const RationalFunction &rhs) {
  if (lhs.den.is_zero() || rhs.den.is_zero())
    throw Error(ErrorKind::DivisionByZero, "identity side has a zero denominator");
  return (lhs.num * rhs.den - rhs.num * lhs.den).is_zero();
}

bool verify_identity(std::string_view lhs, std::string_view rhs) {
  return verify_identity(parse_rational_function(lhs), parse_rational_function(rhs));
}

Poly to_poly(const Scalar &s) {
  Poly out;
  Poly cpow(Rational(1));
  const Poly c = Poly::variable("c");
  for (int i = 0; i <= s.degree(); ++i) {
    out += cpow * Poly(s.coeff(i));
    cpow = cpow * c;
  }
  return out;
}

Poly to_poly(const Expr &e, const AtomNames &names) {
  const Poly x = Poly::variable(names.first);
  const Poly y = Poly::variable(names.second);
  return to_poly(e.coeff(Expr::kOne)) + to_poly(e.coeff(Expr::kX)) * x +
         to_poly(e.coeff(Expr::kY)) * y + to_poly(e.coeff(Expr::kXY)) * x * y;
}

RationalFunction to_rational_function(const ScalarRatio &r) {
  return {to_poly(r.num), to_poly(r.den)};
}

Scalar to_scalar(const Poly &p) {
  if (!p.only_uses({"c"}))
    throw Error(ErrorKind::Parse, "'" + p.str() + "' is not a polynomial in c");
  std::vector<Rational> coef(p.degree_in("c") + 1);
  for (const auto &[m, q] : p.terms())
    coef[m.empty() ? 0 : m.front().second] += q;
  return Scalar(std::move(coef));
}

ScalarRatio to_scalar_ratio(const RationalFunction &f) {
  return ScalarRatio::make(to_scalar(f.num), to_scalar(f.den));
}

Expr to_expr(const RationalFunction &f, const AtomNames &names) {
  const Scalar den = to_scalar(f.den);
  if (den.is_zero())
    throw Error(ErrorKind::DivisionByZero, "expression with zero denominator");
  std::array<std::vector<Rational>, Expr::kMonomials> coef;
  for (const auto &[m, q] : f.num.terms()) {
    int mono = 0;
    int cdeg = 0;
    for (const auto &[v, e] : m) {
      if (v == "c") {
        cdeg = e;
        continue;
      }
      const int bit = v == names.first ? 1 : v == names.second ? 2 : 0;
      if (bit == 0)
        throw Error(ErrorKind::Parse, "unknown variable '" + v + "'");
      if (e != 1)
        throw Error(ErrorKind::Parse, "'" + v + "' appears squared");
      mono |= bit;
    }
    auto &cv = coef[mono];
    if (static_cast<int>(cv.size()) <= cdeg)
      cv.resize(cdeg + 1);
    cv[cdeg] += q;
  }
  Expr out;
  for (int m = 0; m < Expr::kMonomials; ++m) {
    auto [q, r] = divmod(Scalar(coef[m]), den);
    if (!r.is_zero())
      throw Error(ErrorKind::Parse, "denominator does not divide the expression");
    out.coeff(m) = q;
  }
  return out;
}

} // namespace normcomb
