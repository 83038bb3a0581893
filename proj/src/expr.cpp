#include "normcomb/expr.hpp"

#include <sstream>

#include "normcomb/error.hpp"
#include "normcomb/poly.hpp"

namespace normcomb {

Expr::Expr(std::initializer_list<Scalar> coef) {
  if (coef.size() > kMonomials)
    throw Error(ErrorKind::InvalidArgument, "too many expression coefficients");
  int i = 0;
  for (const auto &s : coef)
    c_[i++] = s;
}

Expr Expr::constant(Scalar s) {
  Expr e;
  e.c_[kOne] = std::move(s);
  return e;
}

Expr Expr::atom(int slot) {
  Expr e;
  e.c_[slot == 0 ? kX : kY] = Scalar(1);
  return e;
}

Expr Expr::one_plus(Scalar a, int slot) {
  Expr e = constant(Scalar(1));
  e.c_[slot == 0 ? kX : kY] = std::move(a);
  return e;
}

bool Expr::is_zero() const {
  for (const auto &s : c_)
    if (!s.is_zero())
      return false;
  return true;
}

bool Expr::is_constant() const { return support() == 0; }

unsigned Expr::support() const {
  unsigned s = 0;
  if (!c_[kX].is_zero() || !c_[kXY].is_zero())
    s |= 1u;
  if (!c_[kY].is_zero() || !c_[kXY].is_zero())
    s |= 2u;
  return s;
}

bool Expr::all_rational() const {
  for (const auto &s : c_)
    if (!s.is_rational())
      return false;
  return true;
}

Expr Expr::operator-() const {
  Expr e = *this;
  for (auto &s : e.c_)
    s = -s;
  return e;
}

Expr &Expr::operator+=(const Expr &o) {
  for (int i = 0; i < kMonomials; ++i)
    c_[i] += o.c_[i];
  return *this;
}

Expr &Expr::operator-=(const Expr &o) {
  for (int i = 0; i < kMonomials; ++i)
    c_[i] -= o.c_[i];
  return *this;
}

Expr &Expr::operator*=(const Scalar &s) {
  for (auto &q : c_)
    q *= s;
  return *this;
}

std::optional<Expr> Expr::times(const Expr &o) const {
  Expr out;
  for (int i = 0; i < kMonomials; ++i) {
    if (c_[i].is_zero())
      continue;
    for (int j = 0; j < kMonomials; ++j) {
      if (o.c_[j].is_zero())
        continue;
      // Monomial index bits are (x, y); overlapping bits mean a square.
      if (i & j)
        return std::nullopt;
      out.c_[i | j] += c_[i] * o.c_[j];
    }
  }
  return out;
}

std::string Expr::str(const AtomNames &names) const {
  const std::string mono[kMonomials] = {
      "", names.first, names.second, names.first + "*" + names.second};
  std::ostringstream os;
  bool first = true;
  for (int m = 0; m < kMonomials; ++m) {
    const Scalar &s = c_[m];
    if (s.is_zero())
      continue;
    const bool neg = s.leading().sign() < 0;
    const Scalar mag = neg ? -s : s;
    std::string body;
    const bool paren = mag.is_compound() && (neg || !first || m != kOne);
    const std::string ms = paren ? "(" + mag.str() + ")" : mag.str();
    if (m == kOne)
      body = ms;
    else if (mag == Scalar(1))
      body = mono[m];
    else
      body = ms + "*" + mono[m];
    if (first)
      os << (neg ? "-" : "");
    else
      os << (neg ? " - " : " + ");
    os << body;
    first = false;
  }
  return first ? "0" : os.str();
}

Expr parse_expr(std::string_view text, const AtomNames &names) {
  return to_expr(parse_rational_function(text), names);
}

} // namespace normcomb
