#include "normcomb/scalar.hpp"

#include <sstream>

#include "normcomb/error.hpp"

namespace normcomb {

Scalar::Scalar(Rational r) {
  if (!r.is_zero())
    coef_.push_back(r);
}

Scalar::Scalar(std::vector<Rational> coef) : coef_(std::move(coef)) { trim(); }

Scalar Scalar::linear(Rational q0, Rational q1) { return Scalar({q0, q1}); }

void Scalar::trim() {
  while (!coef_.empty() && coef_.back().is_zero())
    coef_.pop_back();
}

Scalar Scalar::operator-() const {
  Scalar out = *this;
  for (auto &q : out.coef_)
    q = -q;
  return out;
}

Scalar &Scalar::operator+=(const Scalar &o) {
  if (o.coef_.size() > coef_.size())
    coef_.resize(o.coef_.size());
  for (std::size_t i = 0; i < o.coef_.size(); ++i)
    coef_[i] += o.coef_[i];
  trim();
  return *this;
}

Scalar &Scalar::operator-=(const Scalar &o) { return *this += -o; }

Scalar &Scalar::operator*=(const Scalar &o) {
  if (is_zero() || o.is_zero()) {
    coef_.clear();
    return *this;
  }
  if (coef_.size() == 1 && o.coef_.size() == 1) {
    coef_[0] *= o.coef_[0];
    return *this;
  }
  std::vector<Rational> out(coef_.size() + o.coef_.size() - 1);
  for (std::size_t i = 0; i < coef_.size(); ++i)
    for (std::size_t j = 0; j < o.coef_.size(); ++j)
      out[i + j] += coef_[i] * o.coef_[j];
  coef_ = std::move(out);
  trim();
  return *this;
}

Scalar Scalar::scaled(const Rational &r) const {
  Scalar out = *this;
  for (auto &q : out.coef_)
    q *= r;
  out.trim();
  return out;
}

Rational Scalar::evaluate(const Rational &at) const {
  Rational acc = 0;
  for (auto it = coef_.rbegin(); it != coef_.rend(); ++it)
    acc = acc * at + *it;
  return acc;
}

bool Scalar::is_compound() const {
  int nonzero = 0;
  for (const auto &q : coef_)
    nonzero += !q.is_zero();
  return nonzero > 1;
}

std::string Scalar::str() const {
  if (coef_.empty())
    return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    Rational q = coef_[i];
    if (q.is_zero())
      continue;
    const bool neg = q.sign() < 0;
    const Rational mag = neg ? -q : q;
    if (first)
      os << (neg ? "-" : "");
    else
      os << (neg ? " - " : " + ");
    first = false;
    if (i == 0) {
      os << mag.str();
      continue;
    }
    if (mag != Rational(1))
      os << mag.str() << '*';
    os << 'c';
    if (i > 1)
      os << '^' << i;
  }
  return os.str();
}

std::pair<Scalar, Scalar> divmod(const Scalar &a, const Scalar &b) {
  if (b.is_zero())
    throw Error(ErrorKind::DivisionByZero, "polynomial division by zero");
  std::vector<Rational> rem = a.coefficients();
  const int db = b.degree();
  if (a.degree() < db)
    return {Scalar(), a};
  std::vector<Rational> quot(a.degree() - db + 1);
  const Rational lead = b.leading();
  for (int i = a.degree(); i >= db; --i) {
    const Rational q = rem[i] / lead;
    quot[i - db] = q;
    if (q.is_zero())
      continue;
    for (int j = 0; j <= db; ++j)
      rem[i - db + j] -= q * b.coeff(j);
  }
  rem.resize(db > 0 ? db : 0);
  return {Scalar(std::move(quot)), Scalar(std::move(rem))};
}

Scalar gcd(Scalar a, Scalar b) {
  while (!b.is_zero()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (a.is_zero())
    return a;
  return a.scaled(Rational(1) / a.leading());
}

ScalarRatio ScalarRatio::make(Scalar num, Scalar den) {
  if (den.is_zero())
    throw Error(ErrorKind::DivisionByZero, "ratio with zero denominator");
  if (num.is_zero())
    return {Scalar(), Scalar(1)};
  const Scalar g = gcd(num, den);
  if (g.degree() > 0) {
    num = divmod(num, g).first;
    den = divmod(den, g).first;
  }
  const Rational lead = den.leading();
  return {num.scaled(Rational(1) / lead), den.scaled(Rational(1) / lead)};
}

std::string ScalarRatio::str() const {
  if (den == Scalar(1))
    return num.str();
  auto wrap = [](const Scalar &s) {
    return s.is_compound() ? "(" + s.str() + ")" : s.str();
  };
  return wrap(num) + "/" + wrap(den);
}

} // namespace normcomb
