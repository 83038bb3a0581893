#pragma once

#include <string>
#include <utility>
#include <vector>

#include "normcomb/rational.hpp"

namespace normcomb {

/// Polynomial in the Case B constant c with exact rational coefficients.
/// Case A scalars are constants. Stored dense, lowest degree first, with no
/// trailing zero coefficients (so zero is the empty vector).
class Scalar {
public:
  Scalar() = default;
  Scalar(Rational r); // NOLINT
  Scalar(std::int64_t n) : Scalar(Rational(n)) {} // NOLINT
  explicit Scalar(std::vector<Rational> coef);

  /// q0 + q1*c
  static Scalar linear(Rational q0, Rational q1);
  static Scalar c() { return linear(0, 1); }

  int degree() const { return static_cast<int>(coef_.size()) - 1; }
  bool is_zero() const { return coef_.empty(); }
  bool is_rational() const { return coef_.size() <= 1; }
  Rational coeff(int i) const {
    return i < static_cast<int>(coef_.size()) ? coef_[i] : Rational(0);
  }
  Rational leading() const { return coef_.empty() ? Rational(0) : coef_.back(); }
  const std::vector<Rational> &coefficients() const { return coef_; }

  Scalar operator-() const;
  Scalar &operator+=(const Scalar &o);
  Scalar &operator-=(const Scalar &o);
  Scalar &operator*=(const Scalar &o);
  friend Scalar operator+(Scalar a, const Scalar &b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar &b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar &b) { return a *= b; }
  friend bool operator==(const Scalar &, const Scalar &) = default;

  Scalar scaled(const Rational &r) const;
  Rational evaluate(const Rational &at) const;

  /// "c - 1", "1/5", "2*c^2 - 3"
  std::string str() const;
  /// Whether str() needs parentheses when used as a factor.
  bool is_compound() const;

private:
  void trim();
  std::vector<Rational> coef_;
};

/// Polynomial division; the divisor must be nonzero.
std::pair<Scalar, Scalar> divmod(const Scalar &a, const Scalar &b);
/// Monic gcd (zero if both are zero).
Scalar gcd(Scalar a, Scalar b);

/// A rational function num/den in c, kept with coprime parts and a
/// monic-or-constant denominator.
struct ScalarRatio {
  Scalar num;
  Scalar den = Scalar(1);

  static ScalarRatio make(Scalar num, Scalar den);
  bool is_zero() const { return num.is_zero(); }
  std::string str() const;
  friend bool operator==(const ScalarRatio &, const ScalarRatio &) = default;
};

} // namespace normcomb
