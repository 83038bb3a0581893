#pragma once

// General multivariate polynomials and rational functions over Q, plus the
// text parser shared by the CLI and the trace checker. Deliberately separate
// from Expr so that identity checks do not reuse the engine's linear algebra.

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "normcomb/expr.hpp"
#include "normcomb/rational.hpp"
#include "normcomb/scalar.hpp"

namespace normcomb {

/// Sorted (variable, exponent) pairs; empty = the constant monomial.
using PolyMonomial = std::vector<std::pair<std::string, int>>;

class Poly {
public:
  Poly() = default;
  Poly(Rational r); // NOLINT
  static Poly variable(const std::string &name);

  bool is_zero() const { return terms_.empty(); }
  const std::map<PolyMonomial, Rational> &terms() const { return terms_; }
  bool only_uses(const std::vector<std::string> &vars) const;
  int degree_in(const std::string &var) const;

  Poly operator-() const;
  Poly &operator+=(const Poly &o);
  Poly &operator-=(const Poly &o);
  friend Poly operator+(Poly a, const Poly &b) { return a += b; }
  friend Poly operator-(Poly a, const Poly &b) { return a -= b; }
  friend Poly operator*(const Poly &a, const Poly &b);
  friend bool operator==(const Poly &, const Poly &) = default;

  std::string str() const;

private:
  void add_term(const PolyMonomial &m, const Rational &q);
  std::map<PolyMonomial, Rational> terms_;
};

struct RationalFunction {
  Poly num;
  Poly den = Poly(Rational(1));

  friend RationalFunction operator+(const RationalFunction &a,
                                    const RationalFunction &b);
  friend RationalFunction operator-(const RationalFunction &a,
                                    const RationalFunction &b);
  friend RationalFunction operator*(const RationalFunction &a,
                                    const RationalFunction &b);
  friend RationalFunction operator/(const RationalFunction &a,
                                    const RationalFunction &b);
  RationalFunction operator-() const { return {-num, den}; }
  bool is_zero() const { return num.is_zero(); }
};

RationalFunction parse_rational_function(std::string_view text);

/// True iff lhs - rhs is the zero rational function. Throws
/// ErrorKind::DivisionByZero if a denominator is identically zero.
bool verify_identity(const RationalFunction &lhs, const RationalFunction &rhs);
bool verify_identity(std::string_view lhs, std::string_view rhs);

Poly to_poly(const Scalar &s);
Poly to_poly(const Expr &e, const AtomNames &names);
RationalFunction to_rational_function(const ScalarRatio &r);

/// Polynomial in c only -> Scalar. Throws Parse otherwise.
Scalar to_scalar(const Poly &p);
/// Rational function in c -> (num, den). Throws Parse otherwise.
ScalarRatio to_scalar_ratio(const RationalFunction &f);
/// Rational function whose denominator is a constant in c -> Expr.
Expr to_expr(const RationalFunction &f, const AtomNames &names);

} // namespace normcomb
