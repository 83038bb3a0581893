#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "normcomb/scalar.hpp"

namespace normcomb {

/// Names of the (at most two) atoms an expression ranges over.
struct AtomNames {
  std::string first = "x";
  std::string second = "y";

  const std::string &operator[](int slot) const {
    return slot == 0 ? first : second;
  }
  friend bool operator==(const AtomNames &, const AtomNames &) = default;
};

/// Linear combination of the monomials {1, x, y, x*y} with Scalar
/// coefficients. This is the whole vocabulary the derivation engine needs:
/// every expression is at most linear in each atom.
class Expr {
public:
  enum Monomial : int { kOne = 0, kX = 1, kY = 2, kXY = 3 };
  static constexpr int kMonomials = 4;

  Expr() = default;
  Expr(std::initializer_list<Scalar> coef);

  static Expr constant(Scalar s);
  static Expr atom(int slot);
  /// 1 + a*atom
  static Expr one_plus(Scalar a, int slot = 0);

  const Scalar &coeff(int m) const { return c_[m]; }
  Scalar &coeff(int m) { return c_[m]; }

  bool is_zero() const;
  bool is_constant() const;
  /// Bit 0: depends on the first atom, bit 1: on the second.
  unsigned support() const;
  bool all_rational() const;

  Expr operator-() const;
  Expr &operator+=(const Expr &o);
  Expr &operator-=(const Expr &o);
  Expr &operator*=(const Scalar &s);
  friend Expr operator+(Expr a, const Expr &b) { return a += b; }
  friend Expr operator-(Expr a, const Expr &b) { return a -= b; }
  friend Expr operator*(Expr a, const Scalar &s) { return a *= s; }
  friend Expr operator*(const Scalar &s, Expr a) { return a *= s; }
  friend bool operator==(const Expr &, const Expr &) = default;

  /// Product, if it stays inside the monomial vocabulary.
  std::optional<Expr> times(const Expr &o) const;

  /// Canonical text form, e.g. "1 + 2*x", "1 - x*y", "1 - (c - 1)*x".
  std::string str(const AtomNames &names = {}) const;

private:
  std::array<Scalar, kMonomials> c_{};
};

/// Parse a polynomial expression over the given atoms (and c). Throws
/// ErrorKind::Parse if the text leaves the monomial vocabulary.
Expr parse_expr(std::string_view text, const AtomNames &names = {});

} // namespace normcomb
