#include <gtest/gtest.h>

#include "normcomb/dyadic.hpp"
#include "normcomb/error.hpp"
#include "normcomb/poly.hpp"
#include "normcomb/rational.hpp"
#include "normcomb/scalar.hpp"
#include "normcomb/squareclass.hpp"

using namespace normcomb;

TEST(Rational, NormalizesAndAdds) {
  EXPECT_EQ(Rational(1, 2) + Rational(1, 3), Rational(5, 6));
  EXPECT_EQ(Rational::parse("-3/6"), Rational(-1, 2));
  EXPECT_EQ(Rational(4, -8).str(), "-1/2");
  EXPECT_THROW(Rational(1, 0), Error);
}

TEST(SquareClass, GroupLaw) {
  const ClassGroup A = ClassGroup::case_a();
  const SquareClass m1 = parse_class("-1", A), two = parse_class("2", A);
  EXPECT_EQ(format_class(m1 * two), "-2");
  EXPECT_EQ(format_class(parse_class("-10", A) * parse_class("10", A)), "-1");
  EXPECT_TRUE((m1 * m1).is_one());
  EXPECT_THROW(parse_class("3", A), Error);
  EXPECT_THROW(class_mul(m1, parse_class("c", ClassGroup::case_b())), Error);
}

TEST(SquareClass, Sets) {
  const ClassGroup B = ClassGroup::case_b();
  const ClassSet s = parse_class_set({"1", "2", "c", "2c"}, B);
  EXPECT_EQ(s.size(), 4);
  EXPECT_TRUE(parse_class_set({"1", "c"}, B).subset_of(s));
  EXPECT_EQ(coset(parse_class("2", B), s).str(), s.str());
}

TEST(Dyadic, InverseModPowerOfTwo) {
  // 5 * 13 = 65 = 1 mod 64
  const Dyadic i = inv(Dyadic::make(0, 5, 6));
  EXPECT_EQ(i.valuation(), 0);
  EXPECT_EQ(i.unit(), 13u);
  EXPECT_EQ(i.precision(), 6);
}

TEST(Dyadic, ArithmeticMatchesRationals) {
  const Dyadic a = Dyadic::from_rational(Rational(3, 4));
  const Dyadic b = Dyadic::from_rational(Rational(5, 2));
  EXPECT_EQ(a + b, Dyadic::from_rational(Rational(13, 4)));
  EXPECT_EQ(a * b, Dyadic::from_rational(Rational(15, 8)));
  EXPECT_EQ(a / b, Dyadic::from_rational(Rational(3, 10)));
  EXPECT_THROW(inv(Dyadic()), Error);
}

TEST(Dyadic, FullCancellationExhaustsPrecision) {
  const Dyadic a = Dyadic::make(0, 1, 8);
  const Dyadic b = Dyadic::make(0, 255, 8); // -1 mod 2^8
  EXPECT_THROW(a + b, Error);
}

TEST(Dyadic, SquaresByHenselCriterion) {
  // Odd units are squares iff they are 1 mod 8; valuation must be even.
  for (std::int64_t n = -200; n <= 200; ++n) {
    if (n == 0)
      continue;
    std::int64_t u = n, v = 0;
    while (u % 2 == 0) {
      u /= 2;
      ++v;
    }
    const bool want = v % 2 == 0 && ((u % 8) + 8) % 8 == 1;
    EXPECT_EQ(is_square(Dyadic::from_rational(Rational(n))), want) << n;
  }
}

TEST(Dyadic, SquareClassLabels) {
  const auto label = [](std::int64_t n, std::int64_t d = 1) {
    return format_class(square_class_of(Dyadic::from_rational(Rational(n, d))));
  };
  EXPECT_EQ(label(12), "-5");
  EXPECT_EQ(label(7), "-1");
  EXPECT_EQ(label(6), "-10");
  EXPECT_EQ(label(17), "1");
  EXPECT_EQ(label(1, 5), "5");
  EXPECT_EQ(label(-3, 8), "10");
}

TEST(Dyadic, ConstructionProbe) {
  const ConstructionReport r = verify_construction(2000, 7, 64);
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.gamma_mod_2_order, 2);
  for (std::int64_t n : {1, 2, 3, 4, 6, 8, 12, -5})
    for (std::int64_t d : {1, 2, 4, 8}) {
      const Dyadic x = Dyadic::from_rational(Rational(n, d));
      EXPECT_EQ(classify_closed_form(x), classify_in_construction(x)) << n << "/" << d;
    }
}

TEST(Dyadic, QuadraticExtensionInvariants) {
  const ClassGroup A = ClassGroup::case_a();
  // Q2(sqrt 5) is the unramified quadratic extension.
  EXPECT_EQ(quad_ext_invariants(parse_class("5", A)), std::make_pair(1, 2));
  EXPECT_EQ(quad_ext_invariants(parse_class("-1", A)), std::make_pair(2, 1));
  EXPECT_THROW(quad_ext_invariants(parse_class("1", A)), Error);
}

TEST(Poly, IdentityCheck) {
  EXPECT_TRUE(verify_identity("(x + 1)*(x + 1)", "x*x + 2*x + 1"));
  EXPECT_TRUE(verify_identity("1 - x*y", "(1 + a*y) + (-a*y)*(1 + x/a)"));
  EXPECT_FALSE(verify_identity("1 - x*y", "(1 + a*y) + (-a*y)*(1 + a*x)"));
}

TEST(Scalar, PolynomialsInC) {
  const Scalar c = Scalar::c();
  const Scalar p = c * c - Scalar(Rational(1));
  EXPECT_EQ(p.evaluate(Rational(3)), Rational(8));
  const auto [q, r] = divmod(p, c - Scalar(Rational(1)));
  EXPECT_TRUE(r.is_zero());
  EXPECT_EQ(q, c + Scalar(Rational(1)));
}
