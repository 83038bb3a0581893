#include <gtest/gtest.h>

#include "normcomb/dyadic.hpp"
#include "normcomb/normlattice.hpp"

using namespace normcomb;

namespace {

// Closed form of the 2-adic Hilbert symbol on the representatives
// (-1)^b0 * 2^b1 * 5^b2.
int hilbert_closed_form(std::uint8_t a, std::uint8_t b) {
  const auto unit = [](std::uint8_t bits) { return (bits & 1 ? -1 : 1) * (bits & 4 ? 5 : 1); };
  const auto eps = [](int u) { return (((u - 1) / 2) % 2 + 2) % 2; };
  const auto omega = [](int u) { return ((u * u - 1) / 8) % 2; };
  const int u = unit(a), v = unit(b);
  const int alpha = (a >> 1) & 1, beta = (b >> 1) & 1;
  const int e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u);
  return e % 2 ? -1 : 1;
}

} // namespace

TEST(Lattice, CaseAMatchesClosedForm) {
  const NormLattice L = lattice(LatticeScenario::CaseA);
  for (std::uint8_t a = 0; a < 8; ++a)
    for (std::uint8_t b = 0; b < 8; ++b)
      EXPECT_EQ(hilbert_from_lattice(L, {Basis::CaseA, a}, {Basis::CaseA, b}),
                hilbert_closed_form(a, b))
          << int(a) << "," << int(b);
}

TEST(Lattice, CaseAKnownSymbols) {
  const NormLattice L = lattice(LatticeScenario::CaseA);
  const ClassGroup A = ClassGroup::case_a();
  const auto h = [&](const char *a, const char *b) {
    return hilbert_from_lattice(L, parse_class(a, A), parse_class(b, A));
  };
  EXPECT_EQ(h("-1", "-1"), -1);
  EXPECT_EQ(h("2", "5"), -1);
  EXPECT_EQ(h("2", "-1"), 1);
  EXPECT_EQ(h("-1", "5"), 1);
  EXPECT_EQ(h("2", "2"), 1);
}

TEST(Lattice, Integrity) {
  const LatticeReport a = verify_lattice(lattice(LatticeScenario::CaseA));
  EXPECT_TRUE(a.all_subgroups && a.reciprocity_holds && a.all_index_2 && a.injective);
  EXPECT_TRUE(a.demushkin_consistent);
  EXPECT_TRUE(verify_lattice(lattice(LatticeScenario::CaseBK)).demushkin_consistent);
  const LatticeReport k = verify_lattice(lattice(LatticeScenario::CaseBk));
  EXPECT_FALSE(k.all_index_2);
  EXPECT_FALSE(k.demushkin_consistent);
}

TEST(Lattice, CaseBGroups) {
  const NormLattice K = lattice(LatticeScenario::CaseBK);
  const NormLattice k = lattice(LatticeScenario::CaseBk);
  const ClassGroup B = ClassGroup::case_b();
  const auto N = [&](const NormLattice &L, const char *a) {
    return L.norm_group(parse_class(a, B));
  };
  EXPECT_EQ(N(K, "-1"), parse_class_set({"1", "2", "c", "2c"}, B));
  EXPECT_EQ(N(K, "2"), parse_class_set({"1", "-1", "2", "-2"}, B));
  EXPECT_EQ(N(K, "-2"), parse_class_set({"1", "2", "-c", "-2c"}, B));
  EXPECT_EQ(N(K, "-2c"), parse_class_set({"1", "-2", "-c", "2c"}, B));
  EXPECT_EQ(N(k, "-2"), parse_class_set({"1", "2"}, B));
  EXPECT_EQ(N(k, "-c"), parse_class_set({"1", "c"}, B));
  EXPECT_EQ(N(k, "-2c"), parse_class_set({"1", "2c"}, B));
  EXPECT_EQ(N(k, "c"), N(K, "c"));
}

TEST(Lattice, SumRuleOnIntegers) {
  const NormLattice L = lattice(LatticeScenario::CaseA);
  for (std::int64_t p = -40; p <= 40; ++p)
    for (std::int64_t q = -40; q <= 40; ++q) {
      if (p == 0 || q == 0 || p + q == 0)
        continue;
      const auto cls = [](std::int64_t n) {
        return square_class_of(Dyadic::from_rational(Rational(n)));
      };
      EXPECT_TRUE(sum_rule(L, cls(p), cls(q)).classes.contains(cls(p + q))) << p << "+" << q;
    }
}

TEST(Lattice, SumRuleMayVanishOnlyForOpposites) {
  const NormLattice L = lattice(LatticeScenario::CaseA);
  const ClassGroup A = ClassGroup::case_a();
  const SumRuleResult r = sum_rule(L, parse_class("2", A), parse_class("-2", A));
  EXPECT_TRUE(r.may_vanish);
  EXPECT_EQ(r.classes.size(), 8);
  const SumRuleResult s = sum_rule(L, parse_class("1", A), parse_class("1", A));
  EXPECT_FALSE(s.may_vanish);
  // 1 + 1 in N(-1) = {1, 2, 5, 10}
  EXPECT_EQ(s.classes, parse_class_set({"1", "2", "5", "10"}, A));
}

TEST(Lattice, SearchOracleAgrees) {
  const HilbertComparison hc = compare_hilbert(lattice(LatticeScenario::CaseA));
  EXPECT_TRUE(hc.equal());
}

TEST(Lattice, ToggleIsInvolution) {
  const NormLattice L = lattice(LatticeScenario::CaseA);
  const SquareClass a{Basis::CaseA, 2}, b{Basis::CaseA, 5};
  const NormLattice t = L.toggled(a, b);
  EXPECT_NE(t, L);
  EXPECT_EQ(t.toggled(a, b), L);
}
