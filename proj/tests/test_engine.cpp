#include <gtest/gtest.h>

#include "normcomb/demushkin.hpp"
#include "normcomb/derivation.hpp"
#include "normcomb/error.hpp"
#include "normcomb/replay.hpp"
#include "normcomb/trace.hpp"

using namespace normcomb;

namespace {

KnowledgeBase lemma_kb() {
  KnowledgeBase kb{Scenario(ScenarioId::CaseA)};
  const ClassGroup A = ClassGroup::case_a();
  kb.add("x", parse_class_set({"2"}, A), "hypothesis");
  kb.add("1 + x", parse_class_set({"1"}, A), "hypothesis");
  for (const char *e : {"1 - x", "1 + 2*x", "1 - 2*x", "1 + 4*x", "1 + 1/2*x", "2 + x"})
    kb.add(e);
  return kb;
}

const CaseReport &find_case(const std::vector<CaseReport> &rs, const std::string &label) {
  for (const auto &r : rs)
    if (r.label == label)
      return r;
  throw std::runtime_error("missing case " + label);
}

} // namespace

TEST(Engine, ProvesAndTraceChecks) {
  const KnowledgeBase kb = lemma_kb();
  const ClassGroup A = ClassGroup::case_a();
  // 2 + x = 1 + (1 + x), a sum of two squares classes: N(-1)
  const int t = kb.find(parse_expr("2 + x"));
  ASSERT_GE(t, 0);
  const ProofResult r = prove(kb, Goal::single(t, parse_class_set({"1", "2", "5", "10"}, A)));
  EXPECT_EQ(r.status, Outcome::Proved);
  const TraceCheck c = check_trace(to_json(r.trace));
  EXPECT_TRUE(c.ok) << c.message;
  EXPECT_GT(c.steps_checked, 0u);
}

TEST(Engine, TamperedTraceRejected) {
  const KnowledgeBase kb = lemma_kb();
  const ClassGroup A = ClassGroup::case_a();
  const int t = kb.find(parse_expr("2 + x"));
  const ProofResult r = prove(kb, Goal::single(t, parse_class_set({"1", "2", "5", "10"}, A)));
  nlohmann::json j = to_json(r.trace);
  ASSERT_TRUE(check_trace(j).ok);

  // Weaken a hypothesis; the recorded proof no longer goes through.
  nlohmann::json facts = j;
  facts["facts"][1]["set"] = {"1", "-1"};
  EXPECT_FALSE(check_trace(facts).ok);

  // Corrupt the first recorded step result.
  nlohmann::json steps = j;
  ASSERT_FALSE(steps["steps"].empty());
  auto &s0 = steps["steps"][0];
  const char *key = s0.contains("result") ? "result" : "after";
  s0[key] = nlohmann::json::array({"-10"});
  EXPECT_FALSE(check_trace(steps).ok);
}

TEST(Engine, ContradictoryHypothesesAreReported) {
  KnowledgeBase kb{Scenario(ScenarioId::CaseA)};
  const ClassGroup A = ClassGroup::case_a();
  // 1 + x is a sum of two squares, so it lies in N(-1), which omits -1.
  kb.add("x", parse_class_set({"1"}, A), "hypothesis");
  kb.add("1 + x", parse_class_set({"-1"}, A), "hypothesis");
  const ProofResult r = refine(kb);
  EXPECT_EQ(r.status, Outcome::Contradiction);
}

TEST(Engine, ParseExprRoundTrip) {
  EXPECT_EQ(parse_expr("1 - x*y").str(), "1 - x*y");
  EXPECT_EQ(parse_expr("1 + 1/5*x").str(), "1 + 1/5*x");
  EXPECT_THROW(parse_expr("1 + x*x"), Error);
}

TEST(Replay, UnknownTheorem) {
  try {
    replay("lemma-9.9");
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnknownTheorem);
  }
}

TEST(Replay, UnitLemmaCasesAllProved) {
  const auto rs = replay("lemma-4.4");
  EXPECT_EQ(rs.size(), 8u);
  for (const auto &r : rs) {
    EXPECT_EQ(r.status, "proved") << r.label;
    EXPECT_EQ(r.trace_failures, 0u);
  }
  const CaseReport &c = find_case(rs, "x~2, 1+x~1");
  ASSERT_EQ(c.pinned.size(), 1u);
  EXPECT_TRUE(c.pinned[0].ok);
}

TEST(Replay, TwoVariableCoverage) {
  const CoverageResult cov = prop46_coverage();
  EXPECT_TRUE(cov.ok());
  EXPECT_GT(cov.combinations, 0u);
}

// Values realized by rational points and confirmed by exhaustive search in Q2.
TEST(Tables, TableOneRealizedCells) {
  const TableResult t = generate_table(1);
  ASSERT_EQ(t.rows.size(), 8u);
  const auto cell = [&](std::size_t row, std::size_t col) {
    return t.rows[row].derived.at("case-a")[col].str();
  };
  const ClassGroup A = ClassGroup::case_a();
  const auto one = [&](const char *c) { return ClassSet::single(parse_class(c, A)).str(); };
  // columns: 1-x, 1+5x, 1-5x, 1+x/5, 1-x/5
  EXPECT_EQ(cell(1, 3), one("-5")); // x = 2: 7/5
  EXPECT_EQ(cell(2, 4), one("1"));  // x = -8: 13/5
  EXPECT_EQ(cell(3, 3), one("-1")); // x = -2: 3/5
  EXPECT_EQ(cell(5, 4), one("-1")); // x = 10: -1
  EXPECT_FALSE(t.ok);
}

TEST(Tables, TableTwoConstants) {
  const TableResult t = generate_table(2);
  EXPECT_TRUE(t.ok);
}

TEST(Tables, TableThreeBranchesAgree) {
  const TableResult t = generate_table(3);
  EXPECT_TRUE(t.identical_across_branches);
  EXPECT_EQ(t.rows.size(), 8u);
}

TEST(Demushkin, Abelianization) {
  Abelianization a = abelianization({2, 1, 1});
  EXPECT_EQ(a.torsion, 2);
  EXPECT_EQ(a.free_rank, 2);
  a = abelianization({2, 2, 2});
  EXPECT_EQ(a.torsion, 4);
  EXPECT_EQ(a.free_rank, 3);
  a = abelianization({3, 2, 1});
  EXPECT_EQ(a.torsion, 3);
  EXPECT_EQ(a.free_rank, 3);
  a = abelianization({2, 2, std::nullopt});
  EXPECT_EQ(a.free_rank, 4);
  EXPECT_EQ(square_class_rank(1, 2), 3);
  EXPECT_THROW(abelianization({4, 1, 1}), Error);
  EXPECT_THROW(abelianization({2, 0, 1}), Error);
}
