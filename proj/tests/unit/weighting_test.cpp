#include <gtest/gtest.h>

#include "cqrelax/error.hpp"
#include "cqrelax/weighting.hpp"
#include "fixtures.hpp"

namespace cqrelax {
namespace {

using testing::degree_of;
using testing::example_db;
using testing::example_rules;
using testing::example_similarity;
using testing::find_step;
using testing::running_query;
using testing::text_rows;
using testing::TextRows;

constexpr double kTol = 1e-9;

class WeightTest : public ::testing::Test {
 protected:
  Database db = example_db();
  SimilarityConfig cfg = example_similarity();
  std::vector<Candidate> cs = relax_one_step(running_query(db), db, example_rules());

  Candidate weighed(const std::string& step, const WeightingPolicy& policy = {}) {
    Candidate c = *find_step(cs, step);
    weigh_filter_score(c, cfg, policy, db);
    return c;
  }
};

TEST(Aggregate, MaxAndAvg) {
  std::vector<double> v{0.8, 0.4, 0.9};
  EXPECT_NEAR(aggregate(Aggregation::Max, v, 0), 0.9, kTol);
  EXPECT_NEAR(aggregate(Aggregation::Avg, v, 0), 0.7, kTol);
  EXPECT_EQ(aggregate(Aggregation::Avg, std::vector<double>{0.8}, 0), 0.8);
  EXPECT_EQ(aggregate(Aggregation::Max, std::vector<double>{}, 0.25), 0.25);
  EXPECT_EQ(parse_aggregation("max"), Aggregation::Max);
  EXPECT_THROW(parse_aggregation("sum"), ParseError);
}

TEST_F(WeightTest, AntiInstantiatedFlu) {
  auto c = weighed("AI const Disease#1=Flu -> v1");
  EXPECT_NEAR(degree_of(*c.answers, {"Mary", "Cough"}), 0.8, kTol);
  EXPECT_NEAR(degree_of(*c.answers, {"Mary", "BrokenLeg"}), 0.4, kTol);
  EXPECT_NEAR(degree_of(*c.answers, {"Mary", "Sinusitis"}), 0.9, kTol);
  EXPECT_NEAR(*c.answers->score, 0.7, kTol);
}

TEST_F(WeightTest, AntiInstantiatedCough) {
  auto c = weighed("AI const Disease#2=Cough -> v1");
  EXPECT_NEAR(degree_of(*c.answers, {"Pete", "Flu"}), 0.8, kTol);
  EXPECT_NEAR(*c.answers->score, 0.8, kTol);
}

TEST_F(WeightTest, ReflexiveRowGetsOne) {
  auto q = translate(parse_query("Ill(x, Cough) & Ill(x, y)"), db);
  for (auto& c : relax_one_step(q, db, {}, OperatorSet::parse("ai"))) {
    if (c.step.op() != Operator::AIConst) continue;
    weigh_candidate(c, cfg, {}, db);
    EXPECT_EQ(degree_of(*c.answers, {"Mary", "Cough", "Cough"}), 1.0);
  }
}

TEST_F(WeightTest, AntiInstantiatedEquality) {
  auto c = weighed("AI eq split Name#2 from {Name#1,Name#2} -> v1");
  EXPECT_NEAR(degree_of(*c.answers, {"Pete", "Mary"}), 0.9, kTol);
}

TEST_F(WeightTest, EqualityDegreeOverSeveralMembers) {
  PairTable names;
  names.add("Pete", "Ann", 0.6);
  names.add("Pete", "Bob", 0.8);
  SimilarityConfig c;
  c.bind("Name", names);
  std::vector<Value> remaining{Value("Ann"), Value("Bob")};
  EXPECT_NEAR(ai_equality_degree(c, "Name", Value("Pete"), remaining, Aggregation::Avg), 0.7, kTol);
  EXPECT_NEAR(ai_equality_degree(c, "Name", Value("Pete"), remaining, Aggregation::Max), 0.8, kTol);
  std::vector<Value> same{Value("Pete")};
  EXPECT_EQ(ai_equality_degree(c, "Name", Value("Pete"), same, Aggregation::Avg), 1.0);
}

TEST_F(WeightTest, EqualityDegreeReadsUnprojectedMembers) {
  // The remaining Name#1 is existential, so its value comes from the
  // widened evaluation, not from the visible row.
  auto q = translate(parse_query("exists x: Ill(x, Flu) & Ill(x, Cough)"), db);
  auto ai = relax_one_step(q, db, {}, OperatorSet::parse("ai"));
  auto* c = find_step(ai, "AI eq split Name#2 from {Name#1,Name#2} -> v1");
  ASSERT_NE(c, nullptr);
  Candidate copy = *c;
  weigh_candidate(copy, cfg, {}, db);
  EXPECT_EQ(text_rows(*copy.answers), (TextRows{{"Mary"}}));
  EXPECT_NEAR(degree_of(*copy.answers, {"Mary"}), 0.9, kTol);
}

TEST_F(WeightTest, TableComparison) {
  WeightingPolicy avg, max;
  max.table_agg = Aggregation::Max;
  EXPECT_NEAR(*weighed("AI const Disease#1=Flu -> v1", max).answers->score, 0.9, kTol);
  EXPECT_NEAR(*weighed("AI const Disease#2=Cough -> v1", max).answers->score, 0.8, kTol);
  EXPECT_NEAR(*weighed("AI const Disease#1=Flu -> v1", avg).answers->score, 0.7, kTol);
  EXPECT_NEAR(*weighed("AI const Disease#2=Cough -> v1", avg).answers->score, 0.8, kTol);
}

TEST_F(WeightTest, Threshold) {
  WeightingPolicy p;
  p.min_sim = 0.5;
  auto c = weighed("AI const Disease#1=Flu -> v1", p);
  EXPECT_EQ(text_rows(*c.answers), (TextRows{{"Mary", "Cough"}, {"Mary", "Sinusitis"}}));
  EXPECT_NEAR(degree_of(*c.answers, {"Mary", "Sinusitis"}), 0.9, kTol);

  AnswerTable t = *weighed("AI const Disease#1=Flu -> v1").answers;
  EXPECT_EQ(filter_threshold(t, 0.0).rows, t.rows);
  EXPECT_EQ(text_rows(filter_threshold(t, 1.0)), TextRows{});
}

TEST_F(WeightTest, DropConditionSyntactic) {
  WeightingPolicy p;
  p.dc_mode = DcMode::SyntacticArity;
  for (const char* step : {"DC drop Ill#1", "DC drop Ill#2"}) {
    auto c = weighed(step, p);
    ASSERT_EQ(c.answers->size(), 1u);
    EXPECT_NEAR((*c.answers->degrees)[0], 0.5, kTol);
  }
}

TEST_F(WeightTest, DropConditionConditionsRatio) {
  auto q = translate(parse_query("Ill(x, Flu) & Treat(x, z)"), db);
  auto dcs = relax_one_step(q, db, {}, OperatorSet::parse("dc"));
  Candidate c = *find_step(dcs, "DC drop Treat#2");
  WeightingPolicy p;
  p.dc_mode = DcMode::ConditionsRatio;
  weigh_filter_score(c, cfg, p, db);
  ASSERT_EQ(c.answers->size(), 1u);
  EXPECT_NEAR((*c.answers->degrees)[0], 1.0 - 1.0 / 3.0, kTol);
}

TEST_F(WeightTest, DropConditionSemantic) {
  auto q = translate(parse_query("exists x: Ill(x, d) & Ill(x, Cough)"), db);
  auto dcs = relax_one_step(q, db, {}, OperatorSet::parse("dc"));
  Candidate c = *find_step(dcs, "DC drop Ill#2");
  weigh_filter_score(c, cfg, {}, db);
  EXPECT_NEAR(degree_of(*c.answers, {"Cough"}), 1.0, kTol);
  EXPECT_NEAR(degree_of(*c.answers, {"Flu"}), 0.8, kTol);
  EXPECT_NEAR(degree_of(*c.answers, {"BrokenLeg"}), 0.4, kTol);
  EXPECT_NEAR(degree_of(*c.answers, {"Sinusitis"}), 0.7, kTol);
}

TEST_F(WeightTest, DropConditionSemanticWithoutSelections) {
  auto q = translate(parse_query("Ill(x, d) & Treat(x, p)"), db);
  auto dcs = relax_one_step(q, db, {}, OperatorSet::parse("dc"));
  for (auto c : dcs) {
    weigh_candidate(c, cfg, {}, db);
    for (double d : *c.answers->degrees) EXPECT_EQ(d, 1.0);
  }
}

TEST_F(WeightTest, GoalReplacement) {
  auto c = weighed("GR rule#1 theta{x:=x} replace {Ill#1}");
  EXPECT_EQ(text_rows(*c.answers), (TextRows{{"Mary"}}));
  for (double d : *c.answers->degrees) EXPECT_NEAR(d, 0.5, kTol);
}

TEST_F(WeightTest, GoalReplacementDegreeAggregatesPairs) {
  auto schemas = load_schema(
      "relation Ill(Name: string, Disease: string)\n"
      "relation Rx(Name: string, First: string, Second: string)\n");
  PairTable d;
  d.add("Flu", "Inhaler", 0.5);
  d.add("Flu", "Syrup", 0.3);
  SimilarityConfig c;
  c.bind("Disease", d);
  GrRecord rec;
  rec.rule = parse_rule("Ill(x, Flu) -> Rx(x, Inhaler, Syrup)");
  EXPECT_NEAR(gr_degree(rec, c, schemas, Aggregation::Avg), 0.4, kTol);
  EXPECT_NEAR(gr_degree(rec, c, schemas, Aggregation::Max), 0.5, kTol);
  rec.rule = parse_rule("Ill(x, y) -> Rx(x, y, y)");
  EXPECT_EQ(gr_degree(rec, c, schemas, Aggregation::Avg), 1.0);
}

TEST(Score, EmptyAndUnweighted) {
  AnswerTable empty;
  empty.degrees.emplace();
  EXPECT_EQ(score_table(empty, Aggregation::Max), 0.0);
  AnswerTable plain;
  plain.rows.push_back({Value("a")});
  EXPECT_EQ(score_table(plain, Aggregation::Avg), 1.0);
}

TEST(Combine, Product) {
  EXPECT_NEAR(combine_step_degrees(0.8, 0.5), 0.4, kTol);
  EXPECT_EQ(combine_step_degrees(1.0, 0.37), 0.37);
  EXPECT_EQ(combine_step_degrees(0.0, 0.9), 0.0);
}

TEST_F(WeightTest, RankingFollowsAggregation) {
  auto order = [&](Aggregation agg) {
    WeightingPolicy p;
    p.table_agg = agg;
    std::vector<Candidate> all = cs;
    for (auto& c : all) weigh_filter_score(c, cfg, p, db);
    std::vector<std::string> out;
    for (const auto& c : rank_candidates(all)) out.push_back(c.step.describe());
    return out;
  };
  auto pos = [](const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) - v.begin();
  };
  auto avg = order(Aggregation::Avg);
  auto max = order(Aggregation::Max);
  EXPECT_LT(pos(avg, "AI const Disease#2=Cough -> v1"), pos(avg, "AI const Disease#1=Flu -> v1"));
  EXPECT_LT(pos(max, "AI const Disease#1=Flu -> v1"), pos(max, "AI const Disease#2=Cough -> v1"));
}

TEST_F(WeightTest, RankingTieBreaks) {
  WeightingPolicy p;
  p.dc_mode = DcMode::SyntacticArity;
  std::vector<Candidate> all = cs;
  for (auto& c : all) weigh_filter_score(c, cfg, p, db);
  // Both DC candidates score 0.5, as does GR; DC comes first, then enumeration order.
  std::vector<std::string> tail;
  for (const auto& c : rank_candidates(all))
    if (std::abs(*c.answers->score - 0.5) < kTol) tail.push_back(c.step.describe());
  EXPECT_EQ(tail, (std::vector<std::string>{"DC drop Ill#1", "DC drop Ill#2", "GR rule#1 theta{x:=x} replace {Ill#1}"}));
}

TEST_F(WeightTest, ProjectionLossBreaksDcTies) {
  auto q = translate(parse_query("Ill(x, y) & Ill(x, Cough)"), db);
  auto dcs = relax_one_step(q, db, {}, OperatorSet::parse("dc"));
  WeightingPolicy p;
  p.dc_mode = DcMode::SyntacticArity;
  for (auto& c : dcs) weigh_filter_score(c, cfg, p, db);
  auto ranked = rank_candidates(dcs);
  EXPECT_EQ(ranked[0].step.describe(), "DC drop Ill#2");
}

}  // namespace
}  // namespace cqrelax
