#include <gtest/gtest.h>

#include "cqrelax/format.hpp"
#include "cqrelax/search.hpp"
#include "fixtures.hpp"

namespace cqrelax {
namespace {

using testing::degree_of;
using testing::example_db;
using testing::example_rules;
using testing::example_similarity;
using testing::running_query;

constexpr double kTol = 1e-9;

class SearchTest : public ::testing::Test {
 protected:
  Database db = example_db();
  SimilarityConfig cfg = example_similarity();
  RuleBase rules = example_rules();

  RelaxReport run(RelaxOptions opts) { return relax(running_query(db), db, rules, cfg, opts); }

  static std::vector<std::string> steps(const RelaxReport& r) {
    std::vector<std::string> out;
    for (const auto& c : r.ranked) out.push_back(c.step.describe());
    return out;
  }
};

TEST_F(SearchTest, SingleStepReport) {
  auto r = run({});
  EXPECT_TRUE(r.original_answers.empty());
  EXPECT_EQ(r.total_candidates, 6u);
  EXPECT_EQ(steps(r), (std::vector<std::string>{
                          "AI eq split Name#2 from {Name#1,Name#2} -> v1", "AI const Disease#2=Cough -> v1",
                          "AI const Disease#1=Flu -> v1", "GR rule#1 theta{x:=x} replace {Ill#1}",
                          "DC drop Ill#1", "DC drop Ill#2"}));
}

TEST_F(SearchTest, MaxAggregationPrefersFlu) {
  RelaxOptions o;
  o.policy.table_agg = Aggregation::Max;
  auto s = steps(run(o));
  auto flu = std::find(s.begin(), s.end(), "AI const Disease#1=Flu -> v1");
  auto cough = std::find(s.begin(), s.end(), "AI const Disease#2=Cough -> v1");
  EXPECT_LT(flu, cough);
}

TEST_F(SearchTest, TopKIsPrefix) {
  auto full = steps(run({}));
  for (std::size_t k = 1; k <= 7; ++k) {
    RelaxOptions o;
    o.top_k = k;
    auto part = steps(run(o));
    ASSERT_EQ(part.size(), std::min(k, full.size()));
    EXPECT_TRUE(std::equal(part.begin(), part.end(), full.begin()));
  }
}

TEST_F(SearchTest, TwoStepsCombineAndMerge) {
  RelaxOptions o;
  o.max_steps = 2;
  o.policy.dc_mode = DcMode::SyntacticArity;
  auto r = run(o);
  const Candidate* merged = nullptr;
  for (const auto& c : r.ranked)
    if (c.depth == 2 && to_string(reconstruct_query(c.query)) == "Ill(x, v1)") {
      ASSERT_EQ(merged, nullptr) << "structural duplicates must be merged";
      merged = &c;
    }
  ASSERT_NE(merged, nullptr);
  // Four derivations reach Ill(x, v1); each row keeps its best product.
  EXPECT_NEAR(degree_of(*merged->answers, {"Mary", "Cough"}), 0.5, kTol);
  EXPECT_NEAR(degree_of(*merged->answers, {"Mary", "BrokenLeg"}), 0.4, kTol);
  EXPECT_NEAR(degree_of(*merged->answers, {"Mary", "Sinusitis"}), 0.45, kTol);
  EXPECT_NEAR(degree_of(*merged->answers, {"Pete", "Flu"}), 0.5, kTol);
  EXPECT_EQ(merged->lineage.size(), 1u);
}

TEST_F(SearchTest, LaterStepsSkipSeenQueries) {
  RelaxOptions o;
  o.max_steps = 3;
  auto r = run(o);
  std::set<std::string> keys;
  std::size_t depth_one = 0;
  for (const auto& c : r.ranked) {
    if (c.depth == 1) {
      ++depth_one;
      continue;
    }
    EXPECT_TRUE(keys.insert(canonical_key(c.query)).second);
  }
  EXPECT_EQ(depth_one, 6u);
  for (const auto& c : r.ranked)
    for (double d : *c.answers->degrees) {
      EXPECT_GE(d, 0.0);
      EXPECT_LE(d, 1.0);
    }
}

TEST_F(SearchTest, Deterministic) {
  RelaxOptions o;
  o.max_steps = 2;
  auto a = run(o), b = run(o);
  ASSERT_EQ(a.ranked.size(), b.ranked.size());
  for (std::size_t i = 0; i < a.ranked.size(); ++i) {
    EXPECT_EQ(a.ranked[i].step.describe(), b.ranked[i].step.describe());
    EXPECT_EQ(render_csv(*a.ranked[i].answers), render_csv(*b.ranked[i].answers));
  }
}

TEST(Format, TextAndCsv) {
  AnswerTable t;
  t.columns = {"x", "v1/Disease#1"};
  t.rows = {{Value("Mary"), Value("Cough")}, {Value("Pete"), Value("a,b")}};
  t.degrees = std::vector<double>{0.8, 0.125};
  EXPECT_EQ(render_text(t),
            "x    | v1/Disease#1 | #sim\n"
            "----------------------------\n"
            "Mary | Cough        | 0.8000\n"
            "Pete | a,b          | 0.1250\n");
  EXPECT_EQ(render_csv(t), "x,v1/Disease#1,#sim\nMary,Cough,0.8000\nPete,\"a,b\",0.1250\n");
  t.degrees.reset();
  EXPECT_EQ(render_csv(t), "x,v1/Disease#1\nMary,Cough\nPete,\"a,b\"\n");
  EXPECT_EQ(format_degree(0.99), "0.9900");
  EXPECT_EQ(parse_format("csv"), OutputFormat::Csv);
}

}  // namespace
}  // namespace cqrelax
