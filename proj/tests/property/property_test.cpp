#include <gtest/gtest.h>

#include "properties.hpp"

namespace cqrelax::props {
namespace {

constexpr std::size_t kCases = 500;

struct Case {
  const char* name;
  PropertyResult (*fn)(std::uint32_t, std::size_t);
};

void PrintTo(const Case& c, std::ostream* os) { *os << c.name; }

class Property : public ::testing::TestWithParam<Case> {};

TEST_P(Property, Holds) {
  for (std::uint32_t seed : {1u, 20240u}) {
    auto r = GetParam().fn(seed, kCases);
    EXPECT_EQ(r.cases, kCases);
    EXPECT_GE(r.checks, r.cases);
    EXPECT_TRUE(r.ok()) << r.name << " (seed " << seed << "): " << r.failures << " failures, first: "
                        << r.first_failure;
  }
}

INSTANTIATE_TEST_SUITE_P(
    All, Property,
    ::testing::Values(Case{"EvaluateMatchesNaive", evaluate_matches_naive},
                      Case{"SimilarityAxioms", similarity_axioms}, Case{"DcAiSoundness", dc_ai_soundness},
                      Case{"AlgebraLogicCommutation", algebra_logic_commutation},
                      Case{"RankingPermutationInvariance", ranking_permutation_invariance},
                      Case{"ArgmaxScalingInvariance", argmax_scaling_invariance},
                      Case{"QueryPrintParseRoundTrip", query_print_parse_round_trip},
                      Case{"RuleRangeRestriction", rule_range_restriction},
                      Case{"RelationCsvRoundTrip", relation_csv_round_trip},
                      Case{"AggregationAndThresholdLaws", aggregation_and_threshold_laws},
                      Case{"EnumerationCount", enumeration_count}),
    [](const ::testing::TestParamInfo<Case>& info) { return std::string(info.param.name); });

}  // namespace
}  // namespace cqrelax::props
