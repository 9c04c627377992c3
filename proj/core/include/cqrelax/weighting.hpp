#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cqrelax/relaxation.hpp"
#include "cqrelax/similarity.hpp"
#include "cqrelax/spj.hpp"

namespace cqrelax {

enum class Aggregation { Max, Avg };

Aggregation parse_aggregation(std::string_view name);
std::string aggregation_name(Aggregation a);

/// max or arithmetic mean; `empty_value` for an empty input.
double aggregate(Aggregation agg, std::span<const double> values, double empty_value);

/// How Dropping Condition answers are weighted.
enum class DcMode {
  SyntacticArity,   // 1 - ar(dropped) / total arity
  ConditionsRatio,  // 1 - dropped conditions / all conditions
  Semantic,         // similarity of dropped constants to the row's constants
};

DcMode parse_dc_mode(std::string_view name);
std::string dc_mode_name(DcMode m);

struct WeightingPolicy {
  DcMode dc_mode = DcMode::Semantic;
  Aggregation tuple_agg = Aggregation::Avg;  // within one row
  Aggregation table_agg = Aggregation::Avg;  // rows into a table score
  double min_sim = 0.0;
};

/// degree(row) = sim(attr, c, row[fresh column]).
AnswerTable weight_ai_constant(AnswerTable answers, const SPJQuery& candidate, const AiConstRecord& step,
                               const SimilarityConfig& cfg);

/// tuple_agg over sim(attribute, fresh, r) for every remaining class value r.
double ai_equality_degree(const SimilarityConfig& cfg, std::string_view attribute, const Value& fresh,
                          std::span<const Value> remaining, Aggregation tuple_agg);

/// Class members that are not projected are read from the joined rows; a
/// projected row reached through several joins keeps its highest degree.
AnswerTable weight_ai_equality(AnswerTable answers, const SPJQuery& candidate, const AiEqRecord& step,
                               const SimilarityConfig& cfg, const Database& db, Aggregation tuple_agg);

AnswerTable weight_dc(AnswerTable answers, const DcRecord& step, const SimilarityConfig& cfg,
                      const WeightingPolicy& policy);

/// Uniform GR degree: tuple_agg over sim(body constant, head constant) for
/// every such pair of the rule; 1 when there is none.
double gr_degree(const GrRecord& step, const SimilarityConfig& cfg, const std::vector<Schema>& schemas,
                 Aggregation tuple_agg);
AnswerTable weight_gr(AnswerTable answers, const GrRecord& step, const SimilarityConfig& cfg,
                      const std::vector<Schema>& schemas, Aggregation tuple_agg);

/// table_agg over row degrees; 0 for an empty table.
double score_table(const AnswerTable& answers, Aggregation table_agg);

/// Drops rows whose degree is below `min_sim`.
AnswerTable filter_threshold(AnswerTable answers, double min_sim);

/// Degree of an answer after two successive relaxation steps.
double combine_step_degrees(double previous, double current);

/// Dispatches on the candidate's operator and fills `answers->degrees`.
/// Neither filters nor scores.
void weigh_candidate(Candidate& candidate, const SimilarityConfig& cfg, const WeightingPolicy& policy,
                     const Database& db);

/// Weighs, filters by `policy.min_sim` and scores with `policy.table_agg`.
void weigh_filter_score(Candidate& candidate, const SimilarityConfig& cfg, const WeightingPolicy& policy,
                        const Database& db);

/// Best first. Ties: DC before AI before GR; among DC fewer lost output
/// columns first; then enumeration order. Input order never matters.
std::vector<Candidate> rank_candidates(std::vector<Candidate> candidates);

}  // namespace cqrelax
