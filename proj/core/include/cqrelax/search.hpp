#pragma once

#include <optional>
#include <vector>

#include "cqrelax/datastore.hpp"
#include "cqrelax/query.hpp"
#include "cqrelax/relaxation.hpp"
#include "cqrelax/similarity.hpp"
#include "cqrelax/spj.hpp"
#include "cqrelax/weighting.hpp"

namespace cqrelax {

struct RelaxOptions {
  OperatorSet ops;
  WeightingPolicy policy;
  std::size_t max_steps = 1;
  std::optional<std::size_t> top_k;
};

struct RelaxReport {
  SPJQuery original;
  AnswerTable original_answers;
  std::vector<Candidate> ranked;  // truncated to top_k
  std::size_t total_candidates = 0;
};

/// Breadth-first relaxation up to `max_steps`. Every candidate is weighted,
/// threshold-filtered and scored; degrees of later steps are combined with
/// the score carried by their parent. From the second step on, queries that
/// are structurally equal to one already seen are dropped, and equal ones
/// found in the same step are merged keeping each row's best degree.
RelaxReport relax(const SPJQuery& query, const Database& db, const RuleBase& rules, const SimilarityConfig& cfg,
                  const RelaxOptions& options);

RelaxReport relax(const ConjunctiveQuery& query, const Database& db, const RuleBase& rules,
                  const SimilarityConfig& cfg, const RelaxOptions& options);

}  // namespace cqrelax
