#include "cqrelax/search.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

namespace cqrelax {
namespace {

struct Node {
  SPJQuery query;
  double carry = 1.0;
  std::vector<std::string> lineage;
};

std::pair<int, int> canonical_ref(const SPJQuery& spj, const OccAttr& a) {
  return {spj.position_of(a.occurrence), a.position};
}

// Folds `dup` (structurally equal to `into`) into `into`, keeping the best
// degree per row.
void merge_duplicate(Candidate& into, const Candidate& dup) {
  if (!into.answers || !dup.answers || !into.answers->degrees || !dup.answers->degrees) return;
  const auto& ip = into.query.projection;
  const auto& dp = dup.query.projection;
  std::vector<std::size_t> perm;
  for (const auto& p : ip) {
    auto want = canonical_ref(into.query, p.attr);
    auto it = std::find_if(dp.begin(), dp.end(),
                           [&](const Projection& q) { return canonical_ref(dup.query, q.attr) == want; });
    if (it == dp.end()) return;
    perm.push_back(static_cast<std::size_t>(it - dp.begin()));
  }
  auto& rows = into.answers->rows;
  auto& degrees = *into.answers->degrees;
  for (std::size_t r = 0; r < dup.answers->rows.size(); ++r) {
    Row aligned;
    for (auto j : perm) aligned.push_back(dup.answers->rows[r][j]);
    auto it = std::lower_bound(rows.begin(), rows.end(), aligned);
    if (it == rows.end() || *it != aligned) continue;
    auto& d = degrees[static_cast<std::size_t>(it - rows.begin())];
    d = std::max(d, (*dup.answers->degrees)[r]);
  }
}

}  // namespace

RelaxReport relax(const SPJQuery& query, const Database& db, const RuleBase& rules, const SimilarityConfig& cfg,
                  const RelaxOptions& options) {
  RelaxReport report;
  report.original = query;
  report.original_answers = evaluate(query, db);

  std::vector<Node> level{Node{query, 1.0, {}}};
  std::set<std::string> seen{canonical_key(query)};
  std::vector<Candidate> all;
  std::size_t ordinal = 0;

  for (std::size_t depth = 1; depth <= options.max_steps && !level.empty(); ++depth) {
    const std::size_t level_start = all.size();
    std::vector<double> parent_carry;
    std::map<std::string, std::size_t> in_level;

    for (const auto& node : level) {
      for (auto& c : relax_one_step(node.query, db, rules, options.ops)) {
        weigh_candidate(c, cfg, options.policy, db);
        for (auto& d : *c.answers->degrees) d = combine_step_degrees(node.carry, d);
        std::string key = canonical_key(c.query);
        if (depth > 1) {
          if (seen.count(key)) continue;
          if (auto it = in_level.find(key); it != in_level.end()) {
            merge_duplicate(all[it->second], c);
            continue;
          }
        }
        c.depth = depth;
        c.lineage = node.lineage;
        c.ordinal = ordinal++;
        in_level.emplace(key, all.size());
        parent_carry.push_back(node.carry);
        all.push_back(std::move(c));
      }
    }

    std::vector<Node> next;
    for (std::size_t i = level_start; i < all.size(); ++i) {
      Candidate& c = all[i];
      c.answers = filter_threshold(std::move(*c.answers), options.policy.min_sim);
      c.answers->score = score_table(*c.answers, options.policy.table_agg);
      std::string key = canonical_key(c.query);
      if (depth < options.max_steps && seen.insert(key).second) {
        auto lineage = c.lineage;
        lineage.push_back(c.step.describe());
        double carry = c.answers->empty() ? parent_carry[i - level_start] : *c.answers->score;
        next.push_back(Node{c.query, carry, std::move(lineage)});
      } else {
        seen.insert(key);
      }
    }
    level = std::move(next);
  }

  report.total_candidates = all.size();
  report.ranked = rank_candidates(std::move(all));
  if (options.top_k && report.ranked.size() > *options.top_k) report.ranked.resize(*options.top_k);
  return report;
}

RelaxReport relax(const ConjunctiveQuery& query, const Database& db, const RuleBase& rules,
                  const SimilarityConfig& cfg, const RelaxOptions& options) {
  return relax(translate(query, db), db, rules, cfg, options);
}

}  // namespace cqrelax
