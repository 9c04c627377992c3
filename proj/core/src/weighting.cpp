#include "cqrelax/weighting.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <tuple>

#include "cqrelax/error.hpp"

namespace cqrelax {
namespace {

std::size_t column_of(const SPJQuery& spj, const OccAttr& attr) {
  for (std::size_t i = 0; i < spj.projection.size(); ++i)
    if (spj.projection[i].attr == attr) return i;
  throw Error("attribute " + attr.alias() + " is not projected");
}

const AttributeDecl* attribute_at(const std::vector<Schema>& schemas, const std::string& relation,
                                  std::size_t position) {
  for (const auto& s : schemas)
    if (s.relation_name == relation && position < s.arity()) return &s.attributes[position];
  return nullptr;
}

AnswerTable with_uniform(AnswerTable answers, double degree) {
  answers.degrees = std::vector<double>(answers.rows.size(), degree);
  return answers;
}

int operator_rank(Operator op) {
  switch (op) {
    case Operator::DC: return 0;
    case Operator::AIConst:
    case Operator::AIEq: return 1;
    case Operator::GR: return 2;
  }
  return 3;
}

}  // namespace

Aggregation parse_aggregation(std::string_view name) {
  if (name == "avg") return Aggregation::Avg;
  if (name == "max") return Aggregation::Max;
  throw ParseError("unknown aggregation '" + std::string(name) + "' (avg, max)", 0);
}

std::string aggregation_name(Aggregation a) { return a == Aggregation::Max ? "max" : "avg"; }

double aggregate(Aggregation agg, std::span<const double> values, double empty_value) {
  if (values.empty()) return empty_value;
  if (agg == Aggregation::Max) return *std::max_element(values.begin(), values.end());
  double sum = std::accumulate(values.begin(), values.end(), 0.0);
  double mean = sum / static_cast<double>(values.size());
  auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return std::clamp(mean, *lo, *hi);
}

DcMode parse_dc_mode(std::string_view name) {
  if (name == "syntactic") return DcMode::SyntacticArity;
  if (name == "conditions") return DcMode::ConditionsRatio;
  if (name == "semantic") return DcMode::Semantic;
  throw ParseError("unknown DC mode '" + std::string(name) + "' (syntactic, conditions, semantic)", 0);
}

std::string dc_mode_name(DcMode m) {
  switch (m) {
    case DcMode::SyntacticArity: return "syntactic";
    case DcMode::ConditionsRatio: return "conditions";
    case DcMode::Semantic: return "semantic";
  }
  return "?";
}

AnswerTable weight_ai_constant(AnswerTable answers, const SPJQuery& candidate, const AiConstRecord& step,
                               const SimilarityConfig& cfg) {
  const std::size_t col = column_of(candidate, step.target.attr);
  std::vector<double> degrees;
  degrees.reserve(answers.rows.size());
  for (const auto& row : answers.rows)
    degrees.push_back(cfg.sim(step.target.attr.attribute, step.target.constant, row[col]));
  answers.degrees = std::move(degrees);
  return answers;
}

double ai_equality_degree(const SimilarityConfig& cfg, std::string_view attribute, const Value& fresh,
                          std::span<const Value> remaining, Aggregation tuple_agg) {
  std::vector<double> sims;
  for (const auto& r : remaining) sims.push_back(cfg.sim_lenient(attribute, fresh, r));
  return aggregate(tuple_agg, sims, 1.0);
}

AnswerTable weight_ai_equality(AnswerTable answers, const SPJQuery& candidate, const AiEqRecord& step,
                               const SimilarityConfig& cfg, const Database& db, Aggregation tuple_agg) {
  // Widen the projection with hidden columns for the remaining members.
  SPJQuery widened = candidate;
  const std::size_t visible = candidate.projection.size();
  for (std::size_t k = 0; k < step.remaining.size(); ++k)
    widened.projection.push_back({step.remaining[k], "", "#hidden" + std::to_string(k)});
  AnswerTable wide = evaluate(widened, db);

  const std::size_t fresh_col = column_of(candidate, step.extracted);
  std::map<Row, double> best;
  for (const auto& wrow : wide.rows) {
    Row visible_row(wrow.begin(), wrow.begin() + static_cast<std::ptrdiff_t>(visible));
    std::vector<Value> others(wrow.begin() + static_cast<std::ptrdiff_t>(visible), wrow.end());
    double d = ai_equality_degree(cfg, step.extracted.attribute, wrow[fresh_col], others, tuple_agg);
    auto [it, inserted] = best.emplace(std::move(visible_row), d);
    if (!inserted) it->second = std::max(it->second, d);
  }
  std::vector<double> degrees;
  degrees.reserve(answers.rows.size());
  for (const auto& row : answers.rows) {
    auto it = best.find(row);
    degrees.push_back(it == best.end() ? 0.0 : it->second);
  }
  answers.degrees = std::move(degrees);
  return answers;
}

AnswerTable weight_dc(AnswerTable answers, const DcRecord& step, const SimilarityConfig& cfg,
                      const WeightingPolicy& policy) {
  switch (policy.dc_mode) {
    case DcMode::SyntacticArity: {
      double total = static_cast<double>(step.original_arity);
      double d = total == 0 ? 1.0 : 1.0 - static_cast<double>(step.dropped_arity) / total;
      return with_uniform(std::move(answers), std::clamp(d, 0.0, 1.0));
    }
    case DcMode::ConditionsRatio: {
      double d = 1.0;
      if (step.total_conditions > 0)
        d = 1.0 - static_cast<double>(step.dropped_selections.size() + step.dropped_memberships) /
                      static_cast<double>(step.total_conditions);
      return with_uniform(std::move(answers), std::clamp(d, 0.0, 1.0));
    }
    case DcMode::Semantic:
      break;
  }
  std::vector<double> degrees;
  degrees.reserve(answers.rows.size());
  for (const auto& row : answers.rows) {
    std::vector<double> per_condition;
    for (const auto& dropped : step.dropped_selections) {
      std::vector<double> sims;
      for (const auto& b : row) sims.push_back(cfg.sim_lenient(dropped.attr.attribute, dropped.constant, b));
      per_condition.push_back(aggregate(policy.tuple_agg, sims, 1.0));
    }
    degrees.push_back(aggregate(policy.tuple_agg, per_condition, 1.0));
  }
  answers.degrees = std::move(degrees);
  return answers;
}

double gr_degree(const GrRecord& step, const SimilarityConfig& cfg, const std::vector<Schema>& schemas,
                 Aggregation tuple_agg) {
  struct Located {
    const Value* constant;
    std::string attribute;
  };
  auto constants_of = [&](const Atom& atom) {
    std::vector<Located> out;
    for (std::size_t p = 0; p < atom.args.size(); ++p) {
      if (is_variable(atom.args[p])) continue;
      const AttributeDecl* decl = attribute_at(schemas, atom.relation, p);
      out.push_back({&constant_value(atom.args[p]), decl ? decl->name : std::string{}});
    }
    return out;
  };
  std::vector<Located> body;
  for (const auto& a : step.rule.body)
    for (auto& c : constants_of(a)) body.push_back(std::move(c));
  auto head = constants_of(step.rule.head);

  std::vector<double> sims;
  for (const auto& b : body)
    for (const auto& h : head) {
      const std::string& attr = cfg.bound(b.attribute) || !cfg.bound(h.attribute) ? b.attribute : h.attribute;
      sims.push_back(cfg.sim_lenient(attr, *b.constant, *h.constant));
    }
  return aggregate(tuple_agg, sims, 1.0);
}

AnswerTable weight_gr(AnswerTable answers, const GrRecord& step, const SimilarityConfig& cfg,
                      const std::vector<Schema>& schemas, Aggregation tuple_agg) {
  return with_uniform(std::move(answers), gr_degree(step, cfg, schemas, tuple_agg));
}

double score_table(const AnswerTable& answers, Aggregation table_agg) {
  if (answers.rows.empty()) return 0.0;
  if (!answers.degrees) return 1.0;
  return aggregate(table_agg, *answers.degrees, 0.0);
}

AnswerTable filter_threshold(AnswerTable answers, double min_sim) {
  if (!answers.degrees) return answers;
  AnswerTable out;
  out.columns = std::move(answers.columns);
  out.degrees.emplace();
  for (std::size_t i = 0; i < answers.rows.size(); ++i) {
    if ((*answers.degrees)[i] < min_sim) continue;
    out.rows.push_back(std::move(answers.rows[i]));
    out.degrees->push_back((*answers.degrees)[i]);
  }
  return out;
}

double combine_step_degrees(double previous, double current) { return std::clamp(previous * current, 0.0, 1.0); }

void weigh_candidate(Candidate& candidate, const SimilarityConfig& cfg, const WeightingPolicy& policy,
                     const Database& db) {
  if (!candidate.answers) candidate.answers = evaluate(candidate.query, db);
  AnswerTable table = std::move(*candidate.answers);
  table = std::visit(
      [&](const auto& rec) -> AnswerTable {
        using T = std::decay_t<decltype(rec)>;
        if constexpr (std::is_same_v<T, DcRecord>) {
          return weight_dc(std::move(table), rec, cfg, policy);
        } else if constexpr (std::is_same_v<T, AiConstRecord>) {
          return weight_ai_constant(std::move(table), candidate.query, rec, cfg);
        } else if constexpr (std::is_same_v<T, AiEqRecord>) {
          return weight_ai_equality(std::move(table), candidate.query, rec, cfg, db, policy.tuple_agg);
        } else {
          return weight_gr(std::move(table), rec, cfg, db.schemas(), policy.tuple_agg);
        }
      },
      candidate.step.detail);
  candidate.answers = std::move(table);
}

void weigh_filter_score(Candidate& candidate, const SimilarityConfig& cfg, const WeightingPolicy& policy,
                        const Database& db) {
  weigh_candidate(candidate, cfg, policy, db);
  candidate.answers = filter_threshold(std::move(*candidate.answers), policy.min_sim);
  candidate.answers->score = score_table(*candidate.answers, policy.table_agg);
}

std::vector<Candidate> rank_candidates(std::vector<Candidate> candidates) {
  auto key = [](const Candidate& c) {
    double score = c.answers && c.answers->score ? *c.answers->score : 0.0;
    std::size_t lost = 0;
    if (const auto* dc = std::get_if<DcRecord>(&c.step.detail)) lost = dc->lost_projection;
    return std::make_tuple(-score, c.depth, operator_rank(c.step.op()), lost, c.ordinal);
  };
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](const Candidate& a, const Candidate& b) { return key(a) < key(b); });
  return candidates;
}

}  // namespace cqrelax
