#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "cqrelax/datastore.hpp"
#include "cqrelax/query.hpp"
#include "cqrelax/spj.hpp"

namespace cqrelax {

enum class Operator { DC, AIConst, AIEq, GR };

/// Dropping Condition: one occurrence removed.
struct DcRecord {
  int occurrence = 0;
  std::string relation;
  std::size_t dropped_arity = 0;
  std::size_t original_arity = 0;          // sum over the query before the drop
  std::vector<Selection> dropped_selections;
  std::size_t dropped_memberships = 0;     // memberships in classes of size >= 2
  std::size_t total_conditions = 0;        // |C| + memberships in classes of size >= 2
  std::size_t lost_projection = 0;         // output columns that vanished
};

/// Anti-Instantiation of a constant: `target` left C, its attribute is now
/// projected as `fresh_variable`.
struct AiConstRecord {
  Selection target;
  std::string fresh_variable;
};

/// Anti-Instantiation of a repeated variable: `extracted` left its class.
struct AiEqRecord {
  OccAttr extracted;
  std::vector<OccAttr> original_class;
  std::vector<OccAttr> remaining;
  std::string fresh_variable;
};

/// Binds rule variables to query terms; applied to the rule body it
/// reproduces the matched query atoms.
struct MatchSubstitution {
  std::vector<std::pair<std::string, Term>> bindings;  // body first-occurrence order

  const Term* find(std::string_view var) const;
  Term apply(const Term& t) const;
  Atom apply(const Atom& a) const;
  friend bool operator==(const MatchSubstitution&, const MatchSubstitution&) = default;
};

/// Goal Replacement: `replaced` occurrences gave way to one head occurrence.
struct GrRecord {
  std::size_t rule_index = 0;  // 0-based position in the rule base
  Rule rule;
  MatchSubstitution theta;
  std::vector<int> replaced;  // ascending
  std::vector<std::string> replaced_relations;
  int head_occurrence = 0;
};

struct RelaxationStep {
  std::variant<DcRecord, AiConstRecord, AiEqRecord, GrRecord> detail;

  Operator op() const { return static_cast<Operator>(detail.index()); }
  /// e.g. `DC drop Ill#2`, `AI const Disease#1=Flu -> v1`.
  std::string describe() const;
};

struct Candidate {
  SPJQuery query;
  RelaxationStep step;
  std::optional<AnswerTable> answers;
  std::size_t ordinal = 0;  // enumeration order, used for tie-breaks
  std::size_t depth = 1;    // relaxation steps from the user query
  std::vector<std::string> lineage;  // descriptions of the earlier steps
};

/// Which operators to try. Parsed from `dc,ai,gr`.
struct OperatorSet {
  bool dc = true;
  bool ai = true;
  bool gr = true;

  static OperatorSet parse(std::string_view text);
  std::string str() const;
};

std::vector<Candidate> enumerate_dc(const SPJQuery& spj);
std::vector<Candidate> enumerate_ai(const SPJQuery& spj);
/// Throws QueryError when a matching rule's head relation is not in `schemas`.
std::vector<Candidate> enumerate_gr(const SPJQuery& spj, const RuleBase& rules, const std::vector<Schema>& schemas);

/// Every match of `rule`'s body onto distinct atoms of `atoms`: the matched
/// atom indices in body order plus the substitution.
std::vector<std::pair<std::vector<std::size_t>, MatchSubstitution>> match_rule_body(const Rule& rule,
                                                                                    const std::vector<Atom>& atoms);

/// DC, then AI (constants, then equalities), then GR; every candidate evaluated.
std::vector<Candidate> relax_one_step(const SPJQuery& spj, const Database& db, const RuleBase& rules,
                                      OperatorSet ops = {});

}  // namespace cqrelax
