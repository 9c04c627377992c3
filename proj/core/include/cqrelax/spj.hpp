#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cqrelax/datastore.hpp"
#include "cqrelax/query.hpp"
#include "cqrelax/value.hpp"

namespace cqrelax {

/// One attribute of one relation occurrence, rendered `<attr>#<occurrence>`.
/// Occurrence indices are stable identifiers: dropping an occurrence does not
/// renumber the others.
struct OccAttr {
  int occurrence = 0;    // >= 1
  int position = 0;      // column in the relation schema
  std::string attribute;

  std::string alias() const { return attribute + "#" + std::to_string(occurrence); }

  friend bool operator==(const OccAttr& a, const OccAttr& b) {
    return a.occurrence == b.occurrence && a.position == b.position;
  }
  friend std::strong_ordering operator<=>(const OccAttr& a, const OccAttr& b) {
    if (auto c = a.occurrence <=> b.occurrence; c != 0) return c;
    return a.position <=> b.position;
  }
};

struct Occurrence {
  int index = 0;
  std::string relation;
  std::vector<OccAttr> attrs;  // one per schema attribute, schema order
  Atom source_atom;
};

struct Projection {
  OccAttr attr;
  std::string variable;  // the free variable this column reports
  std::string column;    // output column name
};

struct Selection {
  OccAttr attr;
  Value constant;
};

/// pi_A sigma_C (rho(R_1) join_E ... join_E rho(R_n)).
///
/// `classes` partitions every attribute that carries a variable: one class
/// per variable, singletons included. `provenance` maps every attribute of
/// every occurrence back to the query term it came from.
struct SPJQuery {
  std::vector<Occurrence> occurrences;
  std::vector<Projection> projection;
  std::vector<Selection> selections;
  std::vector<std::vector<OccAttr>> classes;
  std::map<OccAttr, Term> provenance;

  const Occurrence* find_occurrence(int index) const;
  /// Position of `index` in `occurrences`, or -1.
  int position_of(int index) const;
  /// Index of the class holding `attr`, or -1.
  int class_of(const OccAttr& attr) const;
  /// Smallest `v<n>` not yet used as a variable name.
  std::string fresh_variable() const;
  /// Equivalence classes of size >= 2.
  std::vector<const std::vector<OccAttr>*> join_classes() const;
  std::size_t total_arity() const;
};

struct AnswerTable {
  std::vector<std::string> columns;
  std::vector<Row> rows;  // sorted, distinct
  std::optional<std::vector<double>> degrees;  // parallel to rows
  std::optional<double> score;

  bool empty() const noexcept { return rows.empty(); }
  std::size_t size() const noexcept { return rows.size(); }
};

/// Logic to algebra. Throws QueryError on unknown relations, arity or type
/// mismatches.
SPJQuery translate(const ConjunctiveQuery& q, const std::vector<Schema>& schemas);
SPJQuery translate(const ConjunctiveQuery& q, const Database& db);

/// Selection pushdown, then hash joins in occurrence order.
AnswerTable evaluate(const SPJQuery& spj, const Database& db);

/// Cartesian product, filter, project. Correctness oracle for `evaluate`.
AnswerTable evaluate_naive(const SPJQuery& spj, const Database& db);

/// Atoms rebuilt from provenance, one per occurrence in order.
std::vector<Atom> reconstruct_atoms(const SPJQuery& spj);

/// The reconstructed atoms plus the existential prefix: variables with no
/// projected attribute.
ConjunctiveQuery reconstruct_query(const SPJQuery& spj);

/// `PROJECT [..] SELECT [..] EQ [..] FROM ..` single-line rendering.
std::string render(const SPJQuery& spj);

/// Identical for queries equal up to occurrence renumbering, variable names
/// and column order.
std::string canonical_key(const SPJQuery& spj);
bool structurally_equal(const SPJQuery& a, const SPJQuery& b);

/// Throws Error describing the first broken structural invariant.
void check_invariants(const SPJQuery& spj);

}  // namespace cqrelax
