#pragma once

// In-memory copies of the medical example so tests do not depend on the
// working directory.

#include <algorithm>
#include <string>
#include <vector>

#include "cqrelax/datastore.hpp"
#include "cqrelax/query.hpp"
#include "cqrelax/relaxation.hpp"
#include "cqrelax/similarity.hpp"
#include "cqrelax/spj.hpp"

namespace cqrelax::testing {

inline constexpr const char* kSchema =
    "relation Ill(Name: string, Disease: string)\n"
    "relation Treat(Name: string, Prescription: string)\n";

inline constexpr const char* kIllCsv = "Name,Disease\nMary,Cough\nMary,BrokenLeg\nMary,Sinusitis\nPete,Flu\n";
inline constexpr const char* kTreatCsv = "Name,Prescription\nMary,Inhaler\n";
inline constexpr const char* kRule = "Ill(x, Flu) -> Treat(x, Inhaler)";
inline constexpr const char* kRunning = "Ill(x, Flu) & Ill(x, Cough)";

inline Database example_db() {
  auto schemas = load_schema(kSchema);
  Database db;
  db.add(load_relation_csv(schemas[0], kIllCsv));
  db.add(load_relation_csv(schemas[1], kTreatCsv));
  return db;
}

inline RuleBase example_rules() { return {parse_rule(kRule)}; }

/// Pair tables with the degrees assumed in the worked example, plus the
/// Cough comparisons used for semantic DC.
inline SimilarityConfig example_similarity() {
  PairTable diseases;
  diseases.add("Flu", "Cough", 0.8);
  diseases.add("Flu", "BrokenLeg", 0.4);
  diseases.add("Flu", "Sinusitis", 0.9);
  diseases.add("Cough", "BrokenLeg", 0.4);
  diseases.add("Cough", "Sinusitis", 0.7);
  diseases.add("Flu", "Inhaler", 0.5);
  PairTable names;
  names.add("Mary", "Pete", 0.9);
  SimilarityConfig cfg;
  cfg.bind("Disease", diseases);
  cfg.bind("Name", names);
  return cfg;
}

inline SPJQuery running_query(const Database& db) { return translate(parse_query(kRunning), db); }

using TextRows = std::vector<std::vector<std::string>>;

/// Rows rendered as strings, sorted, for order-free comparison.
inline TextRows text_rows(const AnswerTable& t) {
  TextRows out;
  for (const auto& r : t.rows) {
    std::vector<std::string> line;
    for (const auto& v : r) line.push_back(v.str());
    out.push_back(std::move(line));
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline TextRows sorted(TextRows rows) {
  std::sort(rows.begin(), rows.end());
  return rows;
}

/// Degree of the row whose rendered cells equal `cells`, or -1.
inline double degree_of(const AnswerTable& t, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    std::vector<std::string> line;
    for (const auto& v : t.rows[i]) line.push_back(v.str());
    if (line == cells) return t.degrees ? (*t.degrees)[i] : -1.0;
  }
  return -1.0;
}

inline const Candidate* find_step(const std::vector<Candidate>& cs, const std::string& description) {
  for (const auto& c : cs)
    if (c.step.describe() == description) return &c;
  return nullptr;
}

}  // namespace cqrelax::testing
