#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cqrelax/value.hpp"

namespace cqrelax {

struct Variable {
  std::string name;
  friend auto operator<=>(const Variable&, const Variable&) = default;
};

/// Either a variable or a constant.
using Term = std::variant<Variable, Value>;

inline bool is_variable(const Term& t) { return std::holds_alternative<Variable>(t); }
inline const std::string& variable_name(const Term& t) { return std::get<Variable>(t).name; }
inline const Value& constant_value(const Term& t) { return std::get<Value>(t); }

struct Atom {
  std::string relation;
  std::vector<Term> args;

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Positive conjunction of atoms with an optional existential prefix.
/// Variables not listed in `existential` are free.
struct ConjunctiveQuery {
  std::vector<Atom> atoms;
  std::vector<std::string> existential;

  friend bool operator==(const ConjunctiveQuery&, const ConjunctiveQuery&) = default;
};

/// Single-head rule; every head variable occurs in the body.
struct Rule {
  std::vector<Atom> body;
  Atom head;

  friend bool operator==(const Rule&, const Rule&) = default;
};

using RuleBase = std::vector<Rule>;

/// Query text grammar:
///   query := [ "exists" var { "," var } ":" ] atom { "&" atom }
///   atom  := RelName "(" term { "," term } ")"
///   term  := var | ConstName | "quoted" | number
/// Lowercase-initial identifiers are variables, everything else is constant.
ConjunctiveQuery parse_query(std::string_view text);

/// `atom { "&" atom } "->" atom`, range-restriction enforced.
Rule parse_rule(std::string_view text);

/// One rule per line, `#` starts a comment.
RuleBase parse_rules(std::string_view text);

/// Variables of the query in order of first occurrence, minus existential ones.
std::vector<std::string> free_variables(const ConjunctiveQuery& q);

/// All variables in order of first occurrence.
std::vector<std::string> variables_of(const std::vector<Atom>& atoms);

std::string to_string(const Term& t);
std::string to_string(const Atom& a);
std::string to_string(const ConjunctiveQuery& q);
std::string to_string(const Rule& r);

/// How a constant must be spelled so `parse_query` reads it back.
std::string constant_literal(const Value& v);

/// Throws QueryError unless every head variable occurs in the body.
void check_range_restricted(const Rule& rule);

}  // namespace cqrelax
