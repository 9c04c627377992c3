#include "cqrelax/relaxation.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "cqrelax/error.hpp"

namespace cqrelax {
namespace {

std::string alias_list(const std::vector<OccAttr>& attrs) {
  std::string out = "{";
  for (std::size_t i = 0; i < attrs.size(); ++i) {
    if (i) out += ",";
    out += attrs[i].alias();
  }
  return out + "}";
}

std::size_t condition_count(const SPJQuery& spj) {
  std::size_t n = spj.selections.size();
  for (const auto* cls : spj.join_classes()) n += cls->size();
  return n;
}

// Removes an occurrence together with its conditions and provenance.
void remove_occurrence(SPJQuery& spj, int index) {
  std::erase_if(spj.occurrences, [&](const Occurrence& o) { return o.index == index; });
  std::erase_if(spj.selections, [&](const Selection& s) { return s.attr.occurrence == index; });
  for (auto& cls : spj.classes) std::erase_if(cls, [&](const OccAttr& a) { return a.occurrence == index; });
  std::erase_if(spj.classes, [](const auto& cls) { return cls.empty(); });
  for (auto it = spj.provenance.begin(); it != spj.provenance.end();)
    it = it->first.occurrence == index ? spj.provenance.erase(it) : std::next(it);
}

// Points every projected variable at the first attribute still carrying it
// and drops the ones that vanished. Returns the number dropped.
std::size_t normalize_projection(SPJQuery& spj) {
  std::size_t lost = 0;
  std::vector<Projection> kept;
  for (auto& p : spj.projection) {
    auto cls = std::find_if(spj.classes.begin(), spj.classes.end(), [&](const auto& c) {
      const Term& t = spj.provenance.at(c.front());
      return is_variable(t) && variable_name(t) == p.variable;
    });
    if (cls == spj.classes.end()) {
      ++lost;
      continue;
    }
    p.attr = cls->front();
    kept.push_back(std::move(p));
  }
  spj.projection = std::move(kept);
  return lost;
}

Candidate apply_dc(const SPJQuery& spj, const Occurrence& occ) {
  DcRecord rec;
  rec.occurrence = occ.index;
  rec.relation = occ.relation;
  rec.dropped_arity = occ.attrs.size();
  rec.original_arity = spj.total_arity();
  rec.total_conditions = condition_count(spj);
  for (const auto& s : spj.selections)
    if (s.attr.occurrence == occ.index) rec.dropped_selections.push_back(s);
  for (const auto* cls : spj.join_classes())
    rec.dropped_memberships += static_cast<std::size_t>(
        std::count_if(cls->begin(), cls->end(), [&](const OccAttr& a) { return a.occurrence == occ.index; }));

  SPJQuery out = spj;
  remove_occurrence(out, occ.index);
  rec.lost_projection = normalize_projection(out);
  return Candidate{std::move(out), RelaxationStep{std::move(rec)}, std::nullopt, 0, 1, {}};
}

Candidate apply_ai_const(const SPJQuery& spj, std::size_t selection) {
  SPJQuery out = spj;
  Selection target = out.selections[selection];
  out.selections.erase(out.selections.begin() + static_cast<std::ptrdiff_t>(selection));
  std::string v = spj.fresh_variable();
  out.provenance[target.attr] = Variable{v};
  out.classes.push_back({target.attr});
  out.projection.push_back({target.attr, v, v + "/" + target.attr.alias()});
  return Candidate{std::move(out), RelaxationStep{AiConstRecord{std::move(target), v}}, std::nullopt, 0, 1, {}};
}

Candidate apply_ai_eq(const SPJQuery& spj, std::size_t cls_index, const OccAttr& member) {
  SPJQuery out = spj;
  AiEqRecord rec;
  rec.extracted = member;
  rec.original_class = spj.classes[cls_index];
  std::erase(out.classes[cls_index], member);
  rec.remaining = out.classes[cls_index];
  rec.fresh_variable = spj.fresh_variable();
  out.provenance[member] = Variable{rec.fresh_variable};
  out.classes.push_back({member});
  normalize_projection(out);
  out.projection.push_back({member, rec.fresh_variable, rec.fresh_variable + "/" + member.alias()});
  return Candidate{std::move(out), RelaxationStep{std::move(rec)}, std::nullopt, 0, 1, {}};
}

bool unify(const Atom& pattern, const Atom& target, MatchSubstitution& theta) {
  if (pattern.relation != target.relation || pattern.args.size() != target.args.size()) return false;
  for (std::size_t i = 0; i < pattern.args.size(); ++i) {
    const Term& p = pattern.args[i];
    const Term& t = target.args[i];
    if (!is_variable(p)) {
      if (is_variable(t) || !(constant_value(p) == constant_value(t))) return false;
      continue;
    }
    if (const Term* bound = theta.find(variable_name(p))) {
      if (!(*bound == t)) return false;
    } else {
      theta.bindings.emplace_back(variable_name(p), t);
    }
  }
  return true;
}

void match_from(const Rule& rule, const std::vector<Atom>& atoms, std::size_t j, std::vector<std::size_t>& chosen,
                const MatchSubstitution& theta,
                std::vector<std::pair<std::vector<std::size_t>, MatchSubstitution>>& out) {
  if (j == rule.body.size()) {
    auto key = chosen;
    std::sort(key.begin(), key.end());
    bool seen = std::any_of(out.begin(), out.end(), [&](const auto& m) {
      auto other = m.first;
      std::sort(other.begin(), other.end());
      return other == key && m.second == theta;
    });
    if (!seen) out.emplace_back(chosen, theta);
    return;
  }
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    if (std::find(chosen.begin(), chosen.end(), k) != chosen.end()) continue;
    MatchSubstitution next = theta;
    if (!unify(rule.body[j], atoms[k], next)) continue;
    chosen.push_back(k);
    match_from(rule, atoms, j + 1, chosen, next, out);
    chosen.pop_back();
  }
}

Candidate apply_gr(const SPJQuery& spj, std::size_t rule_index, const Rule& rule,
                   const std::vector<std::size_t>& matched, const MatchSubstitution& theta, const Schema& head_schema) {
  GrRecord rec;
  rec.rule_index = rule_index;
  rec.rule = rule;
  rec.theta = theta;
  auto sorted = matched;
  std::sort(sorted.begin(), sorted.end());
  for (auto pos : sorted) {
    rec.replaced.push_back(spj.occurrences[pos].index);
    rec.replaced_relations.push_back(spj.occurrences[pos].relation);
  }
  rec.head_occurrence = rec.replaced.front();

  SPJQuery out = spj;
  for (int idx : rec.replaced) remove_occurrence(out, idx);

  Occurrence head;
  head.index = rec.head_occurrence;
  head.relation = rule.head.relation;
  head.source_atom = theta.apply(rule.head);
  for (std::size_t p = 0; p < head.source_atom.args.size(); ++p) {
    const AttributeDecl& decl = head_schema.attributes[p];
    OccAttr a{head.index, static_cast<int>(p), decl.name};
    head.attrs.push_back(a);
    Term term = head.source_atom.args[p];
    if (is_variable(term)) {
      auto cls = std::find_if(out.classes.begin(), out.classes.end(),
                              [&](const auto& c) { return out.provenance.at(c.front()) == term; });
      if (cls == out.classes.end()) {
        out.classes.push_back({a});
      } else {
        cls->insert(std::lower_bound(cls->begin(), cls->end(), a), a);
      }
    } else {
      Value c = constant_value(term);
      if (decl.kind == ValueKind::Numeric && !c.is_numeric())
        throw QueryError("rule " + to_string(rule) + ": symbolic constant for numeric attribute " + decl.name);
      if (decl.kind == ValueKind::Symbolic && c.is_numeric()) c = Value(c.str());
      term = c;
      out.selections.push_back({a, c});
    }
    head.source_atom.args[p] = term;
    out.provenance[a] = term;
  }
  auto at = std::find_if(out.occurrences.begin(), out.occurrences.end(),
                         [&](const Occurrence& o) { return o.index > head.index; });
  out.occurrences.insert(at, std::move(head));
  std::stable_sort(out.selections.begin(), out.selections.end(),
                   [](const Selection& a, const Selection& b) { return a.attr < b.attr; });
  normalize_projection(out);
  return Candidate{std::move(out), RelaxationStep{std::move(rec)}, std::nullopt, 0, 1, {}};
}

}  // namespace

const Term* MatchSubstitution::find(std::string_view var) const {
  for (const auto& [name, term] : bindings)
    if (name == var) return &term;
  return nullptr;
}

Term MatchSubstitution::apply(const Term& t) const {
  if (!is_variable(t)) return t;
  const Term* bound = find(variable_name(t));
  return bound ? *bound : t;
}

Atom MatchSubstitution::apply(const Atom& a) const {
  Atom out{a.relation, {}};
  for (const auto& t : a.args) out.args.push_back(apply(t));
  return out;
}

std::string RelaxationStep::describe() const {
  return std::visit(
      [](const auto& rec) -> std::string {
        using T = std::decay_t<decltype(rec)>;
        if constexpr (std::is_same_v<T, DcRecord>) {
          return "DC drop " + rec.relation + "#" + std::to_string(rec.occurrence);
        } else if constexpr (std::is_same_v<T, AiConstRecord>) {
          return "AI const " + rec.target.attr.alias() + "=" + constant_literal(rec.target.constant) + " -> " +
                 rec.fresh_variable;
        } else if constexpr (std::is_same_v<T, AiEqRecord>) {
          return "AI eq split " + rec.extracted.alias() + " from " + alias_list(rec.original_class) + " -> " +
                 rec.fresh_variable;
        } else {
          std::string out = "GR rule#" + std::to_string(rec.rule_index + 1) + " theta{";
          for (std::size_t i = 0; i < rec.theta.bindings.size(); ++i) {
            if (i) out += ",";
            out += rec.theta.bindings[i].first + ":=" + to_string(rec.theta.bindings[i].second);
          }
          out += "} replace {";
          for (std::size_t i = 0; i < rec.replaced.size(); ++i) {
            if (i) out += ",";
            out += rec.replaced_relations[i] + "#" + std::to_string(rec.replaced[i]);
          }
          return out + "}";
        }
      },
      detail);
}

OperatorSet OperatorSet::parse(std::string_view text) {
  OperatorSet ops{false, false, false};
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ',')) {
    std::erase_if(item, [](unsigned char c) { return std::isspace(c); });
    std::transform(item.begin(), item.end(), item.begin(), [](unsigned char c) { return std::tolower(c); });
    if (item == "dc") ops.dc = true;
    else if (item == "ai") ops.ai = true;
    else if (item == "gr") ops.gr = true;
    else if (item == "all") ops = OperatorSet{};
    else throw ParseError("unknown operator '" + item + "' (expected dc, ai, gr)", 0);
  }
  return ops;
}

std::string OperatorSet::str() const {
  std::string out;
  auto add = [&](bool on, const char* name) {
    if (!on) return;
    if (!out.empty()) out += ",";
    out += name;
  };
  add(dc, "dc");
  add(ai, "ai");
  add(gr, "gr");
  return out.empty() ? "none" : out;
}

std::vector<Candidate> enumerate_dc(const SPJQuery& spj) {
  std::vector<Candidate> out;
  if (spj.occurrences.size() < 2) return out;
  for (const auto& occ : spj.occurrences) out.push_back(apply_dc(spj, occ));
  return out;
}

std::vector<Candidate> enumerate_ai(const SPJQuery& spj) {
  std::vector<Candidate> out;
  for (std::size_t i = 0; i < spj.selections.size(); ++i) out.push_back(apply_ai_const(spj, i));
  for (std::size_t c = 0; c < spj.classes.size(); ++c) {
    const auto& cls = spj.classes[c];
    if (cls.size() < 2) continue;
    // Splitting either side of a two-member class removes the same equality.
    if (cls.size() == 2) {
      out.push_back(apply_ai_eq(spj, c, cls[1]));
      continue;
    }
    for (const auto& member : cls) out.push_back(apply_ai_eq(spj, c, member));
  }
  return out;
}

std::vector<std::pair<std::vector<std::size_t>, MatchSubstitution>> match_rule_body(const Rule& rule,
                                                                                    const std::vector<Atom>& atoms) {
  std::vector<std::pair<std::vector<std::size_t>, MatchSubstitution>> out;
  std::vector<std::size_t> chosen;
  match_from(rule, atoms, 0, chosen, MatchSubstitution{}, out);
  return out;
}

std::vector<Candidate> enumerate_gr(const SPJQuery& spj, const RuleBase& rules, const std::vector<Schema>& schemas) {
  std::vector<Candidate> out;
  auto atoms = reconstruct_atoms(spj);
  for (std::size_t r = 0; r < rules.size(); ++r) {
    const Rule& rule = rules[r];
    auto matches = match_rule_body(rule, atoms);
    if (matches.empty()) continue;
    auto schema = std::find_if(schemas.begin(), schemas.end(),
                               [&](const Schema& s) { return s.relation_name == rule.head.relation; });
    if (schema == schemas.end())
      throw QueryError("rule " + std::to_string(r + 1) + ": unknown head relation " + rule.head.relation);
    if (schema->arity() != rule.head.args.size())
      throw QueryError("rule " + std::to_string(r + 1) + ": head arity does not match " + rule.head.relation);
    for (const auto& [matched, theta] : matches) out.push_back(apply_gr(spj, r, rule, matched, theta, *schema));
  }
  return out;
}

std::vector<Candidate> relax_one_step(const SPJQuery& spj, const Database& db, const RuleBase& rules,
                                      OperatorSet ops) {
  std::vector<Candidate> out;
  auto append = [&](std::vector<Candidate> more) {
    for (auto& c : more) out.push_back(std::move(c));
  };
  if (ops.dc) append(enumerate_dc(spj));
  if (ops.ai) append(enumerate_ai(spj));
  if (ops.gr) append(enumerate_gr(spj, rules, db.schemas()));
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].ordinal = i;
    out[i].answers = evaluate(out[i].query, db);
  }
  return out;
}

}  // namespace cqrelax
