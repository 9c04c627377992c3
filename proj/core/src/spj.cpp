#include "cqrelax/spj.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "cqrelax/error.hpp"

namespace cqrelax {

const Occurrence* SPJQuery::find_occurrence(int index) const {
  for (const auto& o : occurrences)
    if (o.index == index) return &o;
  return nullptr;
}

int SPJQuery::position_of(int index) const {
  for (std::size_t i = 0; i < occurrences.size(); ++i)
    if (occurrences[i].index == index) return static_cast<int>(i);
  return -1;
}

int SPJQuery::class_of(const OccAttr& attr) const {
  for (std::size_t i = 0; i < classes.size(); ++i)
    if (std::find(classes[i].begin(), classes[i].end(), attr) != classes[i].end()) return static_cast<int>(i);
  return -1;
}

std::string SPJQuery::fresh_variable() const {
  std::set<std::string> used;
  for (const auto& [_, term] : provenance)
    if (is_variable(term)) used.insert(variable_name(term));
  for (const auto& p : projection) used.insert(p.variable);
  for (int n = 1;; ++n) {
    std::string name = "v" + std::to_string(n);
    if (!used.count(name)) return name;
  }
}

std::vector<const std::vector<OccAttr>*> SPJQuery::join_classes() const {
  std::vector<const std::vector<OccAttr>*> out;
  for (const auto& c : classes)
    if (c.size() >= 2) out.push_back(&c);
  return out;
}

std::size_t SPJQuery::total_arity() const {
  std::size_t n = 0;
  for (const auto& o : occurrences) n += o.attrs.size();
  return n;
}

SPJQuery translate(const ConjunctiveQuery& q, const std::vector<Schema>& schemas) {
  SPJQuery spj;
  std::vector<std::string> class_var;
  for (std::size_t i = 0; i < q.atoms.size(); ++i) {
    const Atom& atom = q.atoms[i];
    auto it = std::find_if(schemas.begin(), schemas.end(),
                           [&](const Schema& s) { return s.relation_name == atom.relation; });
    if (it == schemas.end()) throw QueryError("unknown relation " + atom.relation);
    const Schema& schema = *it;
    if (atom.args.size() != schema.arity())
      throw QueryError("arity mismatch: " + to_string(atom) + " has " + std::to_string(atom.args.size()) +
                       " arguments, " + schema.relation_name + " has " + std::to_string(schema.arity()));
    Occurrence occ;
    occ.index = static_cast<int>(i) + 1;
    occ.relation = atom.relation;
    occ.source_atom = atom;
    for (std::size_t p = 0; p < atom.args.size(); ++p) {
      const AttributeDecl& decl = schema.attributes[p];
      OccAttr a{occ.index, static_cast<int>(p), decl.name};
      occ.attrs.push_back(a);
      const Term& arg = atom.args[p];
      if (is_variable(arg)) {
        const auto& var = variable_name(arg);
        auto c = std::find(class_var.begin(), class_var.end(), var);
        if (c == class_var.end()) {
          class_var.push_back(var);
          spj.classes.push_back({a});
        } else {
          spj.classes[static_cast<std::size_t>(c - class_var.begin())].push_back(a);
        }
        spj.provenance[a] = arg;
      } else {
        Value c = constant_value(arg);
        if (decl.kind == ValueKind::Numeric && !c.is_numeric())
          throw QueryError("type mismatch: symbolic constant " + constant_literal(c) + " for numeric attribute " +
                           schema.relation_name + "." + decl.name);
        if (decl.kind == ValueKind::Symbolic && c.is_numeric()) c = Value(c.str());
        spj.provenance[a] = c;
        spj.selections.push_back({a, c});
      }
    }
    spj.occurrences.push_back(std::move(occ));
  }
  for (const auto& var : free_variables(q)) {
    auto c = std::find(class_var.begin(), class_var.end(), var);
    const OccAttr& rep = spj.classes[static_cast<std::size_t>(c - class_var.begin())].front();
    spj.projection.push_back({rep, var, var});
  }
  return spj;
}

SPJQuery translate(const ConjunctiveQuery& q, const Database& db) { return translate(q, db.schemas()); }

namespace {

std::vector<const Relation*> bind_relations(const SPJQuery& spj, const Database& db) {
  std::vector<const Relation*> rels;
  for (const auto& occ : spj.occurrences) {
    const Relation& rel = db.at(occ.relation);
    if (rel.schema().arity() != occ.attrs.size())
      throw QueryError("occurrence " + occ.relation + "#" + std::to_string(occ.index) +
                       " does not match the relation's arity");
    rels.push_back(&rel);
  }
  return rels;
}

std::vector<std::string> columns_of(const SPJQuery& spj) {
  std::vector<std::string> cols;
  for (const auto& p : spj.projection) cols.push_back(p.column);
  return cols;
}

using Joined = std::vector<const Row*>;

struct ColumnRef {
  std::size_t pos;
  std::size_t col;
};

AnswerTable project(const SPJQuery& spj, const std::vector<Joined>& joined) {
  std::vector<ColumnRef> refs;
  for (const auto& p : spj.projection)
    refs.push_back({static_cast<std::size_t>(spj.position_of(p.attr.occurrence)),
                    static_cast<std::size_t>(p.attr.position)});
  std::set<Row> out;
  for (const auto& j : joined) {
    Row row;
    row.reserve(refs.size());
    for (const auto& r : refs) row.push_back((*j[r.pos])[r.col]);
    out.insert(std::move(row));
  }
  AnswerTable table;
  table.columns = columns_of(spj);
  table.rows.assign(out.begin(), out.end());
  return table;
}

}  // namespace

AnswerTable evaluate(const SPJQuery& spj, const Database& db) {
  auto rels = bind_relations(spj, db);
  const std::size_t n = spj.occurrences.size();

  // Per-occurrence filtering: constants and equalities local to one occurrence.
  std::vector<std::vector<const Row*>> filtered(n);
  for (std::size_t p = 0; p < n; ++p) {
    const int idx = spj.occurrences[p].index;
    std::vector<std::pair<std::size_t, const Value*>> consts;
    for (const auto& s : spj.selections)
      if (s.attr.occurrence == idx) consts.emplace_back(static_cast<std::size_t>(s.attr.position), &s.constant);
    std::vector<std::vector<std::size_t>> local_eq;
    for (const auto& cls : spj.classes) {
      std::vector<std::size_t> cols;
      for (const auto& a : cls)
        if (a.occurrence == idx) cols.push_back(static_cast<std::size_t>(a.position));
      if (cols.size() >= 2) local_eq.push_back(std::move(cols));
    }
    for (const auto& row : rels[p]->rows()) {
      bool keep = std::all_of(consts.begin(), consts.end(),
                              [&](const auto& c) { return row[c.first] == *c.second; });
      for (const auto& cols : local_eq)
        for (std::size_t k = 1; keep && k < cols.size(); ++k) keep = row[cols[k]] == row[cols[0]];
      if (keep) filtered[p].push_back(&row);
    }
  }

  std::vector<Joined> partial{Joined{}};
  for (std::size_t p = 0; p < n && !partial.empty(); ++p) {
    const int idx = spj.occurrences[p].index;
    // Join keys: per class, one earlier member against one member here.
    std::vector<ColumnRef> probe_side;
    std::vector<std::size_t> build_side;
    for (const auto& cls : spj.classes) {
      const OccAttr* here = nullptr;
      const OccAttr* earlier = nullptr;
      for (const auto& a : cls) {
        if (a.occurrence == idx && !here) here = &a;
        int ap = spj.position_of(a.occurrence);
        if (ap >= 0 && static_cast<std::size_t>(ap) < p && !earlier) earlier = &a;
      }
      if (here && earlier) {
        probe_side.push_back({static_cast<std::size_t>(spj.position_of(earlier->occurrence)),
                              static_cast<std::size_t>(earlier->position)});
        build_side.push_back(static_cast<std::size_t>(here->position));
      }
    }
    std::vector<Joined> next;
    if (build_side.empty()) {
      next.reserve(partial.size() * filtered[p].size());
      for (const auto& j : partial)
        for (const Row* r : filtered[p]) {
          next.push_back(j);
          next.back().push_back(r);
        }
    } else {
      std::unordered_map<Row, std::vector<const Row*>, RowHash> table;
      for (const Row* r : filtered[p]) {
        Row key;
        for (auto c : build_side) key.push_back((*r)[c]);
        table[std::move(key)].push_back(r);
      }
      for (const auto& j : partial) {
        Row key;
        for (const auto& ref : probe_side) key.push_back((*j[ref.pos])[ref.col]);
        auto hit = table.find(key);
        if (hit == table.end()) continue;
        for (const Row* r : hit->second) {
          next.push_back(j);
          next.back().push_back(r);
        }
      }
    }
    partial = std::move(next);
  }
  return project(spj, partial);
}

AnswerTable evaluate_naive(const SPJQuery& spj, const Database& db) {
  auto rels = bind_relations(spj, db);
  const std::size_t n = rels.size();
  std::vector<Joined> survivors;
  for (const auto* r : rels)
    if (r->empty()) return project(spj, survivors);

  std::vector<std::size_t> odometer(n, 0);
  for (;;) {
    Joined j(n);
    for (std::size_t p = 0; p < n; ++p) j[p] = &rels[p]->rows()[odometer[p]];
    auto value_of = [&](const OccAttr& a) -> const Value& {
      return (*j[static_cast<std::size_t>(spj.position_of(a.occurrence))])[static_cast<std::size_t>(a.position)];
    };
    bool keep = true;
    for (const auto& s : spj.selections)
      if (!(value_of(s.attr) == s.constant)) {
        keep = false;
        break;
      }
    for (const auto& cls : spj.classes) {
      if (!keep) break;
      for (const auto& a : cls)
        if (!(value_of(a) == value_of(cls.front()))) {
          keep = false;
          break;
        }
    }
    if (keep) survivors.push_back(std::move(j));

    std::size_t k = 0;
    while (k < n && ++odometer[k] == rels[k]->size()) odometer[k++] = 0;
    if (k == n) break;
  }
  return project(spj, survivors);
}

std::vector<Atom> reconstruct_atoms(const SPJQuery& spj) {
  std::vector<Atom> atoms;
  for (const auto& occ : spj.occurrences) {
    Atom a{occ.relation, {}};
    for (const auto& attr : occ.attrs) a.args.push_back(spj.provenance.at(attr));
    atoms.push_back(std::move(a));
  }
  return atoms;
}

ConjunctiveQuery reconstruct_query(const SPJQuery& spj) {
  ConjunctiveQuery q;
  q.atoms = reconstruct_atoms(spj);
  std::set<std::string> projected;
  for (const auto& p : spj.projection) projected.insert(p.variable);
  for (const auto& v : variables_of(q.atoms))
    if (!projected.count(v)) q.existential.push_back(v);
  return q;
}

std::string render(const SPJQuery& spj) {
  std::string out = "PROJECT [";
  for (std::size_t i = 0; i < spj.projection.size(); ++i) {
    if (i) out += ", ";
    out += spj.projection[i].variable + ":=" + spj.projection[i].attr.alias();
  }
  out += "] SELECT [";
  for (std::size_t i = 0; i < spj.selections.size(); ++i) {
    if (i) out += ", ";
    out += spj.selections[i].attr.alias() + "=" + constant_literal(spj.selections[i].constant);
  }
  out += "] EQ [";
  bool first = true;
  for (const auto* cls : spj.join_classes()) {
    if (!first) out += ", ";
    first = false;
    out += "{";
    for (std::size_t k = 0; k < cls->size(); ++k) {
      if (k) out += ",";
      out += (*cls)[k].alias();
    }
    out += "}";
  }
  out += "] FROM ";
  for (std::size_t i = 0; i < spj.occurrences.size(); ++i) {
    if (i) out += ", ";
    out += spj.occurrences[i].relation + "#" + std::to_string(spj.occurrences[i].index);
  }
  return out;
}

std::string canonical_key(const SPJQuery& spj) {
  auto ref = [&](const OccAttr& a) {
    return std::to_string(spj.position_of(a.occurrence) + 1) + "." + std::to_string(a.position);
  };
  std::string key = "F:";
  for (const auto& o : spj.occurrences) key += o.relation + "/" + std::to_string(o.attrs.size()) + ";";

  std::vector<std::string> parts;
  for (const auto& s : spj.selections)
    parts.push_back(ref(s.attr) + "=" + (s.constant.is_numeric() ? "n:" : "s:") + s.constant.str());
  std::sort(parts.begin(), parts.end());
  key += "|C:";
  for (const auto& p : parts) key += p + ";";

  std::vector<std::vector<std::string>> classes;
  for (const auto& cls : spj.classes) {
    std::vector<std::string> members;
    for (const auto& a : cls) members.push_back(ref(a));
    std::sort(members.begin(), members.end());
    classes.push_back(std::move(members));
  }
  std::sort(classes.begin(), classes.end());
  key += "|E:";
  for (const auto& cls : classes) {
    key += "{";
    for (const auto& m : cls) key += m + ",";
    key += "}";
  }

  parts.clear();
  for (const auto& p : spj.projection) parts.push_back(ref(p.attr));
  std::sort(parts.begin(), parts.end());
  key += "|A:";
  for (const auto& p : parts) key += p + ";";
  return key;
}

bool structurally_equal(const SPJQuery& a, const SPJQuery& b) { return canonical_key(a) == canonical_key(b); }

void check_invariants(const SPJQuery& spj) {
  auto fail = [&](const std::string& what) { throw Error("invalid SPJ query (" + what + "): " + render(spj)); };
  std::set<int> indices;
  std::set<OccAttr> all;
  int last = 0;
  for (const auto& o : spj.occurrences) {
    if (o.index < 1 || !indices.insert(o.index).second) fail("occurrence index");
    if (o.index <= last) fail("occurrence order");
    last = o.index;
    for (std::size_t p = 0; p < o.attrs.size(); ++p) {
      if (o.attrs[p].occurrence != o.index || o.attrs[p].position != static_cast<int>(p)) fail("attribute layout");
      all.insert(o.attrs[p]);
      if (!spj.provenance.count(o.attrs[p])) fail("provenance missing for " + o.attrs[p].alias());
    }
  }
  if (spj.provenance.size() != all.size()) fail("stale provenance");

  std::set<OccAttr> selected;
  for (const auto& s : spj.selections) {
    if (!all.count(s.attr)) fail("selection on unknown attribute");
    if (!selected.insert(s.attr).second) fail("duplicate selection");
    const Term& t = spj.provenance.at(s.attr);
    if (is_variable(t) || !(constant_value(t) == s.constant)) fail("selection disagrees with provenance");
  }
  std::set<OccAttr> classed;
  std::set<std::string> class_vars;
  for (const auto& cls : spj.classes) {
    if (cls.empty()) fail("empty class");
    const Term& t0 = spj.provenance.at(cls.front());
    if (!is_variable(t0)) fail("class member without variable");
    if (!class_vars.insert(variable_name(t0)).second) fail("two classes for one variable");
    for (const auto& a : cls) {
      if (!all.count(a)) fail("class member unknown");
      if (!classed.insert(a).second) fail("classes overlap");
      if (spj.provenance.at(a) != t0) fail("class mixes variables");
    }
    if (!std::is_sorted(cls.begin(), cls.end())) fail("class not ordered");
  }
  for (const auto& a : all) {
    bool is_var = is_variable(spj.provenance.at(a));
    if (is_var != static_cast<bool>(classed.count(a))) fail("variable attribute outside E");
    if (!is_var && !selected.count(a)) fail("constant attribute outside C");
  }
  std::set<std::string> cols, vars;
  for (const auto& p : spj.projection) {
    if (!all.count(p.attr)) fail("projection on unknown attribute");
    const Term& t = spj.provenance.at(p.attr);
    if (!is_variable(t) || variable_name(t) != p.variable) fail("projection variable mismatch");
    if (!cols.insert(p.column).second) fail("duplicate output column");
    if (!vars.insert(p.variable).second) fail("variable projected twice");
  }
}

}  // namespace cqrelax
