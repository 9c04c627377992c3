#include "cqrelax/similarity.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <optional>
#include <sstream>

#include "cqrelax/csv.hpp"
#include "cqrelax/error.hpp"

namespace cqrelax {
namespace {

std::pair<std::string, std::string> ordered(const std::string& a, const std::string& b) {
  return a <= b ? std::make_pair(a, b) : std::make_pair(b, a);
}

double clamp01(double d) { return std::clamp(d, 0.0, 1.0); }

double parse_degree(const std::string& text, const std::string& where) {
  std::size_t used = 0;
  double d = 0;
  try {
    d = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw DataError(where + ": '" + text + "' is not a number");
  if (!(d >= 0.0 && d <= 1.0)) throw DataError(where + ": degree " + text + " outside [0,1]");
  return d;
}

void expect_header(const std::vector<csv::Record>& recs, const std::vector<std::string>& header,
                   const std::string& what) {
  if (recs.empty() || recs.front().cells != header) {
    std::string want;
    for (const auto& h : header) want += (want.empty() ? "" : ",") + h;
    throw DataError(what + ": expected header '" + want + "'");
  }
}

}  // namespace

void PairTable::add(const std::string& a, const std::string& b, double degree) {
  if (!(degree >= 0.0 && degree <= 1.0)) throw DataError("pair degree outside [0,1] for " + a + "," + b);
  auto key = ordered(a, b);
  auto [it, inserted] = entries_.emplace(key, degree);
  if (!inserted && it->second != degree)
    throw DataError("conflicting degrees for pair " + a + "," + b);
}

double PairTable::lookup(const Value& a, const Value& b) const {
  if (a == b) return 1.0;
  auto it = entries_.find(ordered(a.str(), b.str()));
  return it == entries_.end() ? default_sim_ : it->second;
}

PairTable PairTable::scaled(double factor) const {
  PairTable out(default_sim_);
  for (const auto& [k, d] : entries_) out.entries_.emplace(k, clamp01(d * factor));
  return out;
}

PairTable PairTable::from_csv(std::string_view text, double default_sim) {
  auto recs = csv::parse(text);
  expect_header(recs, {"a", "b", "sim"}, "pairs file");
  PairTable table(default_sim);
  for (std::size_t i = 1; i < recs.size(); ++i) {
    const auto& r = recs[i];
    std::string where = "pairs file line " + std::to_string(r.line);
    if (r.cells.size() != 3) throw DataError(where + ": expected 3 columns");
    table.add(r.cells[0], r.cells[1], parse_degree(r.cells[2], where));
  }
  return table;
}

TaxonomyMeasure parse_measure(std::string_view name) {
  if (name == "wupalmer") return TaxonomyMeasure::WuPalmer;
  if (name == "path") return TaxonomyMeasure::Path;
  if (name == "lch") return TaxonomyMeasure::LeacockChodorow;
  throw DataError("unknown taxonomy measure '" + std::string(name) + "' (wupalmer, path, lch)");
}

std::string measure_name(TaxonomyMeasure m) {
  switch (m) {
    case TaxonomyMeasure::WuPalmer: return "wupalmer";
    case TaxonomyMeasure::Path: return "path";
    case TaxonomyMeasure::LeacockChodorow: return "lch";
  }
  return "?";
}

Taxonomy::Taxonomy(const std::vector<std::pair<std::string, std::string>>& edges) {
  if (edges.empty()) throw DataError("taxonomy has no edges");
  auto intern = [&](const std::string& s) {
    auto [it, inserted] = ids_.emplace(s, nodes_.size());
    if (inserted) {
      nodes_.push_back(s);
      parent_.push_back(static_cast<std::size_t>(-1));
    }
    return it->second;
  };
  for (const auto& [child, parent] : edges) {
    if (child == parent) throw DataError("taxonomy: " + child + " is its own parent");
    std::size_t c = intern(child);
    std::size_t p = intern(parent);
    if (parent_[c] != static_cast<std::size_t>(-1) && parent_[c] != p)
      throw DataError("taxonomy: " + child + " has more than one parent");
    parent_[c] = p;
  }
  std::vector<std::size_t> roots;
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (parent_[i] == static_cast<std::size_t>(-1)) roots.push_back(i);
  if (roots.size() != 1)
    throw DataError("taxonomy must have exactly one root, found " + std::to_string(roots.size()));
  root_ = roots.front();
  parent_[root_] = root_;

  depth_.assign(nodes_.size(), 0);
  depth_[root_] = 1;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    std::vector<std::size_t> chain;
    std::size_t n = i;
    while (depth_[n] == 0) {
      chain.push_back(n);
      if (chain.size() > nodes_.size()) throw DataError("taxonomy contains a cycle through " + nodes_[i]);
      n = parent_[n];
    }
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      depth_[*it] = depth_[parent_[*it]] + 1;
    }
  }
  max_depth_ = *std::max_element(depth_.begin(), depth_.end());
}

Taxonomy Taxonomy::from_csv(std::string_view text) {
  auto recs = csv::parse(text);
  expect_header(recs, {"child", "parent"}, "taxonomy file");
  std::vector<std::pair<std::string, std::string>> edges;
  for (std::size_t i = 1; i < recs.size(); ++i) {
    if (recs[i].cells.size() != 2)
      throw DataError("taxonomy file line " + std::to_string(recs[i].line) + ": expected 2 columns");
    edges.emplace_back(recs[i].cells[0], recs[i].cells[1]);
  }
  return Taxonomy(edges);
}

bool Taxonomy::contains(std::string_view node) const { return ids_.count(std::string(node)) != 0; }

std::size_t Taxonomy::id(std::string_view node) const {
  auto it = ids_.find(std::string(node));
  if (it == ids_.end()) throw Error("taxonomy has no node " + std::string(node));
  return it->second;
}

std::size_t Taxonomy::depth(std::string_view node) const { return depth_[id(node)]; }

std::size_t Taxonomy::lca_id(std::size_t a, std::size_t b) const {
  while (depth_[a] > depth_[b]) a = parent_[a];
  while (depth_[b] > depth_[a]) b = parent_[b];
  while (a != b) {
    a = parent_[a];
    b = parent_[b];
  }
  return a;
}

const std::string& Taxonomy::lca(std::string_view a, std::string_view b) const {
  return nodes_[lca_id(id(a), id(b))];
}

std::size_t Taxonomy::distance(std::string_view a, std::string_view b) const {
  std::size_t ia = id(a), ib = id(b);
  return depth_[ia] + depth_[ib] - 2 * depth_[lca_id(ia, ib)];
}

double Taxonomy::similarity(TaxonomyMeasure m, const Value& a, const Value& b, double fallback) const {
  if (a == b) return 1.0;
  std::string sa = a.str(), sb = b.str();
  if (!contains(sa) || !contains(sb)) return fallback;
  std::size_t ia = id(sa), ib = id(sb);
  std::size_t l = lca_id(ia, ib);
  double d = static_cast<double>(depth_[ia] + depth_[ib] - 2 * depth_[l]);
  switch (m) {
    case TaxonomyMeasure::WuPalmer:
      return clamp01(2.0 * static_cast<double>(depth_[l]) / static_cast<double>(depth_[ia] + depth_[ib]));
    case TaxonomyMeasure::Path:
      return clamp01(1.0 / (1.0 + d));
    case TaxonomyMeasure::LeacockChodorow: {
      double twice_depth = 2.0 * static_cast<double>(max_depth_);
      double dist = std::max(d, 1.0);
      return clamp01(std::log(twice_depth / dist) / std::log(twice_depth));
    }
  }
  return fallback;
}

double sim_numeric(const Interval& range, const Rational& a, const Rational& b) {
  Rational s = Rational(1) - (a - b).abs() / (range.hi - range.lo);
  return clamp01(s.to_double());
}

void SimilarityConfig::bind(const std::string& attribute, SimilarityProvider provider) {
  if (bindings_.count(attribute)) throw DataError("attribute " + attribute + " bound twice");
  if (auto* pairs = std::get_if<PairTable>(&provider)) pairs->set_default_sim(default_sim_);
  bindings_.emplace(attribute, std::move(provider));
}

const SimilarityProvider* SimilarityConfig::provider(std::string_view attribute) const {
  auto it = bindings_.find(attribute);
  return it == bindings_.end() ? nullptr : &it->second;
}

void SimilarityConfig::set_default_sim(double d) {
  if (!(d >= 0.0 && d <= 1.0)) throw DataError("default_sim outside [0,1]");
  default_sim_ = d;
  for (auto& [_, p] : bindings_)
    if (auto* pairs = std::get_if<PairTable>(&p)) pairs->set_default_sim(d);
}

double SimilarityConfig::sim(std::string_view attribute, const Value& a, const Value& b) const {
  const SimilarityProvider* p = provider(attribute);
  if (!p) return a == b ? 1.0 : default_sim_;
  return std::visit(
      [&](const auto& prov) -> double {
        using T = std::decay_t<decltype(prov)>;
        if constexpr (std::is_same_v<T, PairTable>) {
          return prov.lookup(a, b);
        } else if constexpr (std::is_same_v<T, TaxonomyBinding>) {
          return prov.taxonomy->similarity(prov.measure, a, b, default_sim_);
        } else {
          if (!a.is_numeric() || !b.is_numeric())
            throw Error("numeric similarity for " + std::string(attribute) + " given a symbolic value");
          return sim_numeric(prov, a.numeric(), b.numeric());
        }
      },
      *p);
}

double SimilarityConfig::sim_lenient(std::string_view attribute, const Value& a, const Value& b) const {
  const SimilarityProvider* p = provider(attribute);
  if (p && std::holds_alternative<Interval>(*p) && (!a.is_numeric() || !b.is_numeric()))
    return a == b ? 1.0 : default_sim_;
  return sim(attribute, a, b);
}

SimilarityConfig SimilarityConfig::scaled(double factor) const {
  SimilarityConfig out(default_sim_);
  for (const auto& [attr, p] : bindings_) {
    if (const auto* pairs = std::get_if<PairTable>(&p)) out.bindings_.emplace(attr, pairs->scaled(factor));
    else out.bindings_.emplace(attr, p);
  }
  return out;
}

SimilarityConfig parse_similarity_config(std::string_view text, const std::filesystem::path& base_dir,
                                         const std::vector<Schema>& schemas) {
  SimilarityConfig cfg;
  std::optional<double> default_sim;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::vector<std::string> w;
    for (std::string t; words >> t;) w.push_back(t);
    if (w.empty()) continue;
    std::string where = "similarity config line " + std::to_string(line_no);
    if (w[0] == "default_sim" && w.size() == 2) {
      default_sim = parse_degree(w[1], where);
    } else if (w[0] == "bind" && w.size() >= 3) {
      const std::string& attr = w[1];
      const std::string& kind = w[2];
      if (kind == "pairs" && w.size() == 4) {
        cfg.bind(attr, PairTable::from_csv(read_file(base_dir / w[3])));
      } else if (kind == "taxonomy" && (w.size() == 4 || w.size() == 5)) {
        auto tax = std::make_shared<const Taxonomy>(Taxonomy::from_csv(read_file(base_dir / w[3])));
        TaxonomyMeasure m = w.size() == 5 ? parse_measure(w[4]) : TaxonomyMeasure::WuPalmer;
        cfg.bind(attr, TaxonomyBinding{std::move(tax), m});
      } else if (kind == "numeric" && w.size() == 3) {
        std::optional<Interval> range;
        for (const auto& s : schemas)
          for (const auto& a : s.attributes) {
            if (a.name != attr || a.kind != ValueKind::Numeric || !a.range) continue;
            if (range && !(*range == *a.range))
              throw DataError(where + ": attribute " + attr + " has conflicting numeric ranges");
            range = a.range;
          }
        if (!range) throw DataError(where + ": no numeric attribute named " + attr + " in the schema");
        cfg.bind(attr, *range);
      } else {
        throw DataError(where + ": malformed bind directive");
      }
    } else {
      throw DataError(where + ": unknown directive '" + w[0] + "'");
    }
  }
  if (default_sim) cfg.set_default_sim(*default_sim);
  return cfg;
}

SimilarityConfig load_similarity_config(const std::filesystem::path& path, const std::vector<Schema>& schemas) {
  return parse_similarity_config(read_file(path), path.parent_path(), schemas);
}

}  // namespace cqrelax
