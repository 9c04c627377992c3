#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "cqrelax/datastore.hpp"
#include "cqrelax/value.hpp"

namespace cqrelax {

/// Symmetric table of explicit similarity degrees between constants.
class PairTable {
 public:
  explicit PairTable(double default_sim = 0.0) : default_sim_(default_sim) {}

  /// Throws DataError on degrees outside [0,1] or a pair already stored
  /// with a different degree (in either orientation).
  void add(const std::string& a, const std::string& b, double degree);

  /// 1 when a == b, the stored degree when present, default otherwise.
  double lookup(const Value& a, const Value& b) const;

  double default_sim() const noexcept { return default_sim_; }
  void set_default_sim(double d) { default_sim_ = d; }
  std::size_t size() const noexcept { return entries_.size(); }

  /// Every stored degree multiplied by `factor`; reflexive and default
  /// degrees are left alone.
  PairTable scaled(double factor) const;

  /// CSV with header `a,b,sim`.
  static PairTable from_csv(std::string_view text, double default_sim = 0.0);

 private:
  std::map<std::pair<std::string, std::string>, double> entries_;  // key ordered (min, max)
  double default_sim_;
};

enum class TaxonomyMeasure { WuPalmer, Path, LeacockChodorow };

TaxonomyMeasure parse_measure(std::string_view name);
std::string measure_name(TaxonomyMeasure m);

/// Rooted tree of symbolic values. Depth of the root is 1.
class Taxonomy {
 public:
  /// `edges` are (child, parent). Throws DataError unless they form exactly
  /// one rooted tree.
  explicit Taxonomy(const std::vector<std::pair<std::string, std::string>>& edges);

  /// CSV with header `child,parent`.
  static Taxonomy from_csv(std::string_view text);

  bool contains(std::string_view node) const;
  const std::string& root() const noexcept { return nodes_[root_]; }
  std::size_t depth(std::string_view node) const;
  std::size_t max_depth() const noexcept { return max_depth_; }
  const std::string& lca(std::string_view a, std::string_view b) const;
  /// Edges on the tree path between a and b.
  std::size_t distance(std::string_view a, std::string_view b) const;

  /// 1 when a == b; `fallback` when either is not a node.
  double similarity(TaxonomyMeasure m, const Value& a, const Value& b, double fallback) const;

 private:
  std::size_t id(std::string_view node) const;
  std::size_t lca_id(std::size_t a, std::size_t b) const;

  std::vector<std::string> nodes_;
  std::unordered_map<std::string, std::size_t> ids_;
  std::vector<std::size_t> parent_;  // root's parent is itself
  std::vector<std::size_t> depth_;
  std::size_t root_ = 0;
  std::size_t max_depth_ = 1;
};

/// Linear scaling over a closed range: 1 - |a - b| / (hi - lo), clamped.
double sim_numeric(const Interval& range, const Rational& a, const Rational& b);

struct TaxonomyBinding {
  std::shared_ptr<const Taxonomy> taxonomy;
  TaxonomyMeasure measure = TaxonomyMeasure::WuPalmer;
};

using SimilarityProvider = std::variant<PairTable, TaxonomyBinding, Interval>;

/// Per-attribute similarity providers with a global fallback degree.
class SimilarityConfig {
 public:
  explicit SimilarityConfig(double default_sim = 0.0) : default_sim_(default_sim) {}

  /// Throws DataError when `attribute` is already bound.
  void bind(const std::string& attribute, SimilarityProvider provider);
  const SimilarityProvider* provider(std::string_view attribute) const;
  bool bound(std::string_view attribute) const { return provider(attribute) != nullptr; }

  double default_sim() const noexcept { return default_sim_; }
  /// Also becomes the default of every bound pair table.
  void set_default_sim(double d);

  /// sim(a, b) for values of `attribute`. Unbound attributes give 1 on
  /// equality and the default otherwise. Throws Error when a numeric
  /// provider receives a symbolic value.
  double sim(std::string_view attribute, const Value& a, const Value& b) const;

  /// Like `sim`, but a value of the wrong kind for a numeric provider yields
  /// the default degree instead of an error.
  double sim_lenient(std::string_view attribute, const Value& a, const Value& b) const;

  /// Pair-table degrees multiplied by `factor`; other providers unchanged.
  SimilarityConfig scaled(double factor) const;

 private:
  std::map<std::string, SimilarityProvider, std::less<>> bindings_;
  double default_sim_;
};

/// Reads a binding file:
///   bind <Attr> pairs <file.csv>
///   bind <Attr> taxonomy <file.csv> wupalmer|path|lch
///   bind <Attr> numeric
///   default_sim <d>
/// Paths are relative to the binding file. Numeric bindings take the range
/// declared for that attribute in `schemas`.
SimilarityConfig load_similarity_config(const std::filesystem::path& path, const std::vector<Schema>& schemas);
SimilarityConfig parse_similarity_config(std::string_view text, const std::filesystem::path& base_dir,
                                         const std::vector<Schema>& schemas);

}  // namespace cqrelax
