#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cqrelax/value.hpp"

namespace cqrelax {

struct AttributeDecl {
  std::string name;
  ValueKind kind = ValueKind::Symbolic;
  std::optional<Interval> range;  // present iff kind == Numeric

  friend bool operator==(const AttributeDecl&, const AttributeDecl&) = default;
};

struct Schema {
  std::string relation_name;
  std::vector<AttributeDecl> attributes;

  std::size_t arity() const noexcept { return attributes.size(); }
  /// Column index of `attribute`, or nullopt.
  std::optional<std::size_t> index_of(std::string_view attribute) const;

  friend bool operator==(const Schema&, const Schema&) = default;
};

/// A set of rows over one schema. Rows are kept sorted and distinct.
class Relation {
 public:
  explicit Relation(Schema schema) : schema_(std::move(schema)) {}

  /// Validates arity and numeric ranges. Duplicates are ignored.
  void insert(Row row);

  const Schema& schema() const noexcept { return schema_; }
  const std::vector<Row>& rows() const noexcept { return rows_; }
  std::size_t size() const noexcept { return rows_.size(); }
  bool empty() const noexcept { return rows_.empty(); }

  friend bool operator==(const Relation&, const Relation&) = default;

 private:
  Schema schema_;
  std::vector<Row> rows_;
};

class Database {
 public:
  /// Throws DataError when a relation of that name already exists.
  void add(Relation relation);

  const Relation* find(std::string_view name) const;
  const Relation& at(std::string_view name) const;
  const std::map<std::string, Relation, std::less<>>& relations() const noexcept { return relations_; }
  std::vector<Schema> schemas() const;

 private:
  std::map<std::string, Relation, std::less<>> relations_;
};

/// Parses `relation Name(attr: string, attr: numeric[lo,hi], ...)` lines.
std::vector<Schema> load_schema(std::string_view schema_text);

/// Parses a CSV body whose header must list the schema's attributes in order.
Relation load_relation_csv(const Schema& schema, std::string_view csv_text);

/// Renders a relation as CSV (header plus rows) that `load_relation_csv` reads back.
std::string export_relation_csv(const Relation& relation);

/// Reads `schema.cfg` and one `<Relation>.csv` per declared relation.
Database load_database(const std::filesystem::path& data_dir);

/// Whole-file read; throws DataError when the file cannot be opened.
std::string read_file(const std::filesystem::path& path);

}  // namespace cqrelax
