#include "cqrelax/datastore.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "cqrelax/csv.hpp"
#include "cqrelax/error.hpp"

namespace cqrelax {
namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// Cursor over a single schema line.
class LineScanner {
 public:
  LineScanner(std::string_view line, std::size_t line_no) : s_(line), line_no_(line_no) {}

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= s_.size();
  }
  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  std::string identifier() {
    skip_ws();
    if (pos_ >= s_.size() || !ident_start(s_[pos_])) fail("expected identifier");
    std::size_t b = pos_;
    while (pos_ < s_.size() && ident_char(s_[pos_])) ++pos_;
    return std::string(s_.substr(b, pos_ - b));
  }
  Rational number() {
    skip_ws();
    std::size_t b = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '-' ||
                                s_[pos_] == '.' || s_[pos_] == '/'))
      ++pos_;
    auto r = Rational::parse(s_.substr(b, pos_ - b));
    if (!r) fail("malformed number in range");
    return *r;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw DataError("schema line " + std::to_string(line_no_) + ": " + what);
  }

 private:
  std::string_view s_;
  std::size_t line_no_;
  std::size_t pos_ = 0;
};

Schema parse_schema_line(std::string_view line, std::size_t line_no) {
  LineScanner sc(line, line_no);
  if (sc.identifier() != "relation") sc.fail("expected 'relation'");
  Schema schema;
  schema.relation_name = sc.identifier();
  sc.expect('(');
  if (sc.accept(')')) sc.fail("relation " + schema.relation_name + " has zero attributes");
  std::set<std::string> seen;
  do {
    AttributeDecl attr;
    attr.name = sc.identifier();
    sc.expect(':');
    std::string type = sc.identifier();
    if (type == "string") {
      attr.kind = ValueKind::Symbolic;
    } else if (type == "numeric") {
      attr.kind = ValueKind::Numeric;
      sc.expect('[');
      Rational lo = sc.number();
      sc.expect(',');
      Rational hi = sc.number();
      sc.expect(']');
      if (!(lo < hi)) sc.fail("malformed range for " + attr.name + ": lo must be below hi");
      attr.range = Interval{lo, hi};
    } else {
      sc.fail("unknown attribute type '" + type + "'");
    }
    if (!seen.insert(attr.name).second)
      sc.fail("duplicate attribute " + attr.name + " in relation " + schema.relation_name);
    schema.attributes.push_back(std::move(attr));
  } while (sc.accept(','));
  sc.expect(')');
  if (!sc.at_end()) sc.fail("trailing text after declaration");
  return schema;
}

}  // namespace

std::optional<std::size_t> Schema::index_of(std::string_view attribute) const {
  for (std::size_t i = 0; i < attributes.size(); ++i)
    if (attributes[i].name == attribute) return i;
  return std::nullopt;
}

void Relation::insert(Row row) {
  if (row.size() != schema_.arity())
    throw DataError("relation " + schema_.relation_name + ": row has " + std::to_string(row.size()) +
                    " values, expected " + std::to_string(schema_.arity()));
  for (std::size_t i = 0; i < row.size(); ++i) {
    const auto& attr = schema_.attributes[i];
    if (attr.kind == ValueKind::Numeric) {
      if (!row[i].is_numeric())
        throw DataError("relation " + schema_.relation_name + ": attribute " + attr.name + " expects a number");
      if (attr.range && !attr.range->contains(row[i].numeric()))
        throw DataError("relation " + schema_.relation_name + ": value " + row[i].str() + " outside range of " +
                        attr.name);
    } else if (!row[i].is_symbolic()) {
      row[i] = Value(row[i].str());
    }
  }
  auto it = std::lower_bound(rows_.begin(), rows_.end(), row);
  if (it != rows_.end() && *it == row) return;
  rows_.insert(it, std::move(row));
}

void Database::add(Relation relation) {
  std::string name = relation.schema().relation_name;
  if (relations_.count(name)) throw DataError("duplicate relation " + name);
  relations_.emplace(std::move(name), std::move(relation));
}

const Relation* Database::find(std::string_view name) const {
  auto it = relations_.find(name);
  return it == relations_.end() ? nullptr : &it->second;
}

const Relation& Database::at(std::string_view name) const {
  if (const auto* r = find(name)) return *r;
  throw QueryError("unknown relation " + std::string(name));
}

std::vector<Schema> Database::schemas() const {
  std::vector<Schema> out;
  for (const auto& [_, rel] : relations_) out.push_back(rel.schema());
  return out;
}

std::vector<Schema> load_schema(std::string_view schema_text) {
  std::vector<Schema> out;
  std::set<std::string> names;
  std::size_t line_no = 0;
  std::istringstream in{std::string(schema_text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) continue;
    Schema schema = parse_schema_line(line, line_no);
    if (!names.insert(schema.relation_name).second)
      throw DataError("schema line " + std::to_string(line_no) + ": duplicate relation " + schema.relation_name);
    out.push_back(std::move(schema));
  }
  return out;
}

Relation load_relation_csv(const Schema& schema, std::string_view csv_text) {
  auto records = csv::parse(csv_text);
  const std::string& name = schema.relation_name;
  // A zero-byte file is an empty instance.
  if (records.empty()) return Relation(schema);
  const auto& header = records.front().cells;
  bool header_ok = header.size() == schema.arity();
  for (std::size_t i = 0; header_ok && i < header.size(); ++i) header_ok = header[i] == schema.attributes[i].name;
  if (!header_ok) throw DataError(name + ".csv: header does not match schema attributes");

  Relation rel(schema);
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.cells.size() != schema.arity())
      throw DataError(name + ".csv line " + std::to_string(rec.line) + ": expected " +
                      std::to_string(schema.arity()) + " columns, got " + std::to_string(rec.cells.size()));
    Row row;
    row.reserve(rec.cells.size());
    for (std::size_t i = 0; i < rec.cells.size(); ++i) {
      const auto& attr = schema.attributes[i];
      if (attr.kind == ValueKind::Numeric) {
        auto num = Rational::parse(rec.cells[i]);
        if (!num)
          throw DataError(name + ".csv line " + std::to_string(rec.line) + ": '" + rec.cells[i] +
                          "' is not a number (" + attr.name + ")");
        if (attr.range && !attr.range->contains(*num))
          throw DataError(name + ".csv line " + std::to_string(rec.line) + ": " + rec.cells[i] +
                          " outside declared range of " + attr.name);
        row.emplace_back(*num);
      } else {
        row.emplace_back(rec.cells[i]);
      }
    }
    rel.insert(std::move(row));
  }
  return rel;
}

std::string export_relation_csv(const Relation& relation) {
  std::vector<std::string> cells;
  for (const auto& a : relation.schema().attributes) cells.push_back(a.name);
  std::string out = csv::join(cells) + "\n";
  for (const auto& row : relation.rows()) {
    cells.clear();
    for (const auto& v : row) cells.push_back(v.str());
    out += csv::join(cells) + "\n";
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Database load_database(const std::filesystem::path& data_dir) {
  auto schemas = load_schema(read_file(data_dir / "schema.cfg"));
  Database db;
  for (const auto& schema : schemas) {
    auto csv_path = data_dir / (schema.relation_name + ".csv");
    if (!std::filesystem::exists(csv_path))
      throw DataError("missing CSV for relation " + schema.relation_name + " (" + csv_path.string() + ")");
    db.add(load_relation_csv(schema, read_file(csv_path)));
  }
  return db;
}

}  // namespace cqrelax
