#include "cqrelax/format.hpp"

#include <algorithm>
#include <cstdio>

#include "cqrelax/csv.hpp"
#include "cqrelax/error.hpp"

namespace cqrelax {
namespace {

std::vector<std::vector<std::string>> cells_of(const AnswerTable& table) {
  std::vector<std::vector<std::string>> out;
  std::vector<std::string> header = table.columns;
  if (table.degrees) header.push_back("#sim");
  out.push_back(std::move(header));
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    std::vector<std::string> line;
    for (const auto& v : table.rows[i]) line.push_back(v.str());
    if (table.degrees) line.push_back(format_degree((*table.degrees)[i]));
    out.push_back(std::move(line));
  }
  return out;
}

}  // namespace

OutputFormat parse_format(std::string_view name) {
  if (name == "text") return OutputFormat::Text;
  if (name == "csv") return OutputFormat::Csv;
  throw ParseError("unknown format '" + std::string(name) + "' (text, csv)", 0);
}

std::string format_degree(double d) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", d);
  return buf;
}

std::string render_text(const AnswerTable& table) {
  auto cells = cells_of(table);
  if (cells.front().empty()) return "(no columns)\n" + std::string(table.rows.empty() ? "" : "(true)\n");
  std::vector<std::size_t> width(cells.front().size(), 0);
  for (const auto& line : cells)
    for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
  auto emit = [&](const std::vector<std::string>& line) {
    std::string out;
    for (std::size_t c = 0; c < line.size(); ++c) {
      if (c) out += " | ";
      out += line[c];
      if (c + 1 < line.size()) out.append(width[c] - line[c].size(), ' ');
    }
    return out + "\n";
  };
  std::string out = emit(cells.front());
  std::size_t rule = 0;
  for (auto w : width) rule += w;
  rule += 3 * (width.size() - 1);
  out += std::string(rule, '-') + "\n";
  for (std::size_t i = 1; i < cells.size(); ++i) out += emit(cells[i]);
  return out;
}

std::string render_csv(const AnswerTable& table) {
  std::string out;
  for (const auto& line : cells_of(table)) out += csv::join(line) + "\n";
  return out;
}

std::string render_table(const AnswerTable& table, OutputFormat format) {
  return format == OutputFormat::Csv ? render_csv(table) : render_text(table);
}

}  // namespace cqrelax
