#include "cqrelax/csv.hpp"

#include "cqrelax/error.hpp"

namespace cqrelax::csv {
namespace {

bool blank(char c) { return c == ' ' || c == '\t' || c == '\r'; }

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && blank(s[b])) ++b;
  while (e > b && blank(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

std::vector<Record> parse(std::string_view text) {
  std::vector<Record> out;
  std::size_t i = 0;
  std::size_t line = 1;
  while (i < text.size()) {
    Record rec;
    rec.line = line;
    bool any_content = false;
    for (;;) {
      std::size_t p = i;
      while (p < text.size() && blank(text[p])) ++p;
      std::string cell;
      if (p < text.size() && text[p] == '"') {
        any_content = true;
        std::size_t q = p + 1;
        for (;;) {
          if (q >= text.size()) throw DataError("unterminated quoted cell on line " + std::to_string(rec.line));
          if (text[q] == '"') {
            if (q + 1 < text.size() && text[q + 1] == '"') {
              cell += '"';
              q += 2;
              continue;
            }
            ++q;
            break;
          }
          if (text[q] == '\n') ++line;
          cell += text[q++];
        }
        while (q < text.size() && blank(text[q])) ++q;
        if (q < text.size() && text[q] != ',' && text[q] != '\n')
          throw DataError("garbage after quoted cell on line " + std::to_string(line));
        i = q;
      } else {
        std::size_t q = p;
        while (q < text.size() && text[q] != ',' && text[q] != '\n') ++q;
        cell = trim(text.substr(p, q - p));
        if (!cell.empty()) any_content = true;
        i = q;
      }
      rec.cells.push_back(std::move(cell));
      if (i < text.size() && text[i] == ',') {
        any_content = true;
        ++i;
        continue;
      }
      break;
    }
    if (i < text.size() && text[i] == '\n') {
      ++i;
      ++line;
    }
    if (any_content) out.push_back(std::move(rec));
  }
  return out;
}

std::string escape(std::string_view cell) {
  bool needs = cell.empty() || blank(cell.front()) || blank(cell.back()) || cell.front() == '"';
  for (char c : cell)
    if (c == ',' || c == '"' || c == '\n') needs = true;
  if (!needs) return std::string(cell);
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string join(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += escape(cells[i]);
  }
  return out;
}

}  // namespace cqrelax::csv
