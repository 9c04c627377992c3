#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace cqrelax::csv {

/// One parsed record with the 1-based line it started on.
struct Record {
  std::vector<std::string> cells;
  std::size_t line = 0;
};

/// Comma separated, double-quoted cells may embed commas, quotes ("") and
/// newlines. Unquoted cells are trimmed of surrounding blanks. Blank lines
/// are skipped.
std::vector<Record> parse(std::string_view text);

/// Quotes a cell only when it would not survive `parse` unquoted.
std::string escape(std::string_view cell);

std::string join(const std::vector<std::string>& cells);

}  // namespace cqrelax::csv
