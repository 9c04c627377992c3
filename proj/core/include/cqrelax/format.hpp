#pragma once

#include <string>

#include "cqrelax/spj.hpp"

namespace cqrelax {

enum class OutputFormat { Text, Csv };

OutputFormat parse_format(std::string_view name);

/// Degree rendered with 4 decimals, e.g. `0.9000`.
std::string format_degree(double d);

/// Aligned columns separated by ` | ` with a dashed rule under the header.
/// Degrees, when present, add a trailing `#sim` column.
std::string render_text(const AnswerTable& table);

/// Header plus one line per row; `#sim` column when degrees are present.
std::string render_csv(const AnswerTable& table);

std::string render_table(const AnswerTable& table, OutputFormat format);

}  // namespace cqrelax
