#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cqrelax {

/// Base of every error raised by the engine. The CLI maps it to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed query, rule, schema or configuration text.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error(message + " (at offset " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Data that cannot be loaded or does not fit its schema.
class DataError : public Error {
 public:
  using Error::Error;
};

/// A query that is syntactically fine but does not fit the database.
class QueryError : public Error {
 public:
  using Error::Error;
};

}  // namespace cqrelax
