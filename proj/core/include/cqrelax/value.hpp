#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cqrelax {

/// Exact rational number, always normalized (den > 0, gcd(num, den) == 1).
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  /// Accepts `12`, `-3.25` and `7/8`. Returns nullopt on anything else.
  static std::optional<Rational> parse(std::string_view text);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }

  double to_double() const noexcept;

  /// Terminating decimals render as decimals, everything else as `p/q`.
  std::string str() const;

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;
  Rational abs() const { return num_ < 0 ? Rational(-num_, den_) : *this; }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

enum class ValueKind { Numeric, Symbolic };

/// A database constant: case-sensitive text or an exact rational.
class Value {
 public:
  Value() : data_(std::string{}) {}
  Value(Rational r) : data_(r) {}
  Value(std::string s) : data_(std::move(s)) {}
  Value(const char* s) : data_(std::string(s)) {}

  static Value number(std::int64_t n, std::int64_t d = 1) { return Value(Rational(n, d)); }

  ValueKind kind() const noexcept {
    return data_.index() == 0 ? ValueKind::Numeric : ValueKind::Symbolic;
  }
  bool is_numeric() const noexcept { return kind() == ValueKind::Numeric; }
  bool is_symbolic() const noexcept { return kind() == ValueKind::Symbolic; }

  const Rational& numeric() const { return std::get<Rational>(data_); }
  const std::string& symbolic() const { return std::get<std::string>(data_); }

  /// Plain text: the symbol itself, or the canonical number rendering.
  std::string str() const;

  friend bool operator==(const Value&, const Value&) = default;
  /// Numbers sort before symbols; numbers by magnitude, symbols bytewise.
  friend std::strong_ordering operator<=>(const Value& a, const Value& b);

 private:
  std::variant<Rational, std::string> data_;
};

using Row = std::vector<Value>;

/// Closed interval [lo, hi] with lo < hi.
struct Interval {
  Rational lo;
  Rational hi;

  bool contains(const Rational& v) const { return lo <= v && v <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

struct ValueHash {
  std::size_t operator()(const Value& v) const noexcept;
};

struct RowHash {
  std::size_t operator()(const Row& row) const noexcept;
};

}  // namespace cqrelax

template <>
struct std::hash<cqrelax::Value> {
  std::size_t operator()(const cqrelax::Value& v) const noexcept {
    return cqrelax::ValueHash{}(v);
  }
};
