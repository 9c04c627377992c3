#include "cqrelax/value.hpp"

#include <charconv>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <tuple>
#include <utility>

#include "cqrelax/error.hpp"

namespace cqrelax {
namespace {

__extension__ using wide = __int128;

std::pair<std::int64_t, std::int64_t> reduce(wide num, wide den) {
  if (den == 0) throw Error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  wide a = num < 0 ? -num : num;
  wide b = den;
  while (b != 0) {
    wide t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    num /= a;
    den /= a;
  }
  constexpr wide lo = std::numeric_limits<std::int64_t>::min();
  constexpr wide hi = std::numeric_limits<std::int64_t>::max();
  if (num < lo || num > hi || den > hi) throw Error("rational overflow");
  return {static_cast<std::int64_t>(num), static_cast<std::int64_t>(den)};
}

Rational from_wide(wide num, wide den) {
  auto [n, d] = reduce(num, den);
  return Rational(n, d);
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  if (s.empty()) return std::nullopt;
  std::int64_t out = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return out;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  std::tie(num_, den_) = reduce(num, den);
}

std::optional<Rational> Rational::parse(std::string_view text) {
  if (text.empty()) return std::nullopt;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto n = parse_int(text.substr(0, slash));
    auto d = parse_int(text.substr(slash + 1));
    if (!n || !d || *d == 0 || !all_digits(text.substr(slash + 1))) return std::nullopt;
    return Rational(*n, *d);
  }
  bool negative = text.front() == '-';
  std::string_view body = negative ? text.substr(1) : text;
  auto dot = body.find('.');
  std::string_view whole = body.substr(0, dot);
  std::string_view frac = dot == std::string_view::npos ? std::string_view{} : body.substr(dot + 1);
  if (!all_digits(whole)) return std::nullopt;
  if (dot != std::string_view::npos && !all_digits(frac)) return std::nullopt;
  if (whole.size() + frac.size() > 18) return std::nullopt;
  std::string digits(whole);
  digits += frac;
  auto n = parse_int(digits);
  if (!n) return std::nullopt;
  std::int64_t den = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  return Rational(negative ? -*n : *n, den);
}

double Rational::to_double() const noexcept {
  return static_cast<double>(num_) / static_cast<double>(den_);
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  std::int64_t d = den_;
  int twos = 0, fives = 0;
  while (d % 2 == 0) { d /= 2; ++twos; }
  while (d % 5 == 0) { d /= 5; ++fives; }
  if (d != 1) return std::to_string(num_) + "/" + std::to_string(den_);
  int places = std::max(twos, fives);
  wide scale = 1;
  for (int i = 0; i < places; ++i) scale *= 10;
  wide scaled = static_cast<wide>(num_) * (scale / den_);
  bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  wide int_part = scaled / scale;
  wide frac_part = scaled % scale;
  std::string frac = std::to_string(static_cast<long long>(frac_part));
  frac.insert(0, static_cast<std::size_t>(places) - frac.size(), '0');
  return (negative ? "-" : "") + std::to_string(static_cast<long long>(int_part)) + "." + frac;
}

Rational Rational::operator+(const Rational& o) const {
  return from_wide(static_cast<wide>(num_) * o.den_ + static_cast<wide>(o.num_) * den_,
                   static_cast<wide>(den_) * o.den_);
}

Rational Rational::operator-(const Rational& o) const {
  return from_wide(static_cast<wide>(num_) * o.den_ - static_cast<wide>(o.num_) * den_,
                   static_cast<wide>(den_) * o.den_);
}

Rational Rational::operator*(const Rational& o) const {
  return from_wide(static_cast<wide>(num_) * o.num_, static_cast<wide>(den_) * o.den_);
}

Rational Rational::operator/(const Rational& o) const {
  return from_wide(static_cast<wide>(num_) * o.den_, static_cast<wide>(den_) * o.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  return static_cast<wide>(a.num_) * b.den_ <=> static_cast<wide>(b.num_) * a.den_;
}

std::string Value::str() const {
  return is_numeric() ? numeric().str() : symbolic();
}

std::strong_ordering operator<=>(const Value& a, const Value& b) {
  if (a.data_.index() != b.data_.index()) return a.data_.index() <=> b.data_.index();
  if (a.is_numeric()) return a.numeric() <=> b.numeric();
  return a.symbolic().compare(b.symbolic()) <=> 0;
}

std::size_t ValueHash::operator()(const Value& v) const noexcept {
  if (v.is_numeric()) {
    std::size_t h = std::hash<std::int64_t>{}(v.numeric().num());
    return h ^ (std::hash<std::int64_t>{}(v.numeric().den()) * 0x9e3779b97f4a7c15ULL);
  }
  return std::hash<std::string>{}(v.symbolic()) ^ 0x5bd1e995;
}

std::size_t RowHash::operator()(const Row& row) const noexcept {
  std::size_t h = row.size();
  for (const auto& v : row) h = h * 1000003u ^ ValueHash{}(v);
  return h;
}

}  // namespace cqrelax
