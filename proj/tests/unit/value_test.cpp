#include <gtest/gtest.h>

#include "cqrelax/csv.hpp"
#include "cqrelax/error.hpp"
#include "cqrelax/value.hpp"

namespace cqrelax {
namespace {

TEST(Rational, ParsesIntegersDecimalsAndFractions) {
  EXPECT_EQ(Rational::parse("12"), Rational(12));
  EXPECT_EQ(Rational::parse("-3.25"), Rational(-13, 4));
  EXPECT_EQ(Rational::parse("7/8"), Rational(7, 8));
  EXPECT_EQ(Rational::parse("0.10"), Rational(1, 10));
  EXPECT_FALSE(Rational::parse(""));
  EXPECT_FALSE(Rational::parse("1.2.3"));
  EXPECT_FALSE(Rational::parse("abc"));
  EXPECT_FALSE(Rational::parse("1/0"));
}

TEST(Rational, NormalizesSignAndGcd) {
  Rational r(6, -4);
  EXPECT_EQ(r.num(), -3);
  EXPECT_EQ(r.den(), 2);
  EXPECT_EQ(Rational(0, 5), Rational(0));
}

TEST(Rational, ArithmeticIsExact) {
  Rational a(1, 3), b(1, 6);
  EXPECT_EQ(a + b, Rational(1, 2));
  EXPECT_EQ(a - b, Rational(1, 6));
  EXPECT_EQ(a * b, Rational(1, 18));
  EXPECT_EQ(a / b, Rational(2));
  EXPECT_THROW(a / Rational(0), Error);
  EXPECT_LT(Rational(-1, 2), Rational(1, 3));
}

TEST(Rational, RendersDecimalWhenTerminating) {
  EXPECT_EQ(Rational(1, 4).str(), "0.25");
  EXPECT_EQ(Rational(-5, 2).str(), "-2.5");
  EXPECT_EQ(Rational(1000).str(), "1000");
  EXPECT_EQ(Rational(1, 3).str(), "1/3");
}

TEST(Value, NumbersSortBeforeSymbols) {
  EXPECT_LT(Value::number(1000), Value("Apple"));
  EXPECT_LT(Value::number(2), Value::number(10));
  EXPECT_LT(Value("Apple"), Value("apple"));
  EXPECT_NE(Value("Flu"), Value("flu"));
}

TEST(Csv, HandlesQuotesAndBlankLines) {
  auto recs = csv::parse("a,b\n\n\"x, y\",\"say \"\"hi\"\"\"\n  z  , w\n");
  ASSERT_EQ(recs.size(), 3u);
  EXPECT_EQ(recs[1].cells, (std::vector<std::string>{"x, y", "say \"hi\""}));
  EXPECT_EQ(recs[1].line, 3u);
  EXPECT_EQ(recs[2].cells, (std::vector<std::string>{"z", "w"}));
}

TEST(Csv, EscapeRoundTrips) {
  std::vector<std::string> cells{"plain", "a,b", "quote\"d", " padded "};
  auto recs = csv::parse(csv::join(cells));
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(recs[0].cells, cells);
}

TEST(Csv, UnterminatedQuoteIsAnError) { EXPECT_THROW(csv::parse("\"open,b\n"), DataError); }

}  // namespace
}  // namespace cqrelax
