#include <gtest/gtest.h>

#include <random>

#include <boost/multiprecision/cpp_int.hpp>

#include "qmc/error.hpp"
#include "qmc/rational.hpp"

using namespace qmc;
using boost::multiprecision::cpp_rational;

namespace {

cpp_rational big(const Rational& r) { return cpp_rational(r.num(), r.den()); }

}  // namespace

TEST(Rational, LowestTermsAndSign) {
  Rational r(6, -4);
  EXPECT_EQ(r.num(), -3);
  EXPECT_EQ(r.den(), 2);
  EXPECT_EQ(Rational(0, 7), Rational(0));
  EXPECT_EQ(Rational::parse("-12/8"), Rational(-3, 2));
  EXPECT_EQ(Rational::parse("5"), Rational(5));
  EXPECT_EQ(Rational(7, 2).floor(), 3);
  EXPECT_EQ(Rational(-7, 2).floor(), -4);
  EXPECT_EQ(Rational(-7, 2).to_string(), "-7/2");
}

TEST(Rational, ParseRejectsGarbage) {
  for (const char* bad : {"", "1/", "/3", "a", "1/0", "1.5", "2/-3"}) EXPECT_THROW(Rational::parse(bad), Error) << bad;
}

TEST(Rational, ArithmeticMatchesBigRationalOracle) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> num(-100000, 100000), den(1, 100000);
  for (int i = 0; i < 5000; ++i) {
    Rational a(num(rng), den(rng)), b(num(rng), den(rng));
    ASSERT_EQ(big(a + b), big(a) + big(b));
    ASSERT_EQ(big(a - b), big(a) - big(b));
    ASSERT_EQ(big(a * b), big(a) * big(b));
    if (!b.is_zero()) ASSERT_EQ(big(a / b), big(a) / big(b));
    ASSERT_EQ(a < b, big(a) < big(b));
  }
}

TEST(Rational, OverflowIsReported) {
  Rational big_value(INT64_MAX / 2);
  try {
    (void)(big_value * Rational(4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::Overflow);
  }
  EXPECT_THROW((void)(Rational(1) / Rational(0)), Error);
  EXPECT_THROW(checked_pow(10, 20), Error);
  EXPECT_EQ(checked_pow(3, 20), 3486784401ull);
}
