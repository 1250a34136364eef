#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace qmc {

using i128 = __int128;
using u128 = unsigned __int128;

// Exact rational with 64-bit numerator and positive denominator, always in
// lowest terms. Arithmetic is carried in 128 bits and throws Errc::Overflow if
// the reduced result does not fit.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num) : num_(num) {}  // NOLINT: implicit from integers
  Rational(std::int64_t num, std::int64_t den);

  static Rational from_wide(i128 num, i128 den);
  // Parses "u", "-u", "u/v".
  static Rational parse(std::string_view text);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }
  bool is_integer() const noexcept { return den_ == 1; }
  bool is_zero() const noexcept { return num_ == 0; }

  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string to_string() const;

  // Largest integer <= this.
  std::int64_t floor() const noexcept;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const;

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

// Integer helpers shared across modules.
std::int64_t gcd64(std::int64_t a, std::int64_t b) noexcept;
i128 gcd128(i128 a, i128 b) noexcept;
std::int64_t narrow_checked(i128 v);
std::uint64_t checked_pow(std::uint64_t base, unsigned exp);
std::string to_string_u128(u128 v);

}  // namespace qmc
