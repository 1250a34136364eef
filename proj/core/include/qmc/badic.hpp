#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "qmc/rational.hpp"

namespace qmc {

using Digit = std::uint32_t;

/**
 * A b-adic integer as a digit source, least significant digit first: digit(r)
 * is the coefficient of b^r.
 *
 * Periodic streams hold a rational u/v with gcd(v, b) = 1 (integers included).
 * Digits are expanded on demand; the canonical eventually periodic form (the
 * shortest preperiod followed by the shortest repeating block) is built on
 * first request, since the period can be as long as the order of b mod v.
 * Procedural streams wrap a generator and memoize every digit it produces.
 *
 * Copies share state. Digit queries are safe from multiple threads.
 */
class BAdicStream {
 public:
  enum class Kind { Periodic, Procedural };

  // Generators are called exactly once per index, in order r = 0, 1, 2, ...
  // so they may carry state (a running carry, for instance).
  using Generator = std::function<Digit(std::size_t r)>;

  static BAdicStream procedural(std::uint32_t base, Generator gen);

  std::uint32_t base() const noexcept { return base_; }
  Kind kind() const noexcept { return periodic_ ? Kind::Periodic : Kind::Procedural; }
  bool is_periodic() const noexcept { return periodic_ != nullptr; }

  Digit digit(std::size_t r) const;
  std::vector<Digit> digits(std::size_t count) const;

  // Periodic streams only (InvalidArgument otherwise).
  const Rational& value() const;
  const std::vector<Digit>& preperiod() const;
  const std::vector<Digit>& period() const;

 private:
  friend BAdicStream rational_digits(std::int64_t u, std::int64_t v, std::uint32_t b);
  friend BAdicStream negate(const BAdicStream& x);

  // Canonicalizes (shortest period, then shortest preperiod) before storing.
  static BAdicStream from_parts(std::uint32_t base, Rational value, std::vector<Digit> pre,
                                std::vector<Digit> per);

  struct PeriodicRep {
    Rational value;
    std::mutex mu;
    std::vector<Digit> memo;  // digits expanded so far
    i128 state = 0;           // remaining value is state / value.den()
    bool canonical = false;   // preperiod/period filled and final
    std::vector<Digit> preperiod;
    std::vector<Digit> period;

    void ensure_canonical(std::uint32_t b);
  };
  struct ProceduralRep {
    Generator gen;
    std::mutex mu;
    std::vector<Digit> memo;
  };

  std::uint32_t base_ = 2;
  std::shared_ptr<PeriodicRep> periodic_;
  std::shared_ptr<ProceduralRep> procedural_;
};

struct PseudoValuation {
  // |a|_b = b^exponent; exponent is meaningless when is_zero.
  Rational exponent;
  bool is_zero = false;
};

BAdicStream integer_digits(std::uint64_t n, std::uint32_t b);
// u/v in Z_b; throws NotBAdicInteger unless gcd(v, b) = 1.
BAdicStream rational_digits(std::int64_t u, std::int64_t v, std::uint32_t b);
inline BAdicStream rational_digits(const Rational& x, std::uint32_t b) {
  return rational_digits(x.num(), x.den(), b);
}

// tau_k(x) = sum_{i<k} a_i b^i. Throws Overflow if b^k exceeds 128 bits.
u128 truncate(const BAdicStream& x, std::size_t k);

// Digit-level negation: -n = (b - a_r) b^r + sum_{i>r} (b-1-a_i) b^i, r the
// index of the first nonzero digit.
BAdicStream negate(const BAdicStream& x);

BAdicStream add(const BAdicStream& x, const BAdicStream& y);
BAdicStream mul_small(const BAdicStream& x, std::int64_t c);

bool is_unit(const BAdicStream& x);
// Requires a Periodic unit.
BAdicStream unit_inverse(const BAdicStream& x);

PseudoValuation pseudo_valuation(std::int64_t u, std::int64_t v, std::uint32_t b);

// Checks the block M = {-n : k b^l < n <= (k+1) b^l}: shared digits from index l
// on, and the first l digits run through all b^l values.
bool negative_block_check(std::uint64_t k, unsigned l, std::uint32_t b);

// Whether x and y agree at every index >= from. Both must be Periodic.
bool tails_agree_from(const BAdicStream& x, const BAdicStream& y, std::size_t from);

// Prime factorisation of b as (prime, multiplicity) pairs, ascending.
std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n);

}  // namespace qmc
