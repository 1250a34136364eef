#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qmc/badic.hpp"
#include "qmc/rational.hpp"

namespace qmc {

/**
 * Index sequence (s_n)_{n>=0} in Z_b, evaluated exactly as digit streams.
 *
 * Parameters that are b-adic integers are held as streams; the Affine,
 * Quadratic and RationalAffine families stay Periodic whenever their
 * parameters are, so s_n is then carried as an exact rational.
 */
class IndexSequence {
 public:
  enum class Kind { Natural, NegativeShifted, Alternating, Affine, RationalAffine, Quadratic, Beatty, Custom };
  using Callback = std::function<BAdicStream(std::uint64_t n)>;

  static IndexSequence natural(std::uint32_t b);
  // s_n = -n - 1
  static IndexSequence negative_shifted(std::uint32_t b);
  // s_n = (-1)^n floor((n+1)/2)
  static IndexSequence alternating(std::uint32_t b);
  // s_n = a n + c
  static IndexSequence affine(BAdicStream a, BAdicStream c);
  // s_n = n / v + alpha, gcd(v, b) = 1
  static IndexSequence rational_affine(std::int64_t v, BAdicStream alpha);
  // s_n = a n^2 + c n + d
  static IndexSequence quadratic(BAdicStream a, BAdicStream c, BAdicStream d);
  // s_n = floor(p n / q); the surrogate p/q is trusted for n <= nmax only.
  static IndexSequence beatty(std::int64_t p, std::int64_t q, std::uint64_t nmax, std::uint32_t b);
  static IndexSequence custom(std::uint32_t b, Callback fn, std::string label = "custom");

  std::uint32_t base() const noexcept { return base_; }
  Kind kind() const noexcept { return kind_; }

  BAdicStream eval(std::uint64_t n) const;

  // Subsequence n -> s_{stride*n + offset}, as a Custom sequence.
  IndexSequence subsequence(std::uint64_t stride, std::uint64_t offset) const;

  // Spec-grammar string for the built-in kinds; "custom:<label>" otherwise.
  std::string to_spec() const;

  // Parameter access (empty when the kind has no such parameter).
  const std::vector<BAdicStream>& params() const noexcept { return params_; }
  std::int64_t denominator() const noexcept { return v_; }

 private:
  IndexSequence(Kind k, std::uint32_t b) : kind_(k), base_(b) {}

  Kind kind_;
  std::uint32_t base_;
  std::vector<BAdicStream> params_;  // Affine: a,c; RationalAffine: alpha; Quadratic: a,c,d
  std::int64_t v_ = 1;
  std::int64_t beatty_p_ = 0, beatty_q_ = 1;
  std::uint64_t nmax_ = 0;
  std::shared_ptr<const Callback> custom_;
  std::string label_;
};

enum class UdVerdict { UD, NotUD, Unknown };
std::string_view to_string(UdVerdict v) noexcept;

// The verdict the theory gives for a family, where it gives one.
UdVerdict is_ud_expected(const IndexSequence& seq);

struct UdReport {
  unsigned depth = 0;
  std::uint64_t samples = 0;
  std::vector<std::uint64_t> histogram;  // counts of tau_k(s_n) for n < N
  Rational deviation;                    // max_a |count_a / N - b^-k|
};

// Histogram of tau_k(s_n) mod b^k over n < N. Requires b^k <= 10^6, N >= b^k.
UdReport empirical_ud_test(const IndexSequence& seq, unsigned k, std::uint64_t samples);

/**
 * Parses the sequence grammar
 *
 *   natural | neg | alt | paper-ex2c
 *   affine:a=<r>,c=<r>
 *   rat:v=<int>,alpha=<r>
 *   quad:a=<r>,c=<r>,d=<r>
 *   beatty:p=<int>,q=<int>,nmax=<int>
 *
 * where <r> is an integer or u/v in lowest terms. All parameters are
 * b-adic integers; their digits are produced least significant first.
 * paper-ex2c is s_n = (2n-1)/4, i.e. affine:a=1/2,c=-1/4.
 */
IndexSequence parse_sequence_spec(std::string_view spec, std::uint32_t b);

}  // namespace qmc
