#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "qmc/field.hpp"
#include "qmc/genmatrix.hpp"
#include "qmc/inputseq.hpp"
#include "qmc/rational.hpp"

namespace qmc {

using Permutation = std::vector<std::uint32_t>;

/**
 * The bijections psi_r : Z_b -> F_q (digit to element) and
 * lambda_{i,j} : F_q -> Z_b (element to digit), as permutation tables of
 * 0..q-1. Any psi_r or lambda_{i,j} not listed is the identity.
 */
class BijectionFamily {
 public:
  BijectionFamily() = default;
  BijectionFamily(std::vector<Permutation> psi, std::vector<std::vector<Permutation>> lambda);

  static BijectionFamily identity() { return {}; }

  FqElem psi(std::size_t r, Digit a) const noexcept {
    return r < psi_.size() ? psi_[r][a] : a;
  }
  Digit lambda(std::size_t i, std::size_t j, FqElem y) const noexcept {
    return i < lambda_.size() && j < lambda_[i].size() ? lambda_[i][j][y] : y;
  }

  // Every table is a permutation of 0..q-1.
  void validate(std::uint32_t q) const;
  // Smallest R0 with psi_r(0) = 0 for all r >= R0.
  std::size_t psi_zero_from() const noexcept;

  const std::vector<Permutation>& psi_tables() const noexcept { return psi_; }
  const std::vector<std::vector<Permutation>>& lambda_tables() const noexcept { return lambda_; }

 private:
  std::vector<Permutation> psi_;                   // indexed by r
  std::vector<std::vector<Permutation>> lambda_;  // indexed by i (0-based), then j (0-based)
};

// {"psi": [[...], ...], "lambda": [[[...], ...], ...]}
BijectionFamily bijections_from_json(std::string_view text);
std::string bijections_to_json(const BijectionFamily& bij);
BijectionFamily load_bijections(const std::string& path);

/// One point [x_n]_{b,m} as an s x m digit matrix: digit(i, j) is the
/// (j+1)-th base-b digit of coordinate i, most significant first.
class DigitalPoint {
 public:
  DigitalPoint() = default;
  DigitalPoint(std::uint64_t index, std::uint32_t base, std::size_t s, std::size_t m)
      : index_(index), base_(base), s_(s), m_(m), digits_(s * m, 0) {}

  std::uint64_t index() const noexcept { return index_; }
  std::uint32_t base() const noexcept { return base_; }
  std::size_t s() const noexcept { return s_; }
  std::size_t m() const noexcept { return m_; }

  Digit digit(std::size_t i, std::size_t j) const noexcept { return digits_[i * m_ + j]; }
  void set_digit(std::size_t i, std::size_t j, Digit d) noexcept { digits_[i * m_ + j] = d; }
  const std::vector<Digit>& digits() const noexcept { return digits_; }

  // First m' <= m digits of every coordinate.
  DigitalPoint truncated(std::size_t m) const;

  friend bool operator==(const DigitalPoint&, const DigitalPoint&) = default;

 private:
  std::uint64_t index_ = 0;
  std::uint32_t base_ = 2;
  std::size_t s_ = 0, m_ = 0;
  std::vector<Digit> digits_;
};

// Digit (i, j) = lambda_{i,j}( sum_{r < L_j} c^{(i)}_{j,r} psi_r(a_r) ), a_r the
// b-adic digits of s_n. Only the first max L_j digits of s_n are read.
DigitalPoint generate_point(const MatrixSet& set, const BijectionFamily& bij, const IndexSequence& seq,
                            std::uint64_t n, std::size_t m);

// Classical route for s_n = n from the base-b expansion of n, summing over
// r < max(#digits(n), R0) with psi_r(0) = 0 for r >= R0.
DigitalPoint generate_point_classical(const MatrixSet& set, const BijectionFamily& bij, std::uint64_t n,
                                      std::size_t m);

// Points n_start .. n_start + count - 1, in index order for any thread count.
std::vector<DigitalPoint> generate_block(const MatrixSet& set, const BijectionFamily& bij, const IndexSequence& seq,
                                         std::uint64_t n_start, std::uint64_t count, std::size_t m,
                                         unsigned threads = 1);

// Integer a with coordinate i equal to a / b^m.
std::uint64_t point_numerator(const DigitalPoint& p, std::size_t i);
Rational point_to_rational(const DigitalPoint& p, std::size_t i);
double point_to_float(const DigitalPoint& p, std::size_t i);
// Shortest text that reads back as the same double.
std::string format_double(double x);

enum class ExportMode { Exact, Float };

// CSV: header "n,x1,...,xs"; exact cells are "a/b^m" with the power written out.
void write_points_csv(std::ostream& os, const std::vector<DigitalPoint>& points, ExportMode mode);
// {"base","s","m","points":[{"n","digits":[[...]...]}]}
std::string points_to_json(const std::vector<DigitalPoint>& points);

}  // namespace qmc
