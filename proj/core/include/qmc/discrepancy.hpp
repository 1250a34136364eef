#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qmc/badic.hpp"
#include "qmc/rational.hpp"

namespace qmc {

class BijectionFamily;
class DigitalPoint;
class IndexSequence;
struct MatrixSet;
struct TProfile;

using RationalPoint = std::vector<Rational>;

inline constexpr std::size_t kMaxExactPoints2d = 5000;
inline constexpr std::size_t kMaxExactPoints3d = 500;

struct DiscrepancyResult {
  std::uint64_t N = 0;
  Rational value;
  double value_float = 0.0;
  // Anchored box attaining the sup: [0, corner] when closed, [0, corner) otherwise.
  // A closed box stands for the limit of [0, corner + eps).
  RationalPoint corner;
  bool closed = false;
};

// A(J)/N - vol(J) for J = [0, corner] (closed) or [0, corner) (open).
Rational local_discrepancy(const std::vector<RationalPoint>& points, const RationalPoint& corner, bool closed);

DiscrepancyResult star_discrepancy_1d(const std::vector<Rational>& points);

// Exact D*_N for s <= 3 over the grid of coordinate values and 1.
DiscrepancyResult star_discrepancy_exact(const std::vector<RationalPoint>& points);

std::vector<RationalPoint> to_rational_points(const std::vector<DigitalPoint>& points);

// b^t sum_{i<s} C(s-1,i) C(m-t,i) floor(b/2)^i, for b > 2.
std::uint64_t delta_bound(std::uint32_t b, std::size_t t, std::size_t m, std::size_t s);

struct BoundTerm {
  enum class Part { Head, Middle, Tail };
  Part part = Part::Head;
  std::size_t j = 0;
  std::uint64_t coefficient = 0;  // q - a_0, q - 1 - a_j, or b_j
  std::uint64_t delta = 0;        // Delta_q(T(j), j, s)
  std::uint64_t value = 0;
};

struct BoundBreakdown {
  std::uint64_t N = 0;
  std::size_t r = 0;
  std::vector<Digit> alpha_digits;  // a_0..a_r
  std::uint64_t N_prime = 0;
  std::vector<Digit> N_prime_digits;  // b_0..b_r
  std::vector<BoundTerm> terms;
  std::uint64_t total = 0;
};

BoundBreakdown prop2_bound(const BAdicStream& alpha, const TProfile& T, std::uint32_t q, std::size_t s,
                           std::uint64_t N);

std::string to_json(const BoundBreakdown& b);

struct BoundRow {
  std::uint64_t N = 0;
  Rational nd;     // N * D*_N of the truncated points
  Rational slack;  // N s b^-precision: how far truncation can move nd
  std::uint64_t bound = 0;
  bool within = false;  // nd + slack <= bound
};

struct BoundTable {
  std::size_t precision = 0;  // digits per coordinate used for the exact D*
  std::vector<BoundRow> rows;
  bool all_within() const;
};

// Sequence s_n = n + alpha with alpha = s_0; points truncated at `precision`
// digits (0: the matrices' depth).
BoundTable empirical_vs_bound(const MatrixSet& set, const BijectionFamily& bij, const IndexSequence& seq,
                              const std::vector<std::uint64_t>& N_list, std::size_t precision = 0,
                              unsigned threads = 1);

// Columns N, ND*_exact, ND*_float, bound, ratio.
void write_bound_csv(std::ostream& os, const BoundTable& table);

}  // namespace qmc
