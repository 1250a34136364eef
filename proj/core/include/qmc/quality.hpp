#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qmc/field.hpp"
#include "qmc/genmatrix.hpp"
#include "qmc/rational.hpp"

namespace qmc {

class BijectionFamily;
class DigitalPoint;
class IndexSequence;

// Rank over GF(q) of the rows restricted to their first `columns` entries.
std::size_t rank_gf(const FieldSpec& field, const std::vector<Row>& rows, std::size_t columns);

struct Condition1Result {
  bool holds = true;
  std::vector<std::size_t> witness;  // failing (d_1, ..., d_s), empty when holds
};

// Rank condition on the top layer d_1 + ... + d_s = k with m columns.
// Compositions are enumerated lexicographically; the first failure is reported.
Condition1Result check_condition1(const MatrixSet& set, std::size_t m, std::size_t k);

struct TProfile {
  std::size_t m_max = 0;
  std::vector<std::size_t> T;                                 // T[m] for m = 0..m_max
  std::vector<std::optional<std::vector<std::size_t>>> witness;  // composition blocking T[m] - 1

  std::size_t t() const;  // max_m T(m)
};

// T(m) = m - max{k <= m : condition 1 holds at (m, k)}.
TProfile t_profile(const MatrixSet& set, std::size_t m_max);

// Rows 1..d_i of every matrix, over the union of their supports, are
// linearly independent (a single check at d_i = bound_i).
bool check_condition2(const MatrixSet& set, const std::vector<std::size_t>& d_bounds);

struct ElementaryInterval {
  std::vector<std::size_t> d;    // per-coordinate depth
  std::vector<std::uint64_t> a;  // interval [a_i / b^d_i, (a_i+1) / b^d_i)
};

struct NetFailure {
  ElementaryInterval interval;
  std::uint64_t observed = 0;
  std::uint64_t expected = 0;
};

struct NetReport {
  std::size_t t = 0, m = 0, s = 0;
  std::uint32_t b = 0;
  std::uint64_t k = 0;  // block index
  bool pass = false;
  bool vacuous = false;  // t == m: a single interval, nothing to check
  std::optional<NetFailure> first_failure;
};

// Exhaustive (t,m,s)-net check of b^m points by digit-prefix bucketing.
NetReport verify_net(const std::vector<DigitalPoint>& points, std::size_t t, std::size_t m, std::uint64_t k = 0);

// Smallest t for which verify_net passes.
std::size_t minimal_net_t(const std::vector<DigitalPoint>& points, std::size_t m);

// Blocks [k b^m, (k+1) b^m) for k in [k_first, k_last], each checked as a
// (T(m), m, s)-net with T(m) from `profile` (computed when absent).
std::vector<NetReport> verify_T_sequence(const MatrixSet& set, const BijectionFamily& bij, const IndexSequence& seq,
                                         std::size_t m, std::uint64_t k_first, std::uint64_t k_last,
                                         const std::optional<TProfile>& profile = std::nullopt,
                                         unsigned threads = 1);

// max over the b^{d_1+...+d_s} intervals of |count/N - vol|.
Rational elementary_frequency_deviation(const std::vector<DigitalPoint>& points, const std::vector<std::size_t>& d);

std::string to_json(const TProfile& profile);
std::string to_json(const NetReport& report);
std::string to_json(const std::vector<NetReport>& reports);

}  // namespace qmc
