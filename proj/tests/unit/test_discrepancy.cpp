#include <gtest/gtest.h>

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "qmc/discrepancy.hpp"
#include "qmc/engine.hpp"
#include "qmc/error.hpp"
#include "qmc/quality.hpp"

using namespace qmc;
using Big = boost::multiprecision::cpp_rational;

namespace {

Big big(const Rational& r) { return Big(r.num(), r.den()); }

// Every corner of the grid (coordinate values and 1), open and closed counts.
Big brute_star(const std::vector<RationalPoint>& pts) {
  const std::size_t s = pts.front().size();
  std::vector<std::vector<Big>> grid(s);
  for (std::size_t i = 0; i < s; ++i) {
    std::set<Big> vals{Big(1)};
    for (const auto& p : pts) vals.insert(big(p[i]));
    grid[i].assign(vals.begin(), vals.end());
  }
  const Big n(static_cast<long long>(pts.size()));
  Big best = 0;
  std::vector<std::size_t> idx(s, 0);
  while (true) {
    Big vol = 1;
    for (std::size_t i = 0; i < s; ++i) vol *= grid[i][idx[i]];
    long long open = 0, closed = 0;
    for (const auto& p : pts) {
      bool in_open = true, in_closed = true;
      for (std::size_t i = 0; i < s; ++i) {
        const Big x = big(p[i]);
        in_open = in_open && x < grid[i][idx[i]];
        in_closed = in_closed && x <= grid[i][idx[i]];
      }
      open += in_open;
      closed += in_closed;
    }
    best = std::max({best, Big(closed) / n - vol, vol - Big(open) / n});
    std::size_t k = 0;
    while (k < s && ++idx[k] == grid[k].size()) idx[k++] = 0;
    if (k == s) return best;
  }
}

std::vector<RationalPoint> random_points(std::mt19937_64& rng, std::size_t n, std::size_t s, std::int64_t den) {
  std::vector<RationalPoint> pts(n, RationalPoint(s));
  for (auto& p : pts)
    for (auto& x : p) x = Rational(static_cast<std::int64_t>(rng() % (den + 1)), den);
  return pts;
}

MatrixSet identity_set(std::uint32_t b, std::size_t s, std::size_t depth) {
  return make_matrix_set(std::vector<GeneratingMatrix>(s, identity_matrix(make_field(b), depth)));
}

}  // namespace

TEST(Discrepancy, OneDimensionalExamples) {
  EXPECT_EQ(star_discrepancy_1d({0}).value, Rational(1));
  EXPECT_EQ(star_discrepancy_1d({0, Rational(1, 2), Rational(1, 4), Rational(3, 4)}).value, Rational(1, 4));
  EXPECT_EQ(star_discrepancy_1d({Rational(1, 2)}).value, Rational(1, 2));
  EXPECT_EQ(star_discrepancy_1d({1}).value, Rational(1));
  EXPECT_THROW(star_discrepancy_1d({Rational(3, 2)}), Error);
  EXPECT_THROW(star_discrepancy_1d({}), Error);
}

TEST(Discrepancy, ExactExamples) {
  EXPECT_EQ(star_discrepancy_exact({{0, 0}}).value, Rational(1));
  auto pts = to_rational_points(generate_block(identity_set(2, 2, 4), {}, IndexSequence::natural(2), 0, 4, 4));
  auto r = star_discrepancy_exact(pts);
  EXPECT_EQ(big(r.value), brute_star(pts));
  EXPECT_EQ(r.N, 4u);
}

TEST(Discrepancy, WitnessReproducesValue) {
  std::mt19937_64 rng(5);
  for (std::size_t s = 1; s <= 3; ++s)
    for (int trial = 0; trial < 30; ++trial) {
      auto pts = random_points(rng, 1 + rng() % 12, s, 1 + static_cast<std::int64_t>(rng() % 9));
      auto r = star_discrepancy_exact(pts);
      const Rational local = local_discrepancy(pts, r.corner, r.closed);
      EXPECT_EQ(r.closed ? local : -local, r.value);
      EXPECT_DOUBLE_EQ(r.value_float, r.value.to_double());
    }
}

TEST(Discrepancy, ExactAgainstBruteForce) {
  std::mt19937_64 rng(11);
  for (std::size_t s = 1; s <= 3; ++s)
    for (int trial = 0; trial < 60; ++trial) {
      auto pts = random_points(rng, 1 + rng() % 15, s, 1 + static_cast<std::int64_t>(rng() % 12));
      ASSERT_EQ(big(star_discrepancy_exact(pts).value), brute_star(pts)) << "s=" << s << " trial=" << trial;
    }
}

TEST(Discrepancy, OneDimensionalMatchesGrid) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    auto pts = random_points(rng, 1 + rng() % 40, 1, 1 + static_cast<std::int64_t>(rng() % 50));
    std::vector<Rational> xs;
    for (const auto& p : pts) xs.push_back(p[0]);
    ASSERT_EQ(star_discrepancy_1d(xs).value, star_discrepancy_exact(pts).value);
  }
}

TEST(Discrepancy, PermutationInvarianceAndDuplicates) {
  std::mt19937_64 rng(8);
  auto pts = random_points(rng, 20, 2, 16);
  const auto v = star_discrepancy_exact(pts).value;
  for (int i = 0; i < 5; ++i) {
    std::shuffle(pts.begin(), pts.end(), rng);
    EXPECT_EQ(star_discrepancy_exact(pts).value, v);
  }
  pts.push_back(pts.front());
  EXPECT_EQ(big(star_discrepancy_exact(pts).value), brute_star(pts));
}

TEST(Discrepancy, Guards) {
  auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::InvalidArgument;
  };
  std::vector<RationalPoint> big2(kMaxExactPoints2d + 1, RationalPoint{0, 0});
  std::vector<RationalPoint> big3(kMaxExactPoints3d + 1, RationalPoint{0, 0, 0});
  std::vector<RationalPoint> four{{0, 0, 0, 0}};
  EXPECT_EQ(code_of([&] { star_discrepancy_exact(big2); }), Errc::TooLarge);
  EXPECT_EQ(code_of([&] { star_discrepancy_exact(big3); }), Errc::TooLarge);
  EXPECT_EQ(code_of([&] { star_discrepancy_exact(four); }), Errc::TooLarge);
  EXPECT_EQ(code_of([&] { star_discrepancy_exact({{0, 0}, {0}}); }), Errc::SizeMismatch);
}

TEST(Discrepancy, DeltaBound) {
  for (std::uint32_t b : {3u, 5u, 7u})
    for (std::size_t t = 0; t <= 4; ++t) EXPECT_EQ(delta_bound(b, t, 6, 1), checked_pow(b, static_cast<unsigned>(t)));
  EXPECT_EQ(delta_bound(3, 0, 2, 2), 3u);
  EXPECT_EQ(delta_bound(5, 0, 2, 2), 5u);
  // 3^1 (1 + 2*3*1 + 1*3*1) with s=3, m-t=3
  EXPECT_EQ(delta_bound(3, 1, 4, 3), 3u * (1 + 2 * 3 + 3));
  EXPECT_THROW(delta_bound(2, 0, 2, 1), Error);
  EXPECT_THROW(delta_bound(3, 3, 2, 1), Error);
}

TEST(Discrepancy, NetsRespectDeltaBound) {
  for (std::uint32_t b : {3u, 5u})
    for (std::size_t m = 1; m <= 3; ++m) {
      auto set = stirling_matrix_set(make_field(b), 2, m);
      auto pts = generate_block(set, {}, IndexSequence::natural(b), 0, checked_pow(b, static_cast<unsigned>(m)), m);
      const auto t = minimal_net_t(pts, m);
      const auto d = star_discrepancy_exact(to_rational_points(pts)).value;
      EXPECT_LE(d * Rational(static_cast<std::int64_t>(checked_pow(b, static_cast<unsigned>(m)))),
                Rational(static_cast<std::int64_t>(delta_bound(b, t, m, 2))));
    }
}

TEST(Discrepancy, Prop2Examples) {
  TProfile zero;
  zero.m_max = 8;
  zero.T.assign(9, 0);
  zero.witness.assign(9, std::nullopt);
  auto nine = prop2_bound(integer_digits(0, 3), zero, 3, 1, 9);
  EXPECT_EQ(nine.r, 2u);
  EXPECT_EQ(nine.N_prime, 0u);
  EXPECT_EQ(nine.total, 5u);
  auto ten = prop2_bound(integer_digits(0, 3), zero, 3, 1, 10);
  EXPECT_EQ(ten.N_prime, 1u);
  EXPECT_EQ(ten.total, 6u);
  std::uint64_t sum = 0;
  for (const auto& t : ten.terms) {
    EXPECT_EQ(t.value, t.coefficient * t.delta);
    sum += t.value;
  }
  EXPECT_EQ(sum, ten.total);

  // alpha = -1 has every digit 2.
  auto two = prop2_bound(rational_digits(-1, 1, 3), zero, 3, 1, 3);
  ASSERT_EQ(two.alpha_digits.front(), 2u);
  ASSERT_FALSE(two.terms.empty());
  EXPECT_EQ(two.terms.front().part, BoundTerm::Part::Head);
  EXPECT_EQ(two.terms.front().value, 1u);
  EXPECT_EQ(two.N_prime, 2u);
  EXPECT_EQ(two.total, 3u);

  TProfile shortp = zero;
  shortp.m_max = 1;
  shortp.T.resize(2);
  shortp.witness.resize(2);
  EXPECT_THROW(prop2_bound(integer_digits(0, 3), shortp, 3, 1, 27), Error);
  EXPECT_THROW(prop2_bound(integer_digits(0, 2), zero, 2, 1, 4), Error);
}

TEST(Discrepancy, Prop2GrowsLikeLogPower) {
  for (std::size_t s : {1u, 2u}) {
    TProfile zero;
    zero.m_max = 12;
    zero.T.assign(13, 0);
    zero.witness.assign(13, std::nullopt);
    double worst = 0;
    for (unsigned k = 2; k <= 10; ++k) {
      const std::uint64_t n = checked_pow(3, k);
      const double ratio = static_cast<double>(prop2_bound(integer_digits(0, 3), zero, 3, s, n).total) /
                           std::pow(std::log(static_cast<double>(n)), static_cast<double>(s));
      if (k > 2) EXPECT_LE(ratio, 2 * worst);
      worst = std::max(worst, ratio);
    }
    EXPECT_LT(worst, 10.0);
  }
}

TEST(Discrepancy, EmpiricalVersusBound) {
  auto set = identity_set(3, 1, 8);
  for (const auto& a : {Rational(0), Rational(1, 2), Rational(-1, 4)}) {
    auto seq = IndexSequence::affine(integer_digits(1, 3), rational_digits(a, 3));
    std::vector<std::uint64_t> ns;
    for (std::uint64_t n = 1; n <= 81; ++n) ns.push_back(n);
    auto table = empirical_vs_bound(set, {}, seq, ns);
    EXPECT_TRUE(table.all_within());
    EXPECT_EQ(table.precision, 8u);
  }
}

TEST(Discrepancy, Exports) {
  TProfile zero;
  zero.m_max = 4;
  zero.T.assign(5, 0);
  zero.witness.assign(5, std::nullopt);
  const auto json = to_json(prop2_bound(integer_digits(0, 3), zero, 3, 1, 9));
  EXPECT_NE(json.find("\"total\":5"), std::string::npos);
  EXPECT_NE(json.find("\"discrepancy\":\"star\""), std::string::npos);
  BoundTable t;
  t.rows.push_back({4, Rational(1), Rational(0), 3, true});
  std::ostringstream os;
  write_bound_csv(os, t);
  EXPECT_EQ(os.str(), "N,ND*_exact,ND*_float,bound,ratio\n4,1,1,3,0.3333333333333333\n");
}
