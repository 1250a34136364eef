#include <gtest/gtest.h>

#include <numeric>
#include <random>
#include <sstream>

#include "qmc/engine.hpp"
#include "qmc/error.hpp"

using namespace qmc;

namespace {

MatrixSet identity_set(std::uint32_t b, std::size_t s, std::size_t depth) {
  return make_matrix_set(std::vector<GeneratingMatrix>(s, identity_matrix(make_field(b), depth)));
}

// Radical inverse of n in base b truncated to m digits, as a numerator over b^m.
std::uint64_t radical_inverse(std::uint64_t n, std::uint32_t b, std::size_t m) {
  std::uint64_t num = 0;
  for (std::size_t j = 0; j < m; ++j, n /= b) num = num * b + n % b;
  return num;
}

}  // namespace

TEST(Engine, SpecExamples) {
  auto vdc = identity_set(2, 1, 8);
  BijectionFamily id;
  auto p = generate_point(vdc, id, IndexSequence::natural(2), 3, 2);
  EXPECT_EQ(p.digit(0, 0), 1u);
  EXPECT_EQ(p.digit(0, 1), 1u);
  EXPECT_EQ(point_to_rational(p, 0), Rational(3, 4));
  auto neg = generate_point(vdc, id, IndexSequence::negative_shifted(2), 0, 3);
  EXPECT_EQ(point_to_rational(neg, 0), Rational(7, 8));
  auto pp = generate_point(make_matrix_set({paper_pairs_matrix(4)}), id, IndexSequence::natural(2), 3, 1);
  EXPECT_EQ(pp.digit(0, 0), 0u);
}

TEST(Engine, VanDerCorputAgainstRadicalInverse) {
  for (std::uint32_t b : {2u, 3u, 5u, 7u}) {
    auto set = identity_set(b, 1, 6);
    auto pts = generate_block(set, {}, IndexSequence::natural(b), 0, 500, 6);
    for (std::uint64_t n = 0; n < 500; ++n) {
      ASSERT_EQ(pts[n].index(), n);
      ASSERT_EQ(point_numerator(pts[n], 0), radical_inverse(n, b, 6)) << "b=" << b << " n=" << n;
    }
  }
}

TEST(Engine, Blocks) {
  auto set = identity_set(2, 1, 4);
  auto b0 = generate_block(set, {}, IndexSequence::natural(2), 0, 4, 2);
  std::vector<Rational> xs;
  for (auto& p : b0) xs.push_back(point_to_rational(p, 0));
  EXPECT_EQ(xs, (std::vector<Rational>{0, Rational(1, 2), Rational(1, 4), Rational(3, 4)}));
  auto b1 = generate_block(set, {}, IndexSequence::natural(2), 2, 2, 2);
  EXPECT_EQ(point_to_rational(b1[0], 0), Rational(1, 4));
  EXPECT_EQ(point_to_rational(b1[1], 0), Rational(3, 4));
  EXPECT_EQ(generate_block(set, {}, IndexSequence::natural(2), 9, 1, 3).size(), 1u);
}

TEST(Engine, PointConversions) {
  DigitalPoint p(0, 2, 1, 2);
  p.set_digit(0, 0, 1);
  p.set_digit(0, 1, 1);
  EXPECT_EQ(point_to_rational(p, 0), Rational(3, 4));
  DigitalPoint q(0, 5, 1, 2);
  q.set_digit(0, 0, 4);
  q.set_digit(0, 1, 4);
  EXPECT_EQ(point_to_rational(q, 0), Rational(24, 25));
  EXPECT_DOUBLE_EQ(point_to_float(q, 0), 0.96);
  EXPECT_EQ(point_to_rational(DigitalPoint(0, 3, 1, 4), 0), Rational(0));
  EXPECT_THROW(point_to_rational(q, 1), Error);
}

TEST(Engine, TruncationConsistency) {
  auto set = stirling_matrix_set(make_field(5), 2, 8);
  auto seq = IndexSequence::alternating(5);
  for (std::uint64_t n = 0; n < 200; n += 7) {
    auto full = generate_point(set, {}, seq, n, 8);
    for (std::size_t m = 1; m < 8; ++m) ASSERT_EQ(generate_point(set, {}, seq, n, m), full.truncated(m));
  }
}

TEST(Engine, ThreadCountDoesNotChangeOutput) {
  auto set = stirling_matrix_set(make_field(5), 2, 6);
  auto seq = parse_sequence_spec("paper-ex2c", 5);
  auto one = generate_block(set, {}, seq, 100, 777, 6, 1);
  for (unsigned t : {2u, 3u, 8u}) EXPECT_EQ(generate_block(set, {}, seq, 100, 777, 6, t), one);
}

TEST(Engine, ClassicalRouteMatchesExtendedRoute) {
  std::mt19937_64 rng(2);
  auto f = make_field(3, 2);
  std::vector<Row> rows(6);
  for (std::size_t j = 0; j < 6; ++j) {
    rows[j].resize(2 * j + 3);
    for (auto& c : rows[j]) c = static_cast<FqElem>(rng() % 9);
  }
  auto set = make_matrix_set({GeneratingMatrix(f, rows), identity_matrix(f, 6)});
  Permutation shuffled(9);
  std::iota(shuffled.begin(), shuffled.end(), 0u);
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  BijectionFamily bij({shuffled, shuffled}, {{shuffled}});
  EXPECT_EQ(bij.psi_zero_from(), shuffled[0] == 0 ? 0u : 2u);
  for (std::uint64_t n : {0ull, 1ull, 8ull, 80ull, 12345ull, 9876543210ull})
    EXPECT_EQ(generate_point_classical(set, bij, n, 6), generate_point(set, bij, IndexSequence::natural(9), n, 6));
}

TEST(Engine, BijectionsAreApplied) {
  // lambda swaps 0 and 1 in the first output digit only.
  auto set = identity_set(2, 1, 3);
  BijectionFamily bij({}, {{Permutation{1, 0}}});
  auto p = generate_point(set, bij, IndexSequence::natural(2), 0, 3);
  EXPECT_EQ(point_to_rational(p, 0), Rational(1, 2));
  // psi_0 swapping 0 and 1 flips the input's lowest digit.
  BijectionFamily flip({Permutation{1, 0}}, {});
  EXPECT_EQ(point_to_rational(generate_point(set, flip, IndexSequence::natural(2), 0, 3), 0), Rational(1, 2));
  EXPECT_EQ(point_to_rational(generate_point(set, flip, IndexSequence::natural(2), 1, 3), 0), Rational(0));
}

TEST(Engine, BijectionValidationAndJson) {
  BijectionFamily bad({Permutation{0, 0, 1}}, {});
  EXPECT_THROW(bad.validate(3), Error);
  BijectionFamily good({Permutation{2, 0, 1}}, {{Permutation{1, 2, 0}, Permutation{0, 1, 2}}});
  EXPECT_NO_THROW(good.validate(3));
  auto back = bijections_from_json(bijections_to_json(good));
  EXPECT_EQ(back.psi_tables(), good.psi_tables());
  EXPECT_EQ(back.lambda_tables(), good.lambda_tables());
  try {
    bijections_from_json("{\"psi\": 3}");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::SchemaError);
  }
}

TEST(Engine, Errors) {
  auto set = identity_set(3, 1, 4);
  try {
    generate_point(set, {}, IndexSequence::natural(3), 0, 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::DepthExceeded);
  }
  try {
    generate_point(set, {}, IndexSequence::natural(2), 0, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::BaseMismatch);
  }
}

TEST(Engine, Export) {
  auto set = identity_set(2, 2, 3);
  auto pts = generate_block(set, {}, IndexSequence::natural(2), 0, 3, 3);
  std::ostringstream exact, flt;
  write_points_csv(exact, pts, ExportMode::Exact);
  write_points_csv(flt, pts, ExportMode::Float);
  EXPECT_EQ(exact.str(), "n,x1,x2\n0,0/8,0/8\n1,4/8,4/8\n2,2/8,2/8\n");
  EXPECT_EQ(flt.str(), "n,x1,x2\n0,0,0\n1,0.5,0.5\n2,0.25,0.25\n");
  EXPECT_EQ(points_to_json({pts[1]}),
            "{\"base\":2,\"s\":2,\"m\":3,\"points\":[{\"n\":1,\"digits\":[[1,0,0],[1,0,0]]}]}\n");
  EXPECT_EQ(format_double(0.1), "0.1");
}
