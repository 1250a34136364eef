#include <gtest/gtest.h>

#include "qmc/error.hpp"
#include "qmc/inputseq.hpp"

using namespace qmc;

namespace {

std::vector<Digit> head(const BAdicStream& x, std::size_t k = 24) { return x.digits(k); }

std::vector<Digit> head_of(std::int64_t u, std::int64_t v, std::uint32_t b, std::size_t k = 24) {
  return rational_digits(u, v, b).digits(k);
}

}  // namespace

TEST(InputSeq, EvalExamples) {
  EXPECT_EQ(head(IndexSequence::natural(2).eval(5), 4), (std::vector<Digit>{1, 0, 1, 0}));
  EXPECT_EQ(head(IndexSequence::negative_shifted(2).eval(0), 8), std::vector<Digit>(8, 1));
  auto alt = IndexSequence::alternating(3);
  EXPECT_EQ(head(alt.eval(0)), head_of(0, 1, 3));
  EXPECT_EQ(head(alt.eval(1)), head_of(-1, 1, 3));
  EXPECT_EQ(head(alt.eval(2)), head_of(1, 1, 3));
  EXPECT_EQ(head(alt.eval(3)), head_of(-2, 1, 3));
}

TEST(InputSeq, ClosedFormsMatchRationalOracle) {
  const std::uint32_t b = 5;
  auto aff = IndexSequence::affine(rational_digits(1, 2, b), rational_digits(-1, 4, b));
  auto rat = IndexSequence::rational_affine(3, rational_digits(2, 7, b));
  auto quad = IndexSequence::quadratic(integer_digits(5, b), integer_digits(3, b), rational_digits(-1, 1, b));
  for (std::int64_t n = 0; n < 60; ++n) {
    ASSERT_EQ(head(aff.eval(n)), head_of(2 * n - 1, 4, b));
    ASSERT_EQ(head(rat.eval(n)), head(rational_digits(Rational(n, 3) + Rational(2, 7), b)));
    ASSERT_EQ(head(quad.eval(n)), head_of(5 * n * n + 3 * n - 1, 1, b));
    ASSERT_EQ(head(IndexSequence::negative_shifted(b).eval(n)), head_of(-n - 1, 1, b));
  }
}

TEST(InputSeq, Beatty) {
  auto s = IndexSequence::beatty(1414, 1000, 100, 3);
  for (std::uint64_t n = 0; n <= 100; ++n) ASSERT_EQ(head(s.eval(n)), head_of((1414 * n) / 1000, 1, 3));
  try {
    s.eval(101);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::PrecisionExhausted);
  }
}

TEST(InputSeq, DeterministicEvaluation) {
  auto s = IndexSequence::quadratic(rational_digits(1, 3, 2), integer_digits(1, 2), integer_digits(0, 2));
  EXPECT_EQ(head(s.eval(17), 40), head(s.eval(17), 40));
}

TEST(InputSeq, AlternatingSplitsIntoNaturalAndNegative) {
  for (std::uint32_t b : {2u, 3u, 7u}) {
    auto alt = IndexSequence::alternating(b);
    auto even = alt.subsequence(2, 0), odd = alt.subsequence(2, 1);
    for (std::uint64_t n = 0; n < 200; ++n) {
      ASSERT_EQ(head(even.eval(n)), head(IndexSequence::natural(b).eval(n)));
      ASSERT_EQ(head(odd.eval(n)), head(IndexSequence::negative_shifted(b).eval(n)));
    }
  }
}

TEST(InputSeq, RationalAffineSplitsIntoShiftedNaturals) {
  // s_{vn+j} = n + (j/v + alpha)
  const std::uint32_t b = 2;
  const Rational alpha(5, 7);
  auto seq = IndexSequence::rational_affine(3, rational_digits(alpha, b));
  for (std::uint64_t j = 0; j < 3; ++j) {
    auto sub = seq.subsequence(3, j);
    for (std::int64_t n = 0; n < 50; ++n)
      ASSERT_EQ(head(sub.eval(n)), head(rational_digits(Rational(n) + Rational(j, 3) + alpha, b)));
  }
  EXPECT_THROW(IndexSequence::rational_affine(4, integer_digits(0, 2)), Error);
}

TEST(InputSeq, UdVerdicts) {
  EXPECT_EQ(is_ud_expected(IndexSequence::natural(2)), UdVerdict::UD);
  EXPECT_EQ(is_ud_expected(IndexSequence::quadratic(integer_digits(1, 2), integer_digits(0, 2), integer_digits(0, 2))),
            UdVerdict::NotUD);
  EXPECT_EQ(is_ud_expected(IndexSequence::affine(integer_digits(3, 2), integer_digits(0, 2))), UdVerdict::UD);
  EXPECT_EQ(is_ud_expected(IndexSequence::affine(integer_digits(2, 2), integer_digits(1, 2))), UdVerdict::NotUD);
  EXPECT_EQ(is_ud_expected(IndexSequence::quadratic(integer_digits(2, 2), integer_digits(1, 2), integer_digits(0, 2))),
            UdVerdict::UD);
  EXPECT_EQ(is_ud_expected(IndexSequence::beatty(3, 2, 10, 2)), UdVerdict::Unknown);
  EXPECT_EQ(is_ud_expected(IndexSequence::custom(2, [](std::uint64_t n) { return integer_digits(n, 2); })),
            UdVerdict::Unknown);
}

TEST(InputSeq, EmpiricalUniformity) {
  EXPECT_EQ(empirical_ud_test(IndexSequence::natural(2), 3, 8).deviation, Rational(0));
  auto sq = empirical_ud_test(
      IndexSequence::quadratic(integer_digits(1, 2), integer_digits(0, 2), integer_digits(0, 2)), 3, 8000);
  EXPECT_GE(sq.deviation, Rational(1, 8));
  for (std::uint64_t r : {2u, 3u, 5u, 6u, 7u}) EXPECT_EQ(sq.histogram[r], 0u) << r;
  auto neg = empirical_ud_test(IndexSequence::negative_shifted(3), 2, 9000);
  EXPECT_LE(neg.deviation, Rational(2, 9000));
  EXPECT_THROW(empirical_ud_test(IndexSequence::natural(10), 7, 20'000'000), Error);
  EXPECT_THROW(empirical_ud_test(IndexSequence::natural(2), 4, 8), Error);
}

TEST(InputSeq, UdSequencesEquidistributeModuloBk) {
  const std::vector<std::pair<std::string, IndexSequence>> seqs = {
      {"natural", IndexSequence::natural(5)},
      {"neg", IndexSequence::negative_shifted(5)},
      {"affine", IndexSequence::affine(integer_digits(3, 5), rational_digits(1, 2, 5))},
      {"rat", IndexSequence::rational_affine(3, rational_digits(1, 4, 5))},
      {"quad", IndexSequence::quadratic(integer_digits(5, 5), integer_digits(2, 5), integer_digits(1, 5))},
  };
  for (const auto& [name, seq] : seqs) {
    ASSERT_EQ(is_ud_expected(seq), UdVerdict::UD) << name;
    for (unsigned k = 1; k <= 3; ++k) {
      const std::uint64_t bk = checked_pow(5, k);
      auto small = empirical_ud_test(seq, k, 100 * bk), large = empirical_ud_test(seq, k, 1000 * bk);
      EXPECT_LE(small.deviation, Rational(5, static_cast<std::int64_t>(bk))) << name << " k=" << k;
      EXPECT_LE(large.deviation, small.deviation) << name << " k=" << k;
    }
  }
}

TEST(InputSeq, SpecGrammar) {
  auto ex2c = parse_sequence_spec("paper-ex2c", 5);
  for (std::int64_t n = 0; n < 20; ++n) ASSERT_EQ(head(ex2c.eval(n)), head_of(2 * n - 1, 4, 5));
  auto rat = parse_sequence_spec("rat:v=4,alpha=-1/4", 5);
  for (std::int64_t n = 0; n < 20; ++n) ASSERT_EQ(head(rat.eval(n)), head_of(n - 1, 4, 5));
  auto quad = parse_sequence_spec("quad:a=1,c=0,d=0", 2);
  EXPECT_EQ(is_ud_expected(quad), UdVerdict::NotUD);
  auto aff = parse_sequence_spec("affine:a=3,c=-2/5", 3);
  EXPECT_EQ(head(aff.eval(4)), head_of(58, 5, 3));
  auto beatty = parse_sequence_spec("beatty:p=7,q=5,nmax=30", 2);
  EXPECT_EQ(head(beatty.eval(30)), head_of(42, 1, 2));
  EXPECT_EQ(parse_sequence_spec("neg", 3).kind(), IndexSequence::Kind::NegativeShifted);
  for (const char* bad : {"", "nat", "affine:a=1", "rat:v=0,alpha=0", "affine:a=2/4,c=0", "quad:a=1,c=0,d=0,e=1",
                          "beatty:p=1,q=0,nmax=3", "affine:a=x,c=0"}) {
    try {
      parse_sequence_spec(bad, 5);
      ADD_FAILURE() << "accepted " << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::ConfigError) << bad;
    }
  }
  // Well-formed specs whose values are not 5-adic integers.
  for (const char* not_badic : {"rat:v=5,alpha=0", "affine:a=1,c=1/10"}) {
    try {
      parse_sequence_spec(not_badic, 5);
      ADD_FAILURE() << "accepted " << not_badic;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::NotBAdicInteger) << not_badic;
    }
  }
}
