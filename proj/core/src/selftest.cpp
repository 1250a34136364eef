#include "qmc/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>

#include "qmc/badic.hpp"
#include "qmc/discrepancy.hpp"
#include "qmc/engine.hpp"
#include "qmc/error.hpp"
#include "qmc/genmatrix.hpp"
#include "qmc/inputseq.hpp"
#include "qmc/quality.hpp"

namespace qmc {

namespace {

// Failures are collected as text; a criterion passes when none were recorded.
struct Log {
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::string first;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok && failures++ == 0) first = what;
  }
  std::string summary() const {
    std::string s = std::to_string(checks) + " checks, " + std::to_string(failures) + " failures";
    if (failures) s += "; first: " + first;
    return s;
  }
};

u128 pow_u128(u128 b, unsigned k) {
  u128 r = 1;
  while (k--) r *= b;
  return r;
}

u128 mulmod(u128 a, u128 b, u128 mod) {
  a %= mod;
  u128 r = 0;
  while (b) {
    if (b & 1) r = (r + a) % mod;
    a = (a + a) % mod;
    b >>= 1;
  }
  return r;
}

// Inverse of v modulo mod by the extended Euclidean algorithm.
u128 inverse_mod(u128 v, u128 mod) {
  i128 r0 = static_cast<i128>(mod), r1 = static_cast<i128>(v % mod);
  i128 s0 = 0, s1 = 1;
  while (r1 != 0) {
    i128 q = r0 / r1;
    std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
    std::tie(s0, s1) = std::make_pair(s1, s0 - q * s1);
  }
  i128 m = static_cast<i128>(mod);
  return static_cast<u128>(((s0 % m) + m) % m);
}

u128 residue(std::int64_t u, u128 mod) {
  const u128 a = static_cast<u128>(u < 0 ? -static_cast<i128>(u) : static_cast<i128>(u)) % mod;
  return u < 0 && a != 0 ? mod - a : a;
}

MatrixSet identity_set(std::uint32_t b, std::size_t depth) {
  return make_matrix_set({identity_matrix(make_field(b), depth)});
}

std::string tprofile_text(const TProfile& p) {
  std::string s = "[";
  for (std::size_t m = 0; m < p.T.size(); ++m) s += (m ? "," : "") + std::to_string(p.T[m]);
  return s + "]";
}

// Every block k in [0, 3] is a (T(m), m, s)-net for each m in [1, m_max].
void check_sequence_nets(Log& log, const MatrixSet& set, const IndexSequence& seq, std::size_t m_max,
                         const TProfile& profile, const std::string& label, unsigned threads) {
  const BijectionFamily id;
  for (std::size_t m = 1; m <= m_max; ++m)
    for (const auto& rep : verify_T_sequence(set, id, seq, m, 0, 3, profile, threads))
      log.expect(rep.pass, label + ": block k=" + std::to_string(rep.k) + " fails at m=" + std::to_string(m) +
                               " t=" + std::to_string(rep.t));
}

CriterionResult criterion1(unsigned threads) {
  Log log;
  for (std::uint32_t b : {2u, 3u, 5u}) {
    auto set = identity_set(b, 8);
    const auto prof = t_profile(set, 8);
    log.expect(prof.t() == 0, "identity profile not T=0 for b=" + std::to_string(b));
    check_sequence_nets(log, set, IndexSequence::natural(b), 8, prof, "b=" + std::to_string(b), threads);
  }
  return {1, "van der Corput baseline", log.failures == 0, log.summary()};
}

CriterionResult criterion2(unsigned) {
  Log log;
  for (std::uint32_t b : {2u, 3u, 10u}) {
    for (std::uint64_t n = 0; n <= 10000; ++n) {
      const auto x = integer_digits(n, b);
      const auto y = negate(x);
      for (unsigned k = 1; k <= 12; ++k) {
        const u128 bk = pow_u128(b, k);
        const u128 tx = truncate(x, k), ty = truncate(y, k);
        const u128 oracle = (bk - n % bk) % bk;
        log.expect((tx + ty) % bk == 0 && ty == oracle,
                   "b=" + std::to_string(b) + " n=" + std::to_string(n) + " k=" + std::to_string(k));
      }
    }
  }
  return {2, "negation digit formula", log.failures == 0, log.summary()};
}

CriterionResult criterion3(unsigned threads) {
  Log log;
  for (std::uint32_t b : {2u, 3u, 5u}) {
    auto set = identity_set(b, 6);
    const auto prof = t_profile(set, 6);
    check_sequence_nets(log, set, IndexSequence::natural(b), 6, prof, "natural b=" + std::to_string(b), threads);
    check_sequence_nets(log, set, IndexSequence::negative_shifted(b), 6, prof, "neg b=" + std::to_string(b), threads);
  }
  auto pair = stirling_matrix_set(make_field(5), 2, 4);
  const auto prof = t_profile(pair, 4);
  check_sequence_nets(log, pair, IndexSequence::natural(5), 4, prof, "stirling natural", threads);
  check_sequence_nets(log, pair, IndexSequence::negative_shifted(5), 4, prof, "stirling neg", threads);
  return {3, "negative-shifted input keeps the T-profile", log.failures == 0,
          log.summary() + "; stirling pair T=" + tprofile_text(prof)};
}

CriterionResult criterion4(unsigned threads) {
  Log log;
  for (std::uint32_t b : {2u, 3u, 5u}) {
    auto set = identity_set(b, 5);
    const auto prof = t_profile(set, 5);
    const auto alt = IndexSequence::alternating(b);
    check_sequence_nets(log, set, alt.subsequence(2, 0), 5, prof, "even b=" + std::to_string(b), threads);
    check_sequence_nets(log, set, alt.subsequence(2, 1), 5, prof, "odd b=" + std::to_string(b), threads);
  }
  auto pair = stirling_matrix_set(make_field(5), 2, 5);
  const auto prof = t_profile(pair, 5);
  const auto alt = IndexSequence::alternating(5);
  check_sequence_nets(log, pair, alt.subsequence(2, 0), 5, prof, "stirling even", threads);
  check_sequence_nets(log, pair, alt.subsequence(2, 1), 5, prof, "stirling odd", threads);
  return {4, "alternating input subsequences", log.failures == 0, log.summary()};
}

CriterionResult criterion5(unsigned threads) {
  Log log;
  std::ostringstream detail;
  const BijectionFamily id;
  auto agree = [&](const MatrixSet& set, const std::string& label) {
    const std::uint32_t b = set.field.q();
    std::size_t m_max = 0;
    while (pow_u128(b, static_cast<unsigned>(m_max + 1)) <= 4096) ++m_max;
    const auto prof = t_profile(set, m_max);
    const auto seq = IndexSequence::natural(b);
    for (std::size_t m = 1; m <= m_max; ++m) {
      const std::uint64_t block = static_cast<std::uint64_t>(pow_u128(b, static_cast<unsigned>(m)));
      for (std::uint64_t k : {0u, 1u}) {
        const auto pts = generate_block(set, id, seq, k * block, block, m, threads);
        const std::size_t t = minimal_net_t(pts, m);
        log.expect(t == prof.T[m], label + ": m=" + std::to_string(m) + " k=" + std::to_string(k) +
                                       " brute t=" + std::to_string(t) + " vs T=" + std::to_string(prof.T[m]));
      }
    }
    detail << "; " << label << " T=" << tprofile_text(prof);
    return prof;
  };
  for (std::uint32_t b : {2u, 3u, 5u}) agree(identity_set(b, 12), "identity b=" + std::to_string(b));
  const auto pp = agree(make_matrix_set({paper_pairs_matrix(12)}), "paper_pairs");
  for (std::size_t m = 0; m <= pp.m_max; ++m) log.expect(pp.T[m] == m / 2, "paper_pairs T(" + std::to_string(m) + ")");
  agree(stirling_matrix_set(make_field(3), 2, 8), "stirling b=3 s=2");
  agree(stirling_matrix_set(make_field(5), 2, 6), "stirling b=5 s=2");
  const auto st = t_profile(stirling_matrix_set(make_field(5), 2, 6), 6);
  log.expect(st.t() == 0, "stirling base 5 not T=0 up to m=6: " + tprofile_text(st));
  return {5, "T-profile agrees with brute-force nets", log.failures == 0, log.summary() + detail.str()};
}

CriterionResult criterion6(unsigned threads) {
  Log log;
  const auto sq = IndexSequence::quadratic(integer_digits(1, 2), integer_digits(0, 2), integer_digits(0, 2));
  log.expect(is_ud_expected(sq) == UdVerdict::NotUD, "detector does not flag n^2 as not u.d.");
  auto set = identity_set(2, 3);
  const auto pts = generate_block(set, BijectionFamily{}, sq, 0, 8000, 3, threads);
  const Rational dev = elementary_frequency_deviation(pts, {3});
  log.expect(dev >= Rational(1, 8), "depth-3 deviation " + dev.to_string() + " below 1/8");
  const auto ud = empirical_ud_test(sq, 3, 8000);
  for (std::uint64_t r = 0; r < 8; ++r) {
    const bool square = r == 0 || r == 1 || r == 4;
    log.expect(square == (ud.histogram[r] > 0), "residue " + std::to_string(r) + " mod 8");
  }
  return {6, "squares are not uniformly distributed", log.failures == 0,
          log.summary() + "; deviation " + dev.to_string()};
}

// n + alpha over q = 3 with the identity matrix, N = 1..729.
void check_prop2(Log& log, const IndexSequence& seq, const std::string& label, unsigned threads) {
  std::vector<std::uint64_t> Ns(729);
  std::iota(Ns.begin(), Ns.end(), 1);
  const auto table = empirical_vs_bound(identity_set(3, 20), BijectionFamily{}, seq, Ns, 0, threads);
  for (const auto& row : table.rows)
    log.expect(row.within, label + ": N=" + std::to_string(row.N) + " N*D*=" + row.nd.to_string() + " > bound " +
                               std::to_string(row.bound));
}

CriterionResult criterion7(unsigned threads) {
  Log log;
  for (const char* a : {"0", "1/2", "-1/4"})
    check_prop2(log, IndexSequence::rational_affine(1, rational_digits(Rational::parse(a), 3)), std::string("alpha=") + a,
                threads);
  TProfile zero;
  zero.m_max = 8;
  zero.T.assign(9, 0);
  const auto b9 = prop2_bound(integer_digits(0, 3), zero, 3, 1, 9);
  const auto b10 = prop2_bound(integer_digits(0, 3), zero, 3, 1, 10);
  log.expect(b9.total == 5, "alpha=0 N=9 bound " + std::to_string(b9.total));
  log.expect(b10.total == 6, "alpha=0 N=10 bound " + std::to_string(b10.total));
  const auto t9 = empirical_vs_bound(identity_set(3, 20), BijectionFamily{}, IndexSequence::natural(3), {9});
  log.expect(t9.rows[0].nd <= Rational(5), "alpha=0 N=9 N*D*=" + t9.rows[0].nd.to_string());
  return {7, "composite bound for n + alpha", log.failures == 0,
          log.summary() + "; N=9: N*D*=" + t9.rows[0].nd.to_string() + " bound=5"};
}

CriterionResult criterion8(unsigned threads) {
  Log log;
  const std::uint32_t q = 3;
  const auto seq = IndexSequence::rational_affine(2, rational_digits(Rational(1, 2), q));
  check_prop2(log, seq.subsequence(2, 0), "even subsequence", threads);
  check_prop2(log, seq.subsequence(2, 1), "odd subsequence", threads);
  const double C = 2.0 * q / std::log(9.0) + 4.0 * (q - 1) / std::log(static_cast<double>(q));
  std::vector<std::uint64_t> Ns;
  for (std::uint64_t N = 9; N <= 729; N *= 3) Ns.push_back(N);
  const auto table = empirical_vs_bound(identity_set(q, 20), BijectionFamily{}, seq, Ns, 0, threads);
  double worst = 0.0;
  for (const auto& row : table.rows) {
    const double ratio = row.nd.to_double() / std::log(static_cast<double>(row.N));
    worst = std::max(worst, ratio);
    log.expect(ratio < C, "N=" + std::to_string(row.N) + " N*D*/log N = " + std::to_string(ratio));
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "; max N*D*/log N = %.4f < C = %.4f", worst, C);
  return {8, "n/2 + 1/2 is low-discrepancy", log.failures == 0, log.summary() + buf};
}

CriterionResult criterion9(unsigned) {
  Log log;
  std::mt19937_64 rng(20240917);
  for (std::uint32_t b : {2u, 3u, 5u, 10u}) {
    std::uniform_int_distribution<std::int64_t> du(-1'000'000, 1'000'000), dv(1, 1'000'000);
    for (int trial = 0; trial < 200; ++trial) {
      std::int64_t u = du(rng), v;
      do v = dv(rng);
      while (std::gcd(v, static_cast<std::int64_t>(b)) != 1);
      const auto x = rational_digits(u, v, b);
      for (unsigned k = 1; k <= 24; ++k) {
        const u128 mod = pow_u128(b, k);
        const u128 oracle = mulmod(residue(u, mod), inverse_mod(static_cast<u128>(v), mod), mod);
        log.expect(truncate(x, k) == oracle, "digits of " + std::to_string(u) + "/" + std::to_string(v) +
                                                 " base " + std::to_string(b) + " k=" + std::to_string(k));
      }
      if (is_unit(x)) {
        const auto y = unit_inverse(x);
        for (unsigned k = 1; k <= 24; ++k) {
          const u128 mod = pow_u128(b, k);
          log.expect(mulmod(truncate(x, k), truncate(y, k), mod) == 1 % mod,
                     "unit inverse of " + std::to_string(u) + "/" + std::to_string(v) + " base " + std::to_string(b));
        }
      }
    }
  }
  const auto v6 = pseudo_valuation(6, 1, 24), v12 = pseudo_valuation(12, 1, 24);
  log.expect(!v6.is_zero && v6.exponent == Rational(-1, 3), "|6|_24 exponent " + v6.exponent.to_string());
  log.expect(!v12.is_zero && v12.exponent == Rational(-2, 3), "|12|_24 exponent " + v12.exponent.to_string());
  return {9, "b-adic arithmetic", log.failures == 0, log.summary()};
}

CriterionResult criterion10(unsigned threads) {
  Log log;
  int triples = 0;
  for (std::uint32_t b : {3u, 4u, 5u, 7u})
    for (std::size_t m : {0u, 2u, 4u, 6u, 9u})
      for (std::size_t t = 0; t <= m && triples < 20; t += 3) {
        ++triples;
        log.expect(delta_bound(b, t, m, 1) == checked_pow(b, static_cast<unsigned>(t)),
                   "delta(" + std::to_string(b) + "," + std::to_string(t) + "," + std::to_string(m) + ",1)");
      }
  log.expect(triples == 20, "expected 20 one-dimensional triples");
  log.expect(delta_bound(3, 0, 2, 2) == 3, "delta_3(0,2,2)");
  log.expect(delta_bound(5, 0, 2, 2) == 5, "delta_5(0,2,2)");

  std::size_t nets = 0;
  const BijectionFamily id;
  auto consistency = [&](const MatrixSet& set, const std::string& label) {
    const std::uint32_t b = set.field.q();
    const auto prof = t_profile(set, 5);
    for (std::size_t m = 1; m <= 5; ++m) {
      const std::uint64_t block = checked_pow(b, static_cast<unsigned>(m));
      for (std::uint64_t k : {0u, 1u}) {
        const auto pts = generate_block(set, id, IndexSequence::natural(b), k * block, block, m, threads);
        const auto rep = verify_net(pts, prof.T[m], m, k);
        if (!rep.pass) continue;
        ++nets;
        const auto d = star_discrepancy_exact(to_rational_points(pts));
        const std::uint64_t delta = delta_bound(b, prof.T[m], m, set.s());
        log.expect(d.value * Rational(static_cast<std::int64_t>(block)) <= Rational(static_cast<std::int64_t>(delta)),
                   label + " m=" + std::to_string(m) + ": b^m D* = " +
                       (d.value * Rational(static_cast<std::int64_t>(block))).to_string() + " > " +
                       std::to_string(delta));
      }
    }
  };
  for (std::uint32_t b : {3u, 5u}) {
    consistency(identity_set(b, 5), "identity b=" + std::to_string(b));
    consistency(stirling_matrix_set(make_field(b), 2, 5), "stirling pair b=" + std::to_string(b));
  }
  log.expect(nets == 40, "expected 40 verified nets, got " + std::to_string(nets));
  return {10, "delta bound", log.failures == 0, log.summary() + "; " + std::to_string(nets) + " nets"};
}

CriterionResult criterion11(unsigned) {
  Log log;
  std::mt19937_64 rng(11);
  const std::pair<std::uint32_t, std::uint32_t> fields[] = {{2, 1}, {3, 1}, {2, 2}, {5, 1}, {7, 1}, {2, 3}, {3, 2}};
  auto pick = [&](std::uint64_t lo, std::uint64_t hi) {
    return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
  };
  auto random_perm = [&](std::uint32_t q) {
    Permutation p(q);
    std::iota(p.begin(), p.end(), 0u);
    std::shuffle(p.begin(), p.end(), rng);
    return p;
  };
  for (int trial = 0; trial < 1000; ++trial) {
    const auto [p, e] = fields[pick(0, std::size(fields) - 1)];
    const auto f = make_field(p, e);
    const std::uint32_t q = f.q();
    const std::size_t s = pick(1, 3), depth = pick(1, 8);
    std::vector<GeneratingMatrix> mats;
    for (std::size_t i = 0; i < s; ++i) {
      std::vector<Row> rows(depth);
      for (std::size_t j = 0; j < depth; ++j) {
        rows[j].resize(pick(0, 3 * (j + 1) + 2));
        for (auto& c : rows[j]) c = static_cast<FqElem>(pick(0, q - 1));
      }
      mats.emplace_back(f, std::move(rows));
    }
    const auto set = make_matrix_set(std::move(mats));
    std::vector<Permutation> psi(pick(0, 5));
    for (auto& t : psi) t = random_perm(q);
    std::vector<std::vector<Permutation>> lambda(pick(0, s));
    for (auto& li : lambda) {
      li.resize(pick(0, depth));
      for (auto& t : li) t = random_perm(q);
    }
    const BijectionFamily bij(std::move(psi), std::move(lambda));
    const std::size_t m = pick(1, depth);
    const std::uint64_t n = pick(0, std::uint64_t{1} << pick(0, 40));
    const auto a1 = generate_point_classical(set, bij, n, m);
    const auto a2 = generate_point(set, bij, IndexSequence::natural(q), n, m);
    log.expect(a1 == a2, "q=" + std::to_string(q) + " s=" + std::to_string(s) + " n=" + std::to_string(n) +
                             " m=" + std::to_string(m));
  }
  return {11, "classical and extended routes agree", log.failures == 0, log.summary()};
}

struct Entry {
  double budget;
  std::function<CriterionResult(unsigned)> run;
};

const Entry kCriteria[] = {
    {10, criterion1}, {5, criterion2},  {60, criterion3}, {60, criterion4}, {120, criterion5}, {5, criterion6},
    {30, criterion7}, {30, criterion8}, {5, criterion9},  {30, criterion10}, {5, criterion11},
};

}  // namespace

CriterionResult run_criterion(int id, unsigned threads) {
  if (id < 1 || id > kSelftestCriteria) throw Error(Errc::InvalidArgument, "no acceptance check " + std::to_string(id));
  const Entry& e = kCriteria[id - 1];
  const auto start = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    r = e.run(threads);
  } catch (const std::exception& ex) {
    r = {id, "check " + std::to_string(id), false, std::string("error: ") + ex.what()};
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.budget = e.budget;
  if (r.seconds > r.budget) {
    r.pass = false;
    r.detail += "; over time budget";
  }
  return r;
}

std::vector<CriterionResult> run_selftest(unsigned threads) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kSelftestCriteria; ++id) out.push_back(run_criterion(id, threads));
  return out;
}

std::string format_result(const CriterionResult& r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, " (%.2f s / %.0f s) ", r.seconds, r.budget);
  return std::string(r.pass ? "PASS " : "FAIL ") + (r.id < 10 ? " " : "") + std::to_string(r.id) + " " + r.name + buf +
         r.detail;
}

}  // namespace qmc
