#include "qmc/discrepancy.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "qmc/engine.hpp"
#include "qmc/error.hpp"
#include "qmc/genmatrix.hpp"
#include "qmc/inputseq.hpp"
#include "qmc/quality.hpp"

namespace qmc {

namespace {

constexpr i128 kI128Max = static_cast<i128>(~static_cast<u128>(0) >> 1);

i128 mul_checked(i128 a, i128 b) {
  if (a != 0 && b != 0 && (a > kI128Max / b)) throw Error(Errc::Overflow, "exact discrepancy: denominator too large");
  return a * b;
}

void check_unit_interval(const Rational& x) {
  if (x < Rational(0) || x > Rational(1))
    throw Error(Errc::OutOfRange, "point coordinate " + x.to_string() + " outside [0,1]");
}

u128 binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  u128 c = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    c = c * (n - k + i) / i;
    if (c > UINT64_MAX) throw Error(Errc::Overflow, "binomial coefficient exceeds 64 bits");
  }
  return c;
}

std::uint64_t to_u64(u128 v, const char* what) {
  if (v > UINT64_MAX) throw Error(Errc::Overflow, std::string(what) + " exceeds 64 bits");
  return static_cast<std::uint64_t>(v);
}

}  // namespace

Rational local_discrepancy(const std::vector<RationalPoint>& points, const RationalPoint& corner, bool closed) {
  if (points.empty()) throw Error(Errc::InvalidArgument, "empty point set");
  std::int64_t count = 0;
  for (const auto& x : points) {
    if (x.size() != corner.size()) throw Error(Errc::SizeMismatch, "corner and point dimensions differ");
    bool inside = true;
    for (std::size_t i = 0; i < x.size() && inside; ++i) inside = closed ? x[i] <= corner[i] : x[i] < corner[i];
    count += inside;
  }
  Rational vol(1);
  for (const auto& y : corner) vol *= y;
  return Rational(count, static_cast<std::int64_t>(points.size())) - vol;
}

DiscrepancyResult star_discrepancy_1d(const std::vector<Rational>& points) {
  if (points.empty()) throw Error(Errc::InvalidArgument, "star discrepancy needs N >= 1");
  for (const auto& x : points) check_unit_interval(x);
  std::vector<Rational> xs = points;
  std::sort(xs.begin(), xs.end());
  const auto N = static_cast<std::int64_t>(xs.size());
  DiscrepancyResult res;
  res.N = static_cast<std::uint64_t>(N);
  bool have = false;
  for (std::int64_t i = 1; i <= N; ++i) {
    const Rational& x = xs[i - 1];
    Rational open = x - Rational(i - 1, N);   // [0, x) holds at most i-1 points
    Rational closed = Rational(i, N) - x;     // [0, x] holds at least i points
    if (!have || open > res.value) res.value = open, res.corner = {x}, res.closed = false, have = true;
    if (closed > res.value) res.value = closed, res.corner = {x}, res.closed = true;
  }
  res.value_float = res.value.to_double();
  return res;
}

DiscrepancyResult star_discrepancy_exact(const std::vector<RationalPoint>& points) {
  if (points.empty()) throw Error(Errc::InvalidArgument, "star discrepancy needs N >= 1");
  const std::size_t s = points.front().size();
  const std::size_t N = points.size();
  if (s == 0) throw Error(Errc::InvalidArgument, "points must have dimension >= 1");
  if (s > 3) throw Error(Errc::TooLarge, "exact star discrepancy supports s <= 3, got s = " + std::to_string(s));
  if ((s == 2 && N > kMaxExactPoints2d) || (s == 3 && N > kMaxExactPoints3d))
    throw Error(Errc::TooLarge, "exact star discrepancy guard: N = " + std::to_string(N) + " too large for s = " +
                                    std::to_string(s));
  i128 D = 1;
  for (const auto& x : points) {
    if (x.size() != s) throw Error(Errc::SizeMismatch, "points of differing dimension");
    for (const auto& c : x) {
      check_unit_interval(c);
      D = D / gcd128(D, c.den()) * c.den();
      if (D > INT64_MAX) throw Error(Errc::Overflow, "common denominator exceeds 64 bits");
    }
  }
  // Integer coordinates over D; grids of coordinate values plus D (= 1).
  std::vector<std::vector<i128>> X(N, std::vector<i128>(s));
  std::vector<std::vector<i128>> G(s);
  for (std::size_t k = 0; k < N; ++k)
    for (std::size_t i = 0; i < s; ++i) {
      X[k][i] = static_cast<i128>(points[k][i].num()) * (D / points[k][i].den());
      G[i].push_back(X[k][i]);
    }
  for (auto& g : G) {
    g.push_back(D);
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
  }
  std::vector<std::vector<std::size_t>> idx(N, std::vector<std::size_t>(s));
  for (std::size_t k = 0; k < N; ++k)
    for (std::size_t i = 0; i < s; ++i)
      idx[k][i] = static_cast<std::size_t>(std::lower_bound(G[i].begin(), G[i].end(), X[k][i]) - G[i].begin());

  i128 Ds = 1;
  for (std::size_t i = 0; i < s; ++i) Ds = mul_checked(Ds, D);
  mul_checked(Ds, static_cast<i128>(N));  // bounds every numerator below

  // Grid over coordinates 1..s-1, row-major.
  std::size_t cells = 1;
  std::vector<std::size_t> dims;
  for (std::size_t i = 1; i < s; ++i) dims.push_back(G[i].size()), cells *= G[i].size();
  std::vector<i128> vol(cells, 1);  // prod_{i >= 1} Y_i over D^(s-1)
  for (std::size_t c = 0; c < cells; ++c) {
    std::size_t rest = c;
    for (std::size_t i = s - 1; i >= 1; --i) {
      vol[c] *= G[i][rest % dims[i - 1]];
      rest /= dims[i - 1];
    }
  }
  auto cell_of = [&](const std::vector<std::size_t>& id) {
    std::size_t c = 0;
    for (std::size_t i = 1; i < s; ++i) c = c * dims[i - 1] + id[i];
    return c;
  };
  // Open count at a cell is the inclusive prefix at the cell with every index minus one.
  auto shifted = [&](std::size_t c) -> std::ptrdiff_t {
    std::size_t rest = c, mult = 1, out = 0;
    for (std::size_t i = s - 1; i >= 1; --i) {
      std::size_t g = rest % dims[i - 1];
      rest /= dims[i - 1];
      if (g == 0) return -1;
      out += (g - 1) * mult;
      mult *= dims[i - 1];
    }
    return static_cast<std::ptrdiff_t>(out);
  };
  std::vector<std::ptrdiff_t> open_cell(cells);
  for (std::size_t c = 0; c < cells; ++c) open_cell[c] = shifted(c);

  std::vector<std::size_t> order(N);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return idx[a][0] < idx[b][0]; });

  std::vector<std::uint32_t> cnt(cells, 0);
  std::vector<std::uint32_t> pref(cells, 0);
  auto prefix = [&] {
    pref = cnt;
    std::size_t stride = 1;
    for (std::size_t i = s - 1; i >= 1; --i) {
      const std::size_t d = dims[i - 1];
      for (std::size_t c = 0; c < cells; ++c)
        if ((c / stride) % d != 0) pref[c] += pref[c - stride];
      stride *= d;
    }
  };

  i128 best = -1;
  std::tuple<std::size_t, std::size_t, bool> best_key{0, 0, false};
  auto consider = [&](i128 num, std::size_t g0, std::size_t c, bool closed) {
    std::tuple<std::size_t, std::size_t, bool> key{g0, c, closed};
    if (num > best || (num == best && key < best_key)) best = num, best_key = key;
  };
  const i128 n128 = static_cast<i128>(N);
  std::size_t next = 0;
  for (std::size_t g0 = 0; g0 < G[0].size(); ++g0) {
    const i128 y0 = G[0][g0];
    prefix();  // points with x_0 < y0
    for (std::size_t c = 0; c < cells; ++c) {
      const i128 open = open_cell[c] < 0 ? 0 : pref[static_cast<std::size_t>(open_cell[c])];
      consider(n128 * y0 * vol[c] - open * Ds, g0, c, false);
    }
    bool added = false;
    while (next < N && idx[order[next]][0] == g0) {
      ++cnt[cell_of(idx[order[next]])];
      ++next;
      added = true;
    }
    if (added) prefix();  // points with x_0 <= y0
    for (std::size_t c = 0; c < cells; ++c)
      consider(static_cast<i128>(pref[c]) * Ds - n128 * y0 * vol[c], g0, c, true);
  }

  DiscrepancyResult res;
  res.N = N;
  res.value = Rational::from_wide(best, n128 * Ds);
  res.value_float = res.value.to_double();
  auto [g0, c, closed] = best_key;
  res.closed = closed;
  res.corner.assign(s, Rational(0));
  res.corner[0] = Rational::from_wide(G[0][g0], D);
  std::size_t rest = c;
  for (std::size_t i = s - 1; i >= 1; --i) {
    res.corner[i] = Rational::from_wide(G[i][rest % dims[i - 1]], D);
    rest /= dims[i - 1];
  }
  return res;
}

std::vector<RationalPoint> to_rational_points(const std::vector<DigitalPoint>& points) {
  std::vector<RationalPoint> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    RationalPoint x(p.s());
    for (std::size_t i = 0; i < p.s(); ++i) x[i] = point_to_rational(p, i);
    out.push_back(std::move(x));
  }
  return out;
}

std::uint64_t delta_bound(std::uint32_t b, std::size_t t, std::size_t m, std::size_t s) {
  if (b <= 2) throw Error(Errc::UnsupportedBase, "delta bound is defined here for b > 2 only");
  if (t > m) throw Error(Errc::InvalidT, "t = " + std::to_string(t) + " exceeds m = " + std::to_string(m));
  if (s == 0) throw Error(Errc::InvalidArgument, "s must be >= 1");
  const std::uint64_t half = b / 2;
  u128 sum = 0;
  for (std::size_t i = 0; i < s; ++i) {
    u128 term = binomial(s - 1, i) * binomial(m - t, i);
    if (term == 0) break;
    for (std::size_t k = 0; k < i; ++k) {
      term *= half;
      if (term > UINT64_MAX) throw Error(Errc::Overflow, "delta bound exceeds 64 bits");
    }
    sum += term;
    if (sum > UINT64_MAX) throw Error(Errc::Overflow, "delta bound exceeds 64 bits");
  }
  return to_u64(sum * checked_pow(b, static_cast<unsigned>(t)), "delta bound");
}

BoundBreakdown prop2_bound(const BAdicStream& alpha, const TProfile& T, std::uint32_t q, std::size_t s,
                           std::uint64_t N) {
  if (N < 1) throw Error(Errc::InvalidArgument, "N must be >= 1");
  if (alpha.base() != q) throw Error(Errc::BaseMismatch, "alpha is not a q-adic integer for this q");
  if (q <= 2) throw Error(Errc::UnsupportedBase, "the bound needs q > 2");
  BoundBreakdown out;
  out.N = N;
  // r = floor(log_q N) by integer comparison.
  std::size_t r = 0;
  for (u128 pw = q; pw <= N; pw *= q) ++r;
  out.r = r;
  if (T.T.size() < r + 1)
    throw Error(Errc::ProfileTooShort, "T-profile covers m <= " + std::to_string(T.T.size() - 1) + ", bound needs " +
                                           std::to_string(r));
  out.alpha_digits = alpha.digits(r + 1);
  u128 np = N - checked_pow(q, static_cast<unsigned>(r));
  u128 pw = 1;
  for (std::size_t j = 0; j < r; ++j, pw *= q) np += out.alpha_digits[j] * pw;
  out.N_prime = to_u64(np, "N'");
  for (std::uint64_t x = out.N_prime; x > 0; x /= q) out.N_prime_digits.push_back(static_cast<Digit>(x % q));
  out.N_prime_digits.resize(std::max(out.N_prime_digits.size(), r + 1), 0);

  auto delta = [&](std::size_t j) { return delta_bound(q, T.T[j], j, s); };
  auto push = [&](BoundTerm::Part part, std::size_t j, std::uint64_t coef) {
    BoundTerm t{part, j, coef, delta(j), 0};
    t.value = to_u64(static_cast<u128>(coef) * t.delta, "bound term");
    out.terms.push_back(t);
    out.total = to_u64(static_cast<u128>(out.total) + t.value, "bound");
  };
  push(BoundTerm::Part::Head, 0, q - out.alpha_digits[0]);
  for (std::size_t j = 1; j + 1 <= r; ++j) push(BoundTerm::Part::Middle, j, q - 1 - out.alpha_digits[j]);
  for (std::size_t j = 0; j <= r; ++j) push(BoundTerm::Part::Tail, j, out.N_prime_digits[j]);
  return out;
}

std::string to_json(const BoundBreakdown& b) {
  nlohmann::ordered_json j;
  j["N"] = b.N;
  j["r"] = b.r;
  j["alpha_digits"] = b.alpha_digits;
  j["N_prime"] = b.N_prime;
  j["N_prime_digits"] = b.N_prime_digits;
  auto terms = nlohmann::ordered_json::array();
  for (const auto& t : b.terms) {
    const char* part = t.part == BoundTerm::Part::Head ? "head" : t.part == BoundTerm::Part::Middle ? "middle" : "tail";
    terms.push_back({{"part", part}, {"j", t.j}, {"coefficient", t.coefficient}, {"delta", t.delta}, {"value", t.value}});
  }
  j["terms"] = std::move(terms);
  j["total"] = b.total;
  j["discrepancy"] = "star";
  return j.dump() + "\n";
}

bool BoundTable::all_within() const {
  return std::all_of(rows.begin(), rows.end(), [](const BoundRow& r) { return r.within; });
}

BoundTable empirical_vs_bound(const MatrixSet& set, const BijectionFamily& bij, const IndexSequence& seq,
                              const std::vector<std::uint64_t>& N_list, std::size_t precision, unsigned threads) {
  if (set.s() > 3) throw Error(Errc::TooLarge, "exact star discrepancy supports s <= 3");
  BoundTable table;
  table.precision = precision == 0 ? set.depth() : precision;
  if (N_list.empty()) return table;
  const std::uint32_t q = set.field.q();
  const std::uint64_t n_max = *std::max_element(N_list.begin(), N_list.end());
  std::size_t r_max = 0;
  for (u128 pw = q; pw <= n_max; pw *= q) ++r_max;
  const TProfile profile = t_profile(set, std::min(r_max, set.depth()));
  const BAdicStream alpha = seq.eval(0);
  const auto pts = to_rational_points(generate_block(set, bij, seq, 0, n_max, table.precision, threads));
  for (std::uint64_t N : N_list) {
    std::vector<RationalPoint> prefix(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(N));
    DiscrepancyResult d;
    if (set.s() == 1) {
      std::vector<Rational> xs;
      for (auto& p : prefix) xs.push_back(p[0]);
      d = star_discrepancy_1d(xs);
    } else {
      d = star_discrepancy_exact(prefix);
    }
    BoundRow row;
    row.N = N;
    row.nd = d.value * Rational(static_cast<std::int64_t>(N));
    row.bound = prop2_bound(alpha, profile, q, set.s(), N).total;
    row.slack = Rational::from_wide(static_cast<i128>(N) * set.s(), checked_pow(q, static_cast<unsigned>(table.precision)));
    row.within = row.nd + row.slack <= Rational(static_cast<std::int64_t>(row.bound));
    table.rows.push_back(row);
  }
  return table;
}

void write_bound_csv(std::ostream& os, const BoundTable& table) {
  os << "N,ND*_exact,ND*_float,bound,ratio\n";
  for (const auto& r : table.rows) {
    const double ratio = r.bound == 0 ? 0.0 : r.nd.to_double() / static_cast<double>(r.bound);
    os << r.N << ',' << r.nd.to_string() << ',' << format_double(r.nd.to_double()) << ',' << r.bound << ','
       << format_double(ratio) << '\n';
  }
}

}  // namespace qmc
