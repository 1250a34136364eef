#include "qmc/quality.hpp"

#include <algorithm>
#include <functional>

#include <json.hpp>

#include "qmc/engine.hpp"
#include "qmc/error.hpp"
#include "qmc/inputseq.hpp"

namespace qmc {

namespace {

// Calls fn on every (d_1..d_s) with sum k, lexicographically ascending; stops
// when fn returns false.
bool for_each_composition(std::size_t s, std::size_t k, const std::function<bool(const std::vector<std::size_t>&)>& fn) {
  std::vector<std::size_t> d(s, 0);
  std::function<bool(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t left) -> bool {
    if (pos + 1 == s) {
      d[pos] = left;
      return fn(d);
    }
    for (std::size_t v = 0; v <= left; ++v) {
      d[pos] = v;
      if (!rec(pos + 1, left - v)) return false;
    }
    return true;
  };
  return rec(0, k);
}

std::uint64_t pow_u64(std::uint64_t b, std::size_t e) { return checked_pow(b, static_cast<unsigned>(e)); }

nlohmann::ordered_json report_json(const NetReport& r) {
  nlohmann::ordered_json j;
  j["t"] = r.t;
  j["m"] = r.m;
  j["s"] = r.s;
  j["b"] = r.b;
  j["k"] = r.k;
  j["pass"] = r.pass;
  j["vacuous"] = r.vacuous;
  if (r.first_failure) {
    nlohmann::ordered_json f;
    f["d"] = r.first_failure->interval.d;
    f["a"] = r.first_failure->interval.a;
    f["observed"] = r.first_failure->observed;
    f["expected"] = r.first_failure->expected;
    j["failure"] = std::move(f);
  } else {
    j["failure"] = nullptr;
  }
  return j;
}

}  // namespace

std::size_t rank_gf(const FieldSpec& field, const std::vector<Row>& rows, std::size_t columns) {
  std::vector<Row> a;
  a.reserve(rows.size());
  for (const auto& r : rows) {
    Row x(columns, 0);
    std::copy_n(r.begin(), std::min(columns, r.size()), x.begin());
    for (FqElem v : x)
      if (!field.contains(v)) throw Error(Errc::EntryOutOfRange, "entry outside the field");
    a.push_back(std::move(x));
  }
  std::size_t rank = 0;
  for (std::size_t c = 0; c < columns && rank < a.size(); ++c) {
    std::size_t piv = rank;
    while (piv < a.size() && a[piv][c] == 0) ++piv;
    if (piv == a.size()) continue;
    std::swap(a[rank], a[piv]);
    const FqElem inv = field.inv(a[rank][c]);
    for (std::size_t col = c; col < columns; ++col) a[rank][col] = field.mul(a[rank][col], inv);
    for (std::size_t i = rank + 1; i < a.size(); ++i) {
      const FqElem f = a[i][c];
      if (f == 0) continue;
      for (std::size_t col = c; col < columns; ++col)
        a[i][col] = field.sub(a[i][col], field.mul(f, a[rank][col]));
    }
    ++rank;
  }
  return rank;
}

Condition1Result check_condition1(const MatrixSet& set, std::size_t m, std::size_t k) {
  set.validate();
  if (k > m) throw Error(Errc::InvalidArgument, "condition 1 needs k <= m");
  if (k > set.depth())
    throw Error(Errc::DepthExceeded, "need " + std::to_string(k) + " rows, matrices have " + std::to_string(set.depth()));
  Condition1Result res;
  if (k == 0) return res;
  for_each_composition(set.s(), k, [&](const std::vector<std::size_t>& d) {
    std::vector<Row> rows;
    for (std::size_t i = 0; i < set.s(); ++i)
      for (std::size_t j = 1; j <= d[i]; ++j) rows.push_back(set[i].row_prefix(j, m));
    if (rank_gf(set.field, rows, m) < k) {
      res.holds = false;
      res.witness = d;
      return false;
    }
    return true;
  });
  return res;
}

std::size_t TProfile::t() const {
  std::size_t t = 0;
  for (auto v : T) t = std::max(t, v);
  return t;
}

TProfile t_profile(const MatrixSet& set, std::size_t m_max) {
  TProfile prof;
  prof.m_max = m_max;
  for (std::size_t m = 0; m <= m_max; ++m) {
    std::size_t best = 0;
    std::optional<std::vector<std::size_t>> witness;
    for (std::size_t k = 1; k <= m; ++k) {
      auto c = check_condition1(set, m, k);
      if (!c.holds) {
        witness = c.witness;
        break;
      }
      best = k;
    }
    prof.T.push_back(m - best);
    prof.witness.push_back(std::move(witness));
  }
  return prof;
}

bool check_condition2(const MatrixSet& set, const std::vector<std::size_t>& d_bounds) {
  set.validate();
  if (d_bounds.size() != set.s()) throw Error(Errc::SizeMismatch, "one bound per coordinate");
  std::vector<Row> rows;
  std::size_t width = 0;
  for (std::size_t i = 0; i < set.s(); ++i)
    for (std::size_t j = 1; j <= d_bounds[i]; ++j) {
      auto r = set[i].row(j);
      rows.emplace_back(r.begin(), r.end());
      width = std::max(width, r.size());
    }
  if (rows.empty()) return true;
  return rank_gf(set.field, rows, width) == rows.size();
}

NetReport verify_net(const std::vector<DigitalPoint>& points, std::size_t t, std::size_t m, std::uint64_t k) {
  if (points.empty()) throw Error(Errc::SizeMismatch, "no points");
  if (t > m) throw Error(Errc::InvalidT, "t > m");
  const std::uint32_t b = points.front().base();
  const std::size_t s = points.front().s();
  const std::uint64_t n_expected = pow_u64(b, m);
  if (n_expected > 1'000'000) throw Error(Errc::TooLarge, "b^m exceeds 10^6");
  if (points.size() != n_expected)
    throw Error(Errc::SizeMismatch, "expected " + std::to_string(n_expected) + " points, got " + std::to_string(points.size()));
  for (const auto& p : points)
    if (p.base() != b || p.s() != s || p.m() < m - t)
      throw Error(Errc::SizeMismatch, "points differ in base, dimension, or have too few digits");

  NetReport rep;
  rep.t = t;
  rep.m = m;
  rep.s = s;
  rep.b = b;
  rep.k = k;
  rep.vacuous = (t == m);
  const std::uint64_t per_box = pow_u64(b, t);
  const std::uint64_t boxes = pow_u64(b, m - t);
  std::vector<std::uint64_t> counts(boxes);

  rep.pass = for_each_composition(s, m - t, [&](const std::vector<std::size_t>& d) {
    std::fill(counts.begin(), counts.end(), 0);
    for (const auto& p : points) {
      std::uint64_t key = 0;
      for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < d[i]; ++j) key = key * b + p.digit(i, j);
      ++counts[key];
    }
    for (std::uint64_t key = 0; key < boxes; ++key) {
      if (counts[key] == per_box) continue;
      NetFailure f;
      f.interval.d = d;
      f.interval.a.assign(s, 0);
      std::uint64_t rest = key;
      for (std::size_t i = s; i-- > 0;) {
        const std::uint64_t span = pow_u64(b, d[i]);
        f.interval.a[i] = rest % span;
        rest /= span;
      }
      f.observed = counts[key];
      f.expected = per_box;
      rep.first_failure = std::move(f);
      return false;
    }
    return true;
  });
  return rep;
}

std::size_t minimal_net_t(const std::vector<DigitalPoint>& points, std::size_t m) {
  for (std::size_t t = 0; t <= m; ++t)
    if (verify_net(points, t, m).pass) return t;
  return m;  // unreachable: t = m always passes
}

std::vector<NetReport> verify_T_sequence(const MatrixSet& set, const BijectionFamily& bij, const IndexSequence& seq,
                                         std::size_t m, std::uint64_t k_first, std::uint64_t k_last,
                                         const std::optional<TProfile>& profile, unsigned threads) {
  const TProfile prof = profile ? *profile : t_profile(set, m);
  if (prof.m_max < m) throw Error(Errc::ProfileTooShort, "profile does not cover m = " + std::to_string(m));
  const std::size_t t = prof.T[m];
  const std::uint64_t block = pow_u64(set.field.q(), m);
  std::vector<NetReport> out;
  for (std::uint64_t k = k_first; k <= k_last; ++k) {
    auto pts = generate_block(set, bij, seq, k * block, block, m, threads);
    out.push_back(verify_net(pts, t, m, k));
  }
  return out;
}

Rational elementary_frequency_deviation(const std::vector<DigitalPoint>& points, const std::vector<std::size_t>& d) {
  if (points.empty()) throw Error(Errc::SizeMismatch, "no points");
  const std::uint32_t b = points.front().base();
  const std::size_t s = points.front().s();
  if (d.size() != s) throw Error(Errc::SizeMismatch, "one depth per coordinate");
  std::size_t total = 0;
  for (auto x : d) total += x;
  const std::uint64_t boxes = pow_u64(b, total);
  if (boxes > 10'000'000) throw Error(Errc::TooLarge, "too many intervals");
  std::vector<std::uint64_t> counts(boxes, 0);
  for (const auto& p : points) {
    if (p.m() < *std::max_element(d.begin(), d.end())) throw Error(Errc::SizeMismatch, "points have too few digits");
    std::uint64_t key = 0;
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = 0; j < d[i]; ++j) key = key * b + p.digit(i, j);
    ++counts[key];
  }
  // |c/N - 1/boxes| = |c*boxes - N| / (N*boxes)
  const i128 n = static_cast<i128>(points.size());
  i128 worst = 0;
  for (auto c : counts) {
    i128 diff = static_cast<i128>(c) * boxes - n;
    worst = std::max(worst, diff < 0 ? -diff : diff);
  }
  return Rational::from_wide(worst, n * boxes);
}

std::string to_json(const TProfile& profile) {
  nlohmann::ordered_json j;
  j["m_max"] = profile.m_max;
  j["t"] = profile.t();
  auto rows = nlohmann::ordered_json::array();
  for (std::size_t m = 0; m <= profile.m_max; ++m) {
    nlohmann::ordered_json r;
    r["m"] = m;
    r["T"] = profile.T[m];
    r["witness"] = profile.witness[m] ? nlohmann::ordered_json(*profile.witness[m]) : nlohmann::ordered_json(nullptr);
    rows.push_back(std::move(r));
  }
  j["profile"] = std::move(rows);
  return j.dump(2);
}

std::string to_json(const NetReport& report) { return report_json(report).dump(2); }

std::string to_json(const std::vector<NetReport>& reports) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : reports) arr.push_back(report_json(r));
  return arr.dump(2);
}

}  // namespace qmc
