#include "qmc/engine.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "qmc/error.hpp"
#include "qmc/parallel.hpp"

namespace qmc {

namespace {

void check_set(const MatrixSet& set, std::size_t m) {
  set.validate();
  if (m < 1) throw Error(Errc::InvalidArgument, "precision m must be >= 1");
  if (m > set.depth())
    throw Error(Errc::DepthExceeded,
                "precision " + std::to_string(m) + " exceeds matrix depth " + std::to_string(set.depth()));
}

std::size_t digits_needed(const MatrixSet& set, std::size_t m) {
  std::size_t L = 0;
  for (const auto& mat : set.matrices)
    for (std::size_t j = 1; j <= m; ++j) L = std::max(L, mat.row_length(j));
  return L;
}

// Shared by both routes: digit (i,j) from the field images of the input digits.
DigitalPoint apply_matrices(const MatrixSet& set, const BijectionFamily& bij, const std::vector<FqElem>& images,
                            std::uint64_t n, std::size_t m) {
  const FieldSpec& f = set.field;
  DigitalPoint pt(n, f.q(), set.s(), m);
  for (std::size_t i = 0; i < set.s(); ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      auto row = set[i].row(j);
      FqElem y = 0;
      const std::size_t len = std::min(row.size(), images.size());
      for (std::size_t r = 0; r < len; ++r)
        if (row[r] != 0) y = f.add(y, f.mul(row[r], images[r]));
      pt.set_digit(i, j - 1, bij.lambda(i, j - 1, y));
    }
  }
  return pt;
}

bool is_permutation_of(const Permutation& p, std::uint32_t q) {
  if (p.size() != q) return false;
  std::vector<bool> seen(q, false);
  for (auto x : p) {
    if (x >= q || seen[x]) return false;
    seen[x] = true;
  }
  return true;
}

}  // namespace

BijectionFamily::BijectionFamily(std::vector<Permutation> psi, std::vector<std::vector<Permutation>> lambda)
    : psi_(std::move(psi)), lambda_(std::move(lambda)) {}

void BijectionFamily::validate(std::uint32_t q) const {
  for (std::size_t r = 0; r < psi_.size(); ++r)
    if (!is_permutation_of(psi_[r], q))
      throw Error(Errc::InvalidArgument, "psi_" + std::to_string(r) + " is not a permutation of 0.." + std::to_string(q - 1));
  for (std::size_t i = 0; i < lambda_.size(); ++i)
    for (std::size_t j = 0; j < lambda_[i].size(); ++j)
      if (!is_permutation_of(lambda_[i][j], q))
        throw Error(Errc::InvalidArgument, "lambda_{" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                               "} is not a permutation of 0.." + std::to_string(q - 1));
}

std::size_t BijectionFamily::psi_zero_from() const noexcept {
  std::size_t r0 = psi_.size();
  while (r0 > 0 && psi_[r0 - 1][0] == 0) --r0;
  return r0;
}

BijectionFamily bijections_from_json(std::string_view text) {
  try {
    auto j = nlohmann::json::parse(text);
    std::vector<Permutation> psi;
    std::vector<std::vector<Permutation>> lambda;
    if (j.contains("psi")) psi = j["psi"].get<std::vector<Permutation>>();
    if (j.contains("lambda")) lambda = j["lambda"].get<std::vector<std::vector<Permutation>>>();
    return BijectionFamily(std::move(psi), std::move(lambda));
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::SchemaError, std::string("bijection file: ") + e.what());
  }
}

std::string bijections_to_json(const BijectionFamily& bij) {
  nlohmann::ordered_json j;
  j["psi"] = bij.psi_tables();
  j["lambda"] = bij.lambda_tables();
  return j.dump() + "\n";
}

BijectionFamily load_bijections(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(Errc::ConfigError, "cannot read " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return bijections_from_json(ss.str());
}

DigitalPoint DigitalPoint::truncated(std::size_t m) const {
  if (m > m_) throw Error(Errc::DepthExceeded, "cannot extend a point's precision");
  DigitalPoint out(index_, base_, s_, m);
  for (std::size_t i = 0; i < s_; ++i)
    for (std::size_t j = 0; j < m; ++j) out.set_digit(i, j, digit(i, j));
  return out;
}

DigitalPoint generate_point(const MatrixSet& set, const BijectionFamily& bij, const IndexSequence& seq,
                            std::uint64_t n, std::size_t m) {
  check_set(set, m);
  if (seq.base() != set.field.q())
    throw Error(Errc::BaseMismatch, "sequence base " + std::to_string(seq.base()) + " vs field order " +
                                        std::to_string(set.field.q()));
  const std::size_t L = digits_needed(set, m);
  BAdicStream sn = seq.eval(n);
  std::vector<FqElem> images(L);
  for (std::size_t r = 0; r < L; ++r) images[r] = bij.psi(r, sn.digit(r));
  return apply_matrices(set, bij, images, n, m);
}

DigitalPoint generate_point_classical(const MatrixSet& set, const BijectionFamily& bij, std::uint64_t n,
                                      std::size_t m) {
  check_set(set, m);
  const std::uint32_t b = set.field.q();
  std::vector<Digit> a;
  for (std::uint64_t x = n; x > 0; x /= b) a.push_back(static_cast<Digit>(x % b));
  const std::size_t terms = std::max(a.size(), bij.psi_zero_from());
  std::vector<FqElem> images(terms);
  for (std::size_t r = 0; r < terms; ++r) images[r] = bij.psi(r, r < a.size() ? a[r] : 0);
  return apply_matrices(set, bij, images, n, m);
}

std::vector<DigitalPoint> generate_block(const MatrixSet& set, const BijectionFamily& bij, const IndexSequence& seq,
                                         std::uint64_t n_start, std::uint64_t count, std::size_t m,
                                         unsigned threads) {
  check_set(set, m);
  std::vector<DigitalPoint> out(count);
  parallel_for(count, threads, [&](std::uint64_t k) { out[k] = generate_point(set, bij, seq, n_start + k, m); });
  return out;
}

std::uint64_t point_numerator(const DigitalPoint& p, std::size_t i) {
  if (i >= p.s()) throw Error(Errc::OutOfRange, "coordinate index out of range");
  u128 a = 0;
  for (std::size_t j = 0; j < p.m(); ++j) {
    a = a * p.base() + p.digit(i, j);
    if (a > UINT64_MAX) throw Error(Errc::Overflow, "b^m exceeds 64 bits");
  }
  return static_cast<std::uint64_t>(a);
}

std::string format_double(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

Rational point_to_rational(const DigitalPoint& p, std::size_t i) {
  std::uint64_t den = checked_pow(p.base(), static_cast<unsigned>(p.m()));
  return Rational::from_wide(point_numerator(p, i), den);
}

double point_to_float(const DigitalPoint& p, std::size_t i) {
  return static_cast<double>(point_numerator(p, i)) / static_cast<double>(checked_pow(p.base(), static_cast<unsigned>(p.m())));
}

void write_points_csv(std::ostream& os, const std::vector<DigitalPoint>& points, ExportMode mode) {
  const std::size_t s = points.empty() ? 0 : points.front().s();
  os << "n";
  for (std::size_t i = 1; i <= s; ++i) os << ",x" << i;
  os << "\n";
  for (const auto& p : points) {
    os << p.index();
    const std::uint64_t den = checked_pow(p.base(), static_cast<unsigned>(p.m()));
    for (std::size_t i = 0; i < p.s(); ++i) {
      if (mode == ExportMode::Exact) {
        os << ',' << point_numerator(p, i) << '/' << den;
      } else {
        os << ',' << format_double(point_to_float(p, i));
      }
    }
    os << "\n";
  }
}

std::string points_to_json(const std::vector<DigitalPoint>& points) {
  nlohmann::ordered_json j;
  j["base"] = points.empty() ? 0 : points.front().base();
  j["s"] = points.empty() ? 0 : points.front().s();
  j["m"] = points.empty() ? 0 : points.front().m();
  auto arr = nlohmann::ordered_json::array();
  for (const auto& p : points) {
    nlohmann::ordered_json pj;
    pj["n"] = p.index();
    auto rows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < p.s(); ++i) {
      std::vector<Digit> r(p.m());
      for (std::size_t jj = 0; jj < p.m(); ++jj) r[jj] = p.digit(i, jj);
      rows.push_back(r);
    }
    pj["digits"] = std::move(rows);
    arr.push_back(std::move(pj));
  }
  j["points"] = std::move(arr);
  return j.dump() + "\n";
}

}  // namespace qmc
