#include "qmc/genmatrix.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qmc/error.hpp"
#include "qmc/quality.hpp"

namespace qmc {

namespace {

void trim(Row& r) {
  while (!r.empty() && r.back() == 0) r.pop_back();
}

// c(n,k) mod p for 0 <= k <= n <= n_max, plus binomials mod p.
class ModTables {
 public:
  ModTables(std::uint32_t p, unsigned n_max) : p_(p), n_(n_max + 1) {
    stirling_.assign(static_cast<std::size_t>(n_) * n_, 0);
    binom_.assign(static_cast<std::size_t>(n_) * n_, 0);
    stirling_[0] = 1 % p;
    binom_[0] = 1 % p;
    for (unsigned m = 1; m < n_; ++m) {
      binom_[idx(m, 0)] = 1 % p;
      for (unsigned j = 1; j <= m; ++j) {
        stirling_[idx(m, j)] = (stirling_[idx(m - 1, j - 1)] + (m - 1) % p * stirling_[idx(m - 1, j)]) % p;
        binom_[idx(m, j)] = (binom_[idx(m - 1, j - 1)] + binom_[idx(m - 1, j)]) % p;
      }
    }
  }
  std::uint32_t p() const noexcept { return p_; }
  std::uint64_t stirling(unsigned n, unsigned k) const { return k <= n ? stirling_[idx(n, k)] : 0; }
  std::uint64_t binom(unsigned n, unsigned k) const { return k <= n ? binom_[idx(n, k)] : 0; }

 private:
  std::size_t idx(unsigned n, unsigned k) const { return static_cast<std::size_t>(n) * n_ + k; }
  std::uint32_t p_;
  unsigned n_;
  std::vector<std::uint64_t> stirling_, binom_;
};

std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint32_t p) {
  std::uint64_t r = 1 % p;
  a %= p;
  while (e > 0) {
    if (e & 1) r = r * a % p;
    a = a * a % p;
    e >>= 1;
  }
  return r;
}

FqElem stirling_entry_with(const ModTables& t, StirlingConvention conv, std::size_t s, std::size_t i,
                           std::size_t j, std::size_t r) {
  const std::uint32_t p = t.p();
  const auto ui = static_cast<unsigned>(i), uj = static_cast<unsigned>(j), ur = static_cast<unsigned>(r);
  switch (conv) {
    case StirlingConvention::TruncatedUnsigned:
      if (r + 1 < j || r >= s * j) return 0;
      return static_cast<FqElem>(t.stirling(ur + 1, uj) * pow_mod(ui, ur + 1 - uj, p) % p);
    case StirlingConvention::LowerTriangular:
      if (r >= j) return 0;
      return static_cast<FqElem>(t.stirling(uj, ur + 1) * pow_mod(ui, uj - 1 - ur, p) % p);
    case StirlingConvention::FallingFactorialTaylor: {
      // x(x-1)...(x-r+1) = sum_k s(r,k) x^k with s(r,k) = (-1)^(r-k) c(r,k);
      // x^k = sum_l C(k,l) c^(k-l) (x-c)^l.
      const std::uint64_t node = (i - 1) % p;
      std::uint64_t acc = 0;
      for (unsigned k = uj - 1; k <= ur; ++k) {
        std::uint64_t c = t.stirling(ur, k);
        if (c == 0) continue;
        if ((ur - k) % 2 == 1) c = (p - c) % p;
        acc = (acc + c * t.binom(k, uj - 1) % p * pow_mod(node, k - (uj - 1), p)) % p;
      }
      return static_cast<FqElem>(acc);
    }
  }
  return 0;
}

// Row j of a Stirling matrix, computed up to column `limit` and trimmed.
Row stirling_row(const ModTables& t, StirlingConvention conv, std::size_t s, std::size_t i, std::size_t j,
                 std::size_t limit) {
  Row row(limit, 0);
  for (std::size_t r = 0; r < limit; ++r) row[r] = stirling_entry_with(t, conv, s, i, j, r);
  trim(row);
  return row;
}

// Columns beyond which the convention guarantees zeros in row j.
std::size_t stirling_row_bound(StirlingConvention conv, std::uint32_t p, std::size_t s, std::size_t i,
                               std::size_t j) {
  switch (conv) {
    case StirlingConvention::TruncatedUnsigned: return s * j;
    case StirlingConvention::LowerTriangular: return j;
    // x(x-1)...(x-r+1) contains (x-c)^j once r > c + (j-1)p.
    case StirlingConvention::FallingFactorialTaylor: return (i - 1) % p + (j - 1) * p + 1;
  }
  return 0;
}

MatrixSet build_stirling(StirlingConvention conv, const FieldSpec& field, std::size_t s, std::size_t depth) {
  std::size_t widest = 1;
  for (std::size_t i = 1; i <= s; ++i) widest = std::max(widest, stirling_row_bound(conv, field.p(), s, i, depth));
  ModTables tables(field.p(), static_cast<unsigned>(widest + 1));
  std::vector<GeneratingMatrix> mats;
  for (std::size_t i = 1; i <= s; ++i) {
    std::vector<Row> rows;
    for (std::size_t j = 1; j <= depth; ++j)
      rows.push_back(stirling_row(tables, conv, s, i, j, stirling_row_bound(conv, field.p(), s, i, j)));
    mats.emplace_back(field, std::move(rows));
  }
  return make_matrix_set(std::move(mats), std::string(to_string(conv)));
}

}  // namespace

GeneratingMatrix::GeneratingMatrix(FieldSpec field, std::vector<Row> rows)
    : field_(std::move(field)), rows_(std::move(rows)) {
  for (auto& r : rows_) {
    for (FqElem x : r)
      if (!field_.contains(x))
        throw Error(Errc::EntryOutOfRange,
                    "entry " + std::to_string(x) + " not in GF(" + std::to_string(field_.q()) + ")");
    trim(r);
  }
}

std::span<const FqElem> GeneratingMatrix::row(std::size_t j) const {
  if (j == 0 || j > rows_.size())
    throw Error(Errc::DepthExceeded, "row " + std::to_string(j) + " outside 1.." + std::to_string(rows_.size()));
  return rows_[j - 1];
}

FqElem GeneratingMatrix::entry(std::size_t j, std::size_t r) const {
  auto rw = row(j);
  return r < rw.size() ? rw[r] : 0;
}

std::size_t GeneratingMatrix::row_length(std::size_t j) const { return row(j).size(); }

Row GeneratingMatrix::row_prefix(std::size_t j, std::size_t columns) const {
  auto rw = row(j);
  Row out(columns, 0);
  std::copy_n(rw.begin(), std::min(columns, rw.size()), out.begin());
  return out;
}

std::size_t MatrixSet::depth() const noexcept {
  std::size_t d = matrices.empty() ? 0 : matrices.front().depth();
  for (const auto& m : matrices) d = std::min(d, m.depth());
  return d;
}

void MatrixSet::validate() const {
  if (matrices.empty()) throw Error(Errc::InvalidArgument, "matrix set needs s >= 1");
  for (const auto& m : matrices)
    if (!(m.field() == field)) throw Error(Errc::InvalidArgument, "matrices over different fields");
}

MatrixSet make_matrix_set(std::vector<GeneratingMatrix> matrices, std::optional<std::string> convention) {
  if (matrices.empty()) throw Error(Errc::InvalidArgument, "matrix set needs s >= 1");
  MatrixSet set{matrices.front().field(), std::move(matrices), std::move(convention)};
  set.validate();
  return set;
}

GeneratingMatrix identity_matrix(const FieldSpec& field, std::size_t depth) {
  if (depth < 1) throw Error(Errc::InvalidArgument, "depth must be >= 1");
  std::vector<Row> rows(depth);
  for (std::size_t j = 1; j <= depth; ++j) {
    rows[j - 1].assign(j, 0);
    rows[j - 1][j - 1] = 1;
  }
  return GeneratingMatrix(field, std::move(rows));
}

GeneratingMatrix paper_pairs_matrix(std::size_t depth) {
  if (depth < 1) throw Error(Errc::InvalidArgument, "depth must be >= 1");
  std::vector<Row> rows(depth);
  for (std::size_t j = 1; j <= depth; ++j) {
    rows[j - 1].assign(2 * j, 0);
    rows[j - 1][2 * j - 2] = 1;
    rows[j - 1][2 * j - 1] = 1;
  }
  return GeneratingMatrix(make_field(2), std::move(rows));
}

std::uint64_t stirling_first_unsigned(unsigned n, unsigned k) {
  std::vector<std::uint64_t> prev(n + 2, 0), cur(n + 2, 0);
  prev[0] = 1;
  for (unsigned m = 1; m <= n; ++m) {
    std::fill(cur.begin(), cur.end(), 0);
    for (unsigned j = 1; j <= m; ++j) {
      const std::uint64_t f = m - 1;
      if (f != 0 && prev[j] > (UINT64_MAX - prev[j - 1]) / f)
        throw Error(Errc::Overflow, "Stirling number overflows 64 bits");
      cur[j] = prev[j - 1] + f * prev[j];
    }
    std::swap(prev, cur);
  }
  return k <= n ? prev[k] : 0;
}

std::string_view to_string(StirlingConvention c) noexcept {
  switch (c) {
    case StirlingConvention::TruncatedUnsigned: return "stirling-truncated-unsigned";
    case StirlingConvention::LowerTriangular: return "stirling-lower-triangular";
    case StirlingConvention::FallingFactorialTaylor: return "stirling-falling-factorial-taylor";
  }
  return "unknown";
}

FqElem stirling_entry(StirlingConvention conv, std::uint32_t p, std::size_t s, std::size_t i, std::size_t j,
                      std::size_t r) {
  ModTables tables(p, static_cast<unsigned>(r + 1));
  return stirling_entry_with(tables, conv, s, i, j, r);
}

MatrixSet stirling_matrix_set(const FieldSpec& field, std::size_t s, std::size_t depth) {
  if (!field.is_prime_field())
    throw Error(Errc::InvalidArgument, "Stirling matrices need a prime field (entries are reduced mod p)");
  if (s < 1 || depth < 1) throw Error(Errc::InvalidArgument, "Stirling matrices need s >= 1 and depth >= 1");
  const std::size_t check_depth = std::min(depth, kStirlingSelfCheckDepth);
  for (auto conv : {StirlingConvention::TruncatedUnsigned, StirlingConvention::LowerTriangular,
                    StirlingConvention::FallingFactorialTaylor}) {
    MatrixSet set = build_stirling(conv, field, s, depth);
    TProfile prof = t_profile(set, check_depth);
    if (prof.t() == 0) return set;
  }
  throw Error(Errc::ConventionRejected, "no Stirling convention reaches T = 0 up to m = " +
                                            std::to_string(check_depth) + " for s = " + std::to_string(s) +
                                            " in base " + std::to_string(field.p()));
}

GeneratingMatrix stirling_matrix(const FieldSpec& field, std::size_t i, std::size_t depth) {
  if (i < 1) throw Error(Errc::InvalidArgument, "coordinate index is 1-based");
  return stirling_matrix_set(field, i, depth).matrices.back();
}

std::size_t row_length(const GeneratingMatrix& m, std::size_t j) { return m.row_length(j); }

bool has_optimal_row_lengths(const MatrixSet& set, std::size_t up_to_j) {
  for (const auto& m : set.matrices)
    for (std::size_t j = 1; j <= up_to_j; ++j)
      if (m.row_length(j) > set.s() * j) return false;
  return true;
}

std::string matrix_set_to_json(const MatrixSet& set) {
  nlohmann::ordered_json j;
  j["q"] = set.field.q();
  j["p"] = set.field.p();
  j["e"] = set.field.e();
  j["s"] = set.s();
  j["convention"] = set.convention ? nlohmann::ordered_json(*set.convention) : nlohmann::ordered_json(nullptr);
  auto mats = nlohmann::ordered_json::array();
  for (const auto& m : set.matrices) mats.push_back(m.rows());
  j["matrices"] = std::move(mats);
  return j.dump() + "\n";
}

MatrixSet matrix_set_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::SchemaError, std::string("invalid JSON: ") + e.what());
  }
  auto need_uint = [&](const char* key) -> std::uint64_t {
    if (!j.is_object() || !j.contains(key) || !j[key].is_number_unsigned())
      throw Error(Errc::SchemaError, std::string("missing or non-integer field '") + key + "'");
    return j[key].get<std::uint64_t>();
  };
  auto q = need_uint("q");
  auto p = need_uint("p");
  auto e = need_uint("e");
  auto s = need_uint("s");
  if (p > kMaxFieldOrder || e > 16) throw Error(Errc::SchemaError, "field parameters out of range");
  FieldSpec field = make_field(static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(e));
  if (field.q() != q) throw Error(Errc::SchemaError, "q does not equal p^e");

  std::optional<std::string> convention;
  if (j.contains("convention") && !j["convention"].is_null()) {
    if (!j["convention"].is_string()) throw Error(Errc::SchemaError, "'convention' must be a string or null");
    convention = j["convention"].get<std::string>();
  }
  if (!j.contains("matrices") || !j["matrices"].is_array())
    throw Error(Errc::SchemaError, "missing 'matrices' array");
  const auto& mats = j["matrices"];
  if (mats.size() != s || s == 0) throw Error(Errc::SchemaError, "'s' does not match the number of matrices");

  std::vector<GeneratingMatrix> out;
  for (const auto& mj : mats) {
    if (!mj.is_array() || mj.empty()) throw Error(Errc::SchemaError, "each matrix must be a non-empty list of rows");
    std::vector<Row> rows;
    for (const auto& rj : mj) {
      if (!rj.is_array()) throw Error(Errc::SchemaError, "each row must be a list");
      Row row;
      for (const auto& x : rj) {
        if (!x.is_number_integer()) throw Error(Errc::SchemaError, "entries must be integers");
        auto v = x.get<std::int64_t>();
        if (v < 0 || v >= static_cast<std::int64_t>(q))
          throw Error(Errc::EntryOutOfRange, "entry " + std::to_string(v) + " not in 0.." + std::to_string(q - 1));
        row.push_back(static_cast<FqElem>(v));
      }
      rows.push_back(std::move(row));
    }
    out.emplace_back(field, std::move(rows));
  }
  return make_matrix_set(std::move(out), std::move(convention));
}

void save_matrix_set(const MatrixSet& set, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(Errc::ConfigError, "cannot write " + path);
  os << matrix_set_to_json(set);
}

MatrixSet load_matrix_set(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(Errc::ConfigError, "cannot read " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return matrix_set_from_json(ss.str());
}

}  // namespace qmc
