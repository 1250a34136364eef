#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qmc/field.hpp"

namespace qmc {

using Row = std::vector<FqElem>;

/**
 * Finite-row generating matrix over GF(q): row j (1-based) is the finite
 * coefficient vector (c_{j,0}, ..., c_{j,L_j - 1}) with trailing zeros
 * trimmed. Only rows 1..depth() exist; asking for more is DepthExceeded.
 */
class GeneratingMatrix {
 public:
  GeneratingMatrix(FieldSpec field, std::vector<Row> rows);

  const FieldSpec& field() const noexcept { return field_; }
  std::size_t depth() const noexcept { return rows_.size(); }

  std::span<const FqElem> row(std::size_t j) const;
  // c_{j,r}; zero past the row length.
  FqElem entry(std::size_t j, std::size_t r) const;
  // L_j = 1 + max{r : c_{j,r} != 0}, 0 for a zero row.
  std::size_t row_length(std::size_t j) const;
  // First `columns` entries of row j, zero-padded.
  Row row_prefix(std::size_t j, std::size_t columns) const;

  const std::vector<Row>& rows() const noexcept { return rows_; }

  friend bool operator==(const GeneratingMatrix& a, const GeneratingMatrix& b) {
    return a.field_ == b.field_ && a.rows_ == b.rows_;
  }

 private:
  FieldSpec field_;
  std::vector<Row> rows_;
};

struct MatrixSet {
  FieldSpec field;
  std::vector<GeneratingMatrix> matrices;
  std::optional<std::string> convention;

  std::size_t s() const noexcept { return matrices.size(); }
  std::size_t depth() const noexcept;  // min depth over the matrices
  const GeneratingMatrix& operator[](std::size_t i) const { return matrices.at(i); }

  // Checks s >= 1 and that every matrix lives over `field`.
  void validate() const;
};

MatrixSet make_matrix_set(std::vector<GeneratingMatrix> matrices, std::optional<std::string> convention = {});

GeneratingMatrix identity_matrix(const FieldSpec& field, std::size_t depth);
// GF(2); row j has ones at columns 2j-2 and 2j-1.
GeneratingMatrix paper_pairs_matrix(std::size_t depth);

// Unsigned Stirling numbers of the first kind, c(n,k) = c(n-1,k-1) + (n-1) c(n-1,k).
std::uint64_t stirling_first_unsigned(unsigned n, unsigned k);

enum class StirlingConvention {
  TruncatedUnsigned,      // c(r+1, j) i^(r+1-j) for j-1 <= r < s j
  LowerTriangular,        // c(j, r+1) i^(j-1-r) for r < j
  FallingFactorialTaylor  // coefficient of (x-(i-1))^(j-1) in x(x-1)...(x-r+1)
};
std::string_view to_string(StirlingConvention c) noexcept;

// Entry c^{(i)}_{j,r} mod p under a candidate convention (i, j 1-based; s the dimension).
FqElem stirling_entry(StirlingConvention conv, std::uint32_t p, std::size_t s, std::size_t i, std::size_t j,
                      std::size_t r);

inline constexpr std::size_t kStirlingSelfCheckDepth = 8;

/**
 * Stirling matrices for coordinates 1..s over a prime field. Candidate
 * conventions are tried in declaration order; the first whose set passes the
 * rank condition with T = 0 for every m <= min(depth, 8) is used and recorded
 * in MatrixSet::convention. Throws ConventionRejected when none passes.
 */
MatrixSet stirling_matrix_set(const FieldSpec& field, std::size_t s, std::size_t depth);
// Matrix i (1-based) of the gated set for coordinates 1..i.
GeneratingMatrix stirling_matrix(const FieldSpec& field, std::size_t i, std::size_t depth);

std::size_t row_length(const GeneratingMatrix& m, std::size_t j);
// L_j^{(i)} <= s j for every matrix and j <= up_to_j.
bool has_optimal_row_lengths(const MatrixSet& set, std::size_t up_to_j);

// Matrix-set JSON: {"q","p","e","s","convention","matrices"}; rows list column 0 first.
std::string matrix_set_to_json(const MatrixSet& set);
MatrixSet matrix_set_from_json(std::string_view text);
void save_matrix_set(const MatrixSet& set, const std::string& path);
MatrixSet load_matrix_set(const std::string& path);

}  // namespace qmc
