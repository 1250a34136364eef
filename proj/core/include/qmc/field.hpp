#pragma once

#include <cstdint>
#include <memory>
#include <vector>

namespace qmc {

// Field element as its index 0..q-1. Index i is the polynomial whose
// coefficients are the base-p digits of i (constant term first), so for a
// prime field the index arithmetic is arithmetic mod p.
using FqElem = std::uint32_t;

inline constexpr std::uint32_t kMaxFieldOrder = 1u << 16;

bool is_prime(std::uint64_t n) noexcept;

/**
 * GF(q), q = p^e <= 2^16. Immutable; copies share the arithmetic tables.
 *
 * For e > 1 the reduction polynomial is the lexicographically smallest monic
 * irreducible of degree e, ordering candidates by the integer whose base-p
 * digits are the non-leading coefficients. This keeps matrix files portable.
 */
class FieldSpec {
 public:
  static FieldSpec make(std::uint32_t p, std::uint32_t e = 1);

  std::uint32_t p() const noexcept { return p_; }
  std::uint32_t e() const noexcept { return e_; }
  std::uint32_t q() const noexcept { return q_; }
  bool is_prime_field() const noexcept { return e_ == 1; }

  // Monic reduction polynomial, constant coefficient first (size e+1); empty for e = 1.
  const std::vector<std::uint32_t>& reduction_polynomial() const noexcept;

  FqElem add(FqElem a, FqElem b) const noexcept;
  FqElem sub(FqElem a, FqElem b) const noexcept { return add(a, neg(b)); }
  FqElem mul(FqElem a, FqElem b) const noexcept;
  FqElem neg(FqElem a) const noexcept;
  FqElem inv(FqElem a) const;  // throws DivisionByZero for 0
  FqElem pow(FqElem a, std::uint64_t k) const noexcept;

  bool contains(FqElem a) const noexcept { return a < q_; }

  friend bool operator==(const FieldSpec& a, const FieldSpec& b) noexcept {
    return a.p_ == b.p_ && a.e_ == b.e_;
  }

 private:
  struct Tables;
  FieldSpec() = default;

  std::uint32_t p_ = 0;
  std::uint32_t e_ = 0;
  std::uint32_t q_ = 0;
  std::shared_ptr<const Tables> t_;
};

inline FieldSpec make_field(std::uint32_t p, std::uint32_t e = 1) { return FieldSpec::make(p, e); }

}  // namespace qmc
