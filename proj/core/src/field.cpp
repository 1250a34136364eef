#include "qmc/field.hpp"

#include <string>

#include "qmc/error.hpp"

namespace qmc {

namespace {

constexpr std::uint32_t kFullTableLimit = 256;

using Poly = std::vector<std::uint32_t>;  // coefficients mod p, constant first

Poly to_poly(std::uint32_t index, std::uint32_t p, std::uint32_t len) {
  Poly out(len, 0);
  for (std::uint32_t k = 0; k < len && index > 0; ++k) {
    out[k] = index % p;
    index /= p;
  }
  return out;
}

std::uint32_t from_poly(const Poly& c, std::uint32_t p) {
  std::uint32_t v = 0;
  for (std::size_t k = c.size(); k-- > 0;) v = v * p + c[k];
  return v;
}

int degree(const Poly& a) {
  for (std::size_t k = a.size(); k-- > 0;)
    if (a[k] != 0) return static_cast<int>(k);
  return -1;
}

std::uint32_t inv_mod_prime(std::uint32_t a, std::uint32_t p) {
  std::uint64_t r = 1, base = a % p;
  for (std::uint32_t k = p - 2; k > 0; k >>= 1) {
    if (k & 1) r = r * base % p;
    base = base * base % p;
  }
  return static_cast<std::uint32_t>(r);
}

// Remainder of a modulo monic-or-not m over GF(p).
Poly poly_mod(Poly a, const Poly& m, std::uint32_t p) {
  int dm = degree(m);
  std::uint32_t lead_inv = inv_mod_prime(m[dm], p);
  for (int da = degree(a); da >= dm; da = degree(a)) {
    std::uint64_t f = static_cast<std::uint64_t>(a[da]) * lead_inv % p;
    for (int k = 0; k <= dm; ++k) {
      std::uint64_t sub = f * m[k] % p;
      a[da - dm + k] = static_cast<std::uint32_t>((a[da - dm + k] + p - sub) % p);
    }
  }
  return a;
}

bool is_irreducible(const Poly& f, std::uint32_t p) {
  int e = degree(f);
  // Trial division by every monic polynomial of degree 1..e/2.
  for (int d = 1; d <= e / 2; ++d) {
    std::uint64_t count = 1;
    for (int k = 0; k < d; ++k) count *= p;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      Poly g = to_poly(static_cast<std::uint32_t>(idx), p, d + 1);
      g[d] = 1;
      Poly r = poly_mod(f, g, p);
      if (degree(r) < 0) return false;
    }
  }
  return true;
}

Poly smallest_irreducible(std::uint32_t p, std::uint32_t e) {
  std::uint64_t count = 1;
  for (std::uint32_t k = 0; k < e; ++k) count *= p;
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    Poly f = to_poly(static_cast<std::uint32_t>(idx), p, e + 1);
    f[e] = 1;
    if (is_irreducible(f, p)) return f;
  }
  throw Error(Errc::InvalidArgument, "no irreducible polynomial found");  // unreachable for prime p
}

}  // namespace

bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

struct FieldSpec::Tables {
  Poly modulus;
  // q <= kFullTableLimit: dense q*q tables.
  std::vector<std::uint16_t> add, mul;
  // larger q: discrete log tables (log[0] unused).
  std::vector<std::uint32_t> exp, log;
  std::vector<std::uint32_t> negt, invt;
};

FieldSpec FieldSpec::make(std::uint32_t p, std::uint32_t e) {
  if (!is_prime(p)) throw Error(Errc::NotPrime, std::to_string(p) + " is not prime");
  if (e < 1) throw Error(Errc::InvalidArgument, "field exponent must be >= 1");
  std::uint64_t q = 1;
  for (std::uint32_t k = 0; k < e; ++k) {
    q *= p;
    if (q > kMaxFieldOrder)
      throw Error(Errc::TooLarge, "field order " + std::to_string(p) + "^" + std::to_string(e) + " exceeds 2^16");
  }

  FieldSpec f;
  f.p_ = p;
  f.e_ = e;
  f.q_ = static_cast<std::uint32_t>(q);
  auto t = std::make_shared<Tables>();
  if (e > 1) t->modulus = smallest_irreducible(p, e);

  auto slow_add = [&](std::uint32_t a, std::uint32_t b) {
    if (e == 1) return (a + b) % p;
    Poly x = to_poly(a, p, e), y = to_poly(b, p, e);
    for (std::uint32_t k = 0; k < e; ++k) x[k] = (x[k] + y[k]) % p;
    return from_poly(x, p);
  };
  auto slow_mul = [&](std::uint32_t a, std::uint32_t b) {
    if (e == 1) return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % p);
    Poly x = to_poly(a, p, e), y = to_poly(b, p, e);
    Poly prod(2 * e - 1, 0);
    for (std::uint32_t i = 0; i < e; ++i)
      for (std::uint32_t j = 0; j < e; ++j)
        prod[i + j] = static_cast<std::uint32_t>((prod[i + j] + static_cast<std::uint64_t>(x[i]) * y[j]) % p);
    Poly r = poly_mod(prod, t->modulus, p);
    r.resize(e);
    return from_poly(r, p);
  };

  const std::uint32_t qq = f.q_;
  t->negt.resize(qq);
  for (std::uint32_t a = 0; a < qq; ++a) {
    if (e == 1) {
      t->negt[a] = (p - a) % p;
    } else {
      Poly x = to_poly(a, p, e);
      for (auto& c : x) c = (p - c) % p;
      t->negt[a] = from_poly(x, p);
    }
  }

  if (qq <= kFullTableLimit) {
    t->add.resize(static_cast<std::size_t>(qq) * qq);
    t->mul.resize(static_cast<std::size_t>(qq) * qq);
    for (std::uint32_t a = 0; a < qq; ++a)
      for (std::uint32_t b = 0; b < qq; ++b) {
        t->add[a * qq + b] = static_cast<std::uint16_t>(slow_add(a, b));
        t->mul[a * qq + b] = static_cast<std::uint16_t>(slow_mul(a, b));
      }
    t->invt.assign(qq, 0);
    for (std::uint32_t a = 1; a < qq; ++a)
      for (std::uint32_t b = 1; b < qq; ++b)
        if (t->mul[a * qq + b] == 1) {
          t->invt[a] = b;
          break;
        }
  } else {
    // Find a primitive element and build exp/log tables.
    for (std::uint32_t g = 2; g < qq; ++g) {
      std::vector<std::uint32_t> expt(qq - 1);
      std::vector<std::uint32_t> logt(qq, 0);
      std::uint32_t x = 1;
      bool primitive = true;
      for (std::uint32_t k = 0; k < qq - 1; ++k) {
        if (k > 0 && x == 1) {
          primitive = false;
          break;
        }
        expt[k] = x;
        logt[x] = k;
        x = slow_mul(x, g);
      }
      if (primitive && x == 1) {
        t->exp = std::move(expt);
        t->log = std::move(logt);
        break;
      }
    }
    t->invt.assign(qq, 0);
    for (std::uint32_t a = 1; a < qq; ++a) t->invt[a] = t->exp[(qq - 1 - t->log[a]) % (qq - 1)];
  }
  f.t_ = std::move(t);
  return f;
}

const std::vector<std::uint32_t>& FieldSpec::reduction_polynomial() const noexcept { return t_->modulus; }

FqElem FieldSpec::add(FqElem a, FqElem b) const noexcept {
  if (!t_->add.empty()) return t_->add[a * q_ + b];
  if (e_ == 1) return (a + b) % p_;
  std::uint32_t out = 0, scale = 1;
  for (std::uint32_t k = 0; k < e_; ++k) {
    out += ((a % p_ + b % p_) % p_) * scale;
    a /= p_;
    b /= p_;
    scale *= p_;
  }
  return out;
}

FqElem FieldSpec::mul(FqElem a, FqElem b) const noexcept {
  if (!t_->mul.empty()) return t_->mul[a * q_ + b];
  if (a == 0 || b == 0) return 0;
  return t_->exp[(t_->log[a] + t_->log[b]) % (q_ - 1)];
}

FqElem FieldSpec::neg(FqElem a) const noexcept { return t_->negt[a]; }

FqElem FieldSpec::inv(FqElem a) const {
  if (a == 0) throw Error(Errc::DivisionByZero, "inverse of zero in GF(" + std::to_string(q_) + ")");
  return t_->invt[a];
}

FqElem FieldSpec::pow(FqElem a, std::uint64_t k) const noexcept {
  FqElem r = 1;
  while (k > 0) {
    if (k & 1) r = mul(r, a);
    a = mul(a, a);
    k >>= 1;
  }
  return r;
}

}  // namespace qmc
