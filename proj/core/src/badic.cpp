#include "qmc/badic.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

#include "qmc/error.hpp"

namespace qmc {

namespace {

void require_base(std::uint32_t b) {
  if (b < 2) throw Error(Errc::InvalidArgument, "base must be >= 2");
}

// Inverse of v modulo b; gcd(v, b) = 1 is a precondition.
std::int64_t inverse_mod(std::int64_t v, std::int64_t b) {
  i128 r0 = b, r1 = ((v % b) + b) % b;
  i128 t0 = 0, t1 = 1;
  while (r1 != 0) {
    i128 q = r0 / r1;
    i128 tmp = r0 - q * r1;
    r0 = r1;
    r1 = tmp;
    tmp = t0 - q * t1;
    t0 = t1;
    t1 = tmp;
  }
  i128 inv = t0 % b;
  if (inv < 0) inv += b;
  return static_cast<std::int64_t>(inv);
}

i128 floor_mod(i128 a, i128 m) {
  i128 r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

BAdicStream BAdicStream::procedural(std::uint32_t base, Generator gen) {
  require_base(base);
  if (!gen) throw Error(Errc::InvalidArgument, "procedural stream needs a generator");
  BAdicStream s;
  s.base_ = base;
  s.procedural_ = std::make_shared<ProceduralRep>();
  s.procedural_->gen = std::move(gen);
  return s;
}

BAdicStream BAdicStream::from_parts(std::uint32_t base, Rational value, std::vector<Digit> pre,
                                    std::vector<Digit> per) {
  // Shortest period: the smallest divisor length that tiles the block.
  const std::size_t n = per.size();
  for (std::size_t len = 1; len < n; ++len) {
    if (n % len != 0) continue;
    bool tiles = true;
    for (std::size_t i = len; i < n && tiles; ++i) tiles = per[i] == per[i - len];
    if (tiles) {
      per.resize(len);
      break;
    }
  }
  // Shortest preperiod: fold trailing preperiod digits into a rotated period.
  while (!pre.empty() && pre.back() == per.back()) {
    per.insert(per.begin(), per.back());
    per.pop_back();
    pre.pop_back();
  }
  auto rep = std::make_shared<PeriodicRep>();
  rep->value = value;
  rep->preperiod = std::move(pre);
  rep->period = std::move(per);
  rep->canonical = true;
  BAdicStream s;
  s.base_ = base;
  s.periodic_ = std::move(rep);
  return s;
}

Digit BAdicStream::digit(std::size_t r) const {
  if (periodic_) {
    auto& rep = *periodic_;
    std::lock_guard lock(rep.mu);
    if (rep.canonical) {
      if (r < rep.preperiod.size()) return rep.preperiod[r];
      return rep.period[(r - rep.preperiod.size()) % rep.period.size()];
    }
    const i128 den = rep.value.den(), b = base_;
    const i128 vinv = inverse_mod(rep.value.den(), base_);
    while (rep.memo.size() <= r) {
      const i128 d = floor_mod(floor_mod(rep.state, b) * vinv, b);
      rep.memo.push_back(static_cast<Digit>(d));
      rep.state = (rep.state - d * den) / b;
    }
    return rep.memo[r];
  }
  std::lock_guard lock(procedural_->mu);
  auto& memo = procedural_->memo;
  while (memo.size() <= r) {
    Digit d = procedural_->gen(memo.size());
    if (d >= base_)
      throw Error(Errc::OutOfRange, "generator produced digit " + std::to_string(d) + " in base " + std::to_string(base_));
    memo.push_back(d);
  }
  return memo[r];
}

std::vector<Digit> BAdicStream::digits(std::size_t count) const {
  std::vector<Digit> out(count);
  if (count > 0 && !periodic_) digit(count - 1);  // fill memo under one lock
  for (std::size_t r = 0; r < count; ++r) out[r] = digit(r);
  return out;
}

// u/v expands purely periodically iff -1 <= u/v <= 0, and the remainder
// state/den enters that range after finitely many digits and stays there.
void BAdicStream::PeriodicRep::ensure_canonical(std::uint32_t b) {
  if (canonical) return;
  const i128 den = value.den(), base = b;
  const i128 vinv = inverse_mod(value.den(), b);
  i128 num = value.num();
  auto step = [&](std::vector<Digit>& out) {
    const i128 d = floor_mod(floor_mod(num, base) * vinv, base);
    out.push_back(static_cast<Digit>(d));
    num = (num - d * den) / base;
  };
  std::vector<Digit> pre, per;
  while (num > 0 || num < -den) step(pre);
  const i128 entry = num;
  do step(per);
  while (num != entry);
  auto canon = from_parts(b, value, std::move(pre), std::move(per));
  preperiod = canon.periodic_->preperiod;
  period = canon.periodic_->period;
  canonical = true;
  memo.clear();
}

const Rational& BAdicStream::value() const {
  if (!periodic_) throw Error(Errc::InvalidArgument, "procedural stream has no rational value");
  return periodic_->value;
}

const std::vector<Digit>& BAdicStream::preperiod() const {
  if (!periodic_) throw Error(Errc::InvalidArgument, "procedural stream has no preperiod");
  std::lock_guard lock(periodic_->mu);
  periodic_->ensure_canonical(base_);
  return periodic_->preperiod;
}

const std::vector<Digit>& BAdicStream::period() const {
  if (!periodic_) throw Error(Errc::InvalidArgument, "procedural stream has no period");
  std::lock_guard lock(periodic_->mu);
  periodic_->ensure_canonical(base_);
  return periodic_->period;
}

BAdicStream integer_digits(std::uint64_t n, std::uint32_t b) {
  require_base(b);
  if (n > static_cast<std::uint64_t>(INT64_MAX)) throw Error(Errc::Overflow, "integer too large");
  return rational_digits(static_cast<std::int64_t>(n), 1, b);
}

BAdicStream rational_digits(std::int64_t u, std::int64_t v, std::uint32_t b) {
  require_base(b);
  if (v == 0) throw Error(Errc::DivisionByZero, "zero denominator");
  Rational value(u, v);
  if (gcd64(value.den(), b) != 1)
    throw Error(Errc::NotBAdicInteger,
                value.to_string() + " is not a " + std::to_string(b) + "-adic integer (denominator shares a factor with the base)");

  auto rep = std::make_shared<BAdicStream::PeriodicRep>();
  rep->value = value;
  rep->state = value.num();
  BAdicStream s;
  s.base_ = b;
  s.periodic_ = std::move(rep);
  return s;
}

u128 truncate(const BAdicStream& x, std::size_t k) {
  u128 value = 0, scale = 1;
  const u128 b = x.base();
  for (std::size_t i = 0; i < k; ++i) {
    value += scale * x.digit(i);
    if (i + 1 < k) {
      if (scale > ~static_cast<u128>(0) / b) throw Error(Errc::Overflow, "b^k exceeds 128 bits");
      scale *= b;
    }
  }
  return value;
}

BAdicStream negate(const BAdicStream& x) {
  const std::uint32_t b = x.base();
  if (x.is_periodic()) {
    const auto& pre = x.preperiod();
    const auto& per = x.period();
    std::size_t limit = pre.size() + per.size();
    std::size_t r = 0;
    while (r < limit && x.digit(r) == 0) ++r;
    if (r == limit) return x;  // zero
    std::size_t head = std::max(pre.size(), r + 1);
    std::vector<Digit> npre(head), nper(per.size());
    for (std::size_t i = 0; i < head; ++i) {
      Digit a = x.digit(i);
      npre[i] = i < r ? 0 : (i == r ? b - a : b - 1 - a);
    }
    for (std::size_t i = 0; i < per.size(); ++i) nper[i] = b - 1 - x.digit(head + i);
    return BAdicStream::from_parts(b, -x.value(), std::move(npre), std::move(nper));
  }
  struct State {
    BAdicStream src;
    bool seen_nonzero = false;
  };
  auto st = std::make_shared<State>(State{x});
  return BAdicStream::procedural(b, [st, b](std::size_t r) -> Digit {
    Digit a = st->src.digit(r);
    if (st->seen_nonzero) return b - 1 - a;
    if (a == 0) return 0;
    st->seen_nonzero = true;
    return b - a;
  });
}

BAdicStream add(const BAdicStream& x, const BAdicStream& y) {
  if (x.base() != y.base())
    throw Error(Errc::BaseMismatch, std::to_string(x.base()) + " vs " + std::to_string(y.base()));
  const std::uint32_t b = x.base();
  if (x.is_periodic() && y.is_periodic()) return rational_digits(x.value() + y.value(), b);
  struct State {
    BAdicStream lhs, rhs;
    std::uint32_t carry = 0;
  };
  auto st = std::make_shared<State>(State{x, y});
  return BAdicStream::procedural(b, [st, b](std::size_t r) -> Digit {
    std::uint64_t t = std::uint64_t{st->lhs.digit(r)} + st->rhs.digit(r) + st->carry;
    st->carry = static_cast<std::uint32_t>(t / b);
    return static_cast<Digit>(t % b);
  });
}

BAdicStream mul_small(const BAdicStream& x, std::int64_t c) {
  const std::uint32_t b = x.base();
  if (x.is_periodic()) return rational_digits(x.value() * Rational(c), b);
  if (c < 0) return negate(mul_small(x, -c));
  struct State {
    BAdicStream src;
    std::uint64_t factor;
    u128 carry = 0;
  };
  auto st = std::make_shared<State>(State{x, static_cast<std::uint64_t>(c)});
  return BAdicStream::procedural(b, [st, b](std::size_t r) -> Digit {
    u128 t = static_cast<u128>(st->factor) * st->src.digit(r) + st->carry;
    st->carry = t / b;
    return static_cast<Digit>(t % b);
  });
}

bool is_unit(const BAdicStream& x) { return std::gcd(x.digit(0), x.base()) == 1; }

BAdicStream unit_inverse(const BAdicStream& x) {
  if (!is_unit(x)) throw Error(Errc::NotAUnit, "first digit shares a factor with the base");
  if (!x.is_periodic()) throw Error(Errc::InvalidArgument, "unit_inverse requires a rational stream");
  return rational_digits(Rational(1) / x.value(), x.base());
}

std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, unsigned>> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    unsigned k = 0;
    while (n % p == 0) {
      n /= p;
      ++k;
    }
    if (k > 0) out.emplace_back(p, k);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

PseudoValuation pseudo_valuation(std::int64_t u, std::int64_t v, std::uint32_t b) {
  require_base(b);
  if (v == 0) throw Error(Errc::DivisionByZero, "zero denominator");
  if (u == 0) return {Rational(0), true};
  auto valuation = [](std::int64_t x, std::uint64_t p) {
    std::int64_t k = 0;
    std::uint64_t ax = x < 0 ? static_cast<std::uint64_t>(-(x + 1)) + 1 : static_cast<std::uint64_t>(x);
    while (ax % p == 0) {
      ax /= p;
      ++k;
    }
    return k;
  };
  std::optional<Rational> min_ratio;
  for (auto [p, beta] : factorize(b)) {
    Rational ratio(valuation(u, p) - valuation(v, p), beta);
    if (!min_ratio || ratio < *min_ratio) min_ratio = ratio;
  }
  return {-*min_ratio, false};
}

bool tails_agree_from(const BAdicStream& x, const BAdicStream& y, std::size_t from) {
  if (!x.is_periodic() || !y.is_periodic())
    throw Error(Errc::InvalidArgument, "tail comparison needs periodic streams");
  if (x.base() != y.base()) throw Error(Errc::BaseMismatch, "tail comparison across bases");
  std::size_t start = std::max({from, x.preperiod().size(), y.preperiod().size()});
  std::size_t span = std::lcm(x.period().size(), y.period().size());
  for (std::size_t r = from; r < start + span; ++r)
    if (x.digit(r) != y.digit(r)) return false;
  return true;
}

bool negative_block_check(std::uint64_t k, unsigned l, std::uint32_t b) {
  require_base(b);
  const std::uint64_t block = checked_pow(b, l);
  const std::uint64_t lo = k * block + 1, hi = (k + 1) * block;
  std::set<u128> heads;
  std::optional<BAdicStream> first;
  for (std::uint64_t n = lo; n <= hi; ++n) {
    BAdicStream neg = negate(integer_digits(n, b));
    if (!first) first = neg;
    else if (!tails_agree_from(*first, neg, l)) return false;
    heads.insert(truncate(neg, l));
  }
  return heads.size() == block;
}

}  // namespace qmc
