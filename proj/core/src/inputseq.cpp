#include "qmc/inputseq.hpp"

#include <map>
#include <string>

#include "qmc/error.hpp"

namespace qmc {

namespace {

std::string param_string(const BAdicStream& x) {
  return x.is_periodic() ? x.value().to_string() : std::string("<procedural>");
}

std::int64_t to_signed(std::uint64_t n) {
  if (n > static_cast<std::uint64_t>(INT64_MAX)) throw Error(Errc::Overflow, "index too large");
  return static_cast<std::int64_t>(n);
}

}  // namespace

IndexSequence IndexSequence::natural(std::uint32_t b) {
  if (b < 2) throw Error(Errc::InvalidArgument, "base must be >= 2");
  return IndexSequence(Kind::Natural, b);
}

IndexSequence IndexSequence::negative_shifted(std::uint32_t b) {
  if (b < 2) throw Error(Errc::InvalidArgument, "base must be >= 2");
  return IndexSequence(Kind::NegativeShifted, b);
}

IndexSequence IndexSequence::alternating(std::uint32_t b) {
  if (b < 2) throw Error(Errc::InvalidArgument, "base must be >= 2");
  return IndexSequence(Kind::Alternating, b);
}

IndexSequence IndexSequence::affine(BAdicStream a, BAdicStream c) {
  if (a.base() != c.base()) throw Error(Errc::BaseMismatch, "affine parameters in different bases");
  IndexSequence s(Kind::Affine, a.base());
  s.params_ = {std::move(a), std::move(c)};
  return s;
}

IndexSequence IndexSequence::rational_affine(std::int64_t v, BAdicStream alpha) {
  if (v <= 0) throw Error(Errc::InvalidArgument, "v must be positive");
  if (gcd64(v, alpha.base()) != 1)
    throw Error(Errc::NotBAdicInteger, "1/" + std::to_string(v) + " is not a " + std::to_string(alpha.base()) + "-adic integer");
  IndexSequence s(Kind::RationalAffine, alpha.base());
  s.v_ = v;
  s.params_ = {std::move(alpha)};
  return s;
}

IndexSequence IndexSequence::quadratic(BAdicStream a, BAdicStream c, BAdicStream d) {
  if (a.base() != c.base() || a.base() != d.base())
    throw Error(Errc::BaseMismatch, "quadratic parameters in different bases");
  IndexSequence s(Kind::Quadratic, a.base());
  s.params_ = {std::move(a), std::move(c), std::move(d)};
  return s;
}

IndexSequence IndexSequence::beatty(std::int64_t p, std::int64_t q, std::uint64_t nmax, std::uint32_t b) {
  if (b < 2) throw Error(Errc::InvalidArgument, "base must be >= 2");
  if (q <= 0) throw Error(Errc::InvalidArgument, "beatty q must be positive");
  Rational alpha(p, q);
  if (alpha.num() < 0) throw Error(Errc::InvalidArgument, "beatty slope must be nonnegative");
  IndexSequence s(Kind::Beatty, b);
  s.beatty_p_ = alpha.num();
  s.beatty_q_ = alpha.den();
  s.nmax_ = nmax;
  return s;
}

IndexSequence IndexSequence::custom(std::uint32_t b, Callback fn, std::string label) {
  if (b < 2) throw Error(Errc::InvalidArgument, "base must be >= 2");
  if (!fn) throw Error(Errc::InvalidArgument, "custom sequence needs a callback");
  IndexSequence s(Kind::Custom, b);
  s.custom_ = std::make_shared<const Callback>(std::move(fn));
  s.label_ = std::move(label);
  return s;
}

BAdicStream IndexSequence::eval(std::uint64_t n) const {
  const std::uint32_t b = base_;
  switch (kind_) {
    case Kind::Natural:
      return integer_digits(n, b);
    case Kind::NegativeShifted:
      return negate(integer_digits(n + 1, b));
    case Kind::Alternating: {
      std::uint64_t half = (n + 1) / 2;
      return n % 2 == 0 ? integer_digits(half, b) : negate(integer_digits(half, b));
    }
    case Kind::Affine:
      return add(mul_small(params_[0], to_signed(n)), params_[1]);
    case Kind::RationalAffine:
      return add(rational_digits(to_signed(n), v_, b), params_[0]);
    case Kind::Quadratic: {
      std::int64_t sn = to_signed(n);
      BAdicStream quad = mul_small(mul_small(params_[0], sn), sn);
      return add(add(quad, mul_small(params_[1], sn)), params_[2]);
    }
    case Kind::Beatty: {
      if (n > nmax_)
        throw Error(Errc::PrecisionExhausted,
                    "beatty surrogate valid for n <= " + std::to_string(nmax_) + ", asked n = " + std::to_string(n));
      i128 prod = static_cast<i128>(beatty_p_) * static_cast<i128>(n);
      return integer_digits(static_cast<std::uint64_t>(narrow_checked(prod / beatty_q_)), b);
    }
    case Kind::Custom: {
      BAdicStream out = (*custom_)(n);
      if (out.base() != b) throw Error(Errc::BaseMismatch, "custom callback returned a stream in another base");
      return out;
    }
  }
  throw Error(Errc::InvalidArgument, "unknown sequence kind");
}

IndexSequence IndexSequence::subsequence(std::uint64_t stride, std::uint64_t offset) const {
  if (stride == 0) throw Error(Errc::InvalidArgument, "stride must be positive");
  IndexSequence parent = *this;
  return custom(
      base_, [parent, stride, offset](std::uint64_t n) { return parent.eval(stride * n + offset); },
      to_spec() + "[" + std::to_string(stride) + "n+" + std::to_string(offset) + "]");
}

std::string IndexSequence::to_spec() const {
  switch (kind_) {
    case Kind::Natural: return "natural";
    case Kind::NegativeShifted: return "neg";
    case Kind::Alternating: return "alt";
    case Kind::Affine: return "affine:a=" + param_string(params_[0]) + ",c=" + param_string(params_[1]);
    case Kind::RationalAffine: return "rat:v=" + std::to_string(v_) + ",alpha=" + param_string(params_[0]);
    case Kind::Quadratic:
      return "quad:a=" + param_string(params_[0]) + ",c=" + param_string(params_[1]) + ",d=" + param_string(params_[2]);
    case Kind::Beatty:
      return "beatty:p=" + std::to_string(beatty_p_) + ",q=" + std::to_string(beatty_q_) + ",nmax=" + std::to_string(nmax_);
    case Kind::Custom: return "custom:" + label_;
  }
  return "unknown";
}

std::string_view to_string(UdVerdict v) noexcept {
  switch (v) {
    case UdVerdict::UD: return "UD";
    case UdVerdict::NotUD: return "NotUD";
    case UdVerdict::Unknown: return "Unknown";
  }
  return "Unknown";
}

UdVerdict is_ud_expected(const IndexSequence& seq) {
  using K = IndexSequence::Kind;
  const auto& ps = seq.params();
  switch (seq.kind()) {
    case K::Natural:
      return UdVerdict::UD;
    case K::NegativeShifted:  // a = -1 is a unit
      return UdVerdict::UD;
    case K::RationalAffine:  // 1/v is a unit
      return UdVerdict::UD;
    case K::Affine:
      // (a x_n + c) is u.d. iff a is a unit, with x_n = n u.d.
      return is_unit(ps[0]) ? UdVerdict::UD : UdVerdict::NotUD;
    case K::Quadratic: {
      const auto& a = ps[0];
      const auto& c = ps[1];
      const auto& d = ps[2];
      if (a.is_periodic() && c.is_periodic() && d.is_periodic() && a.value() == Rational(1) &&
          c.value().is_zero() && d.value().is_zero())
        return UdVerdict::NotUD;
      if (a.is_periodic() && is_unit(c)) {
        const Rational& av = a.value();
        PseudoValuation pv = pseudo_valuation(av.num(), av.den(), seq.base());
        if (pv.is_zero || pv.exponent < Rational(0)) return UdVerdict::UD;
      }
      return UdVerdict::Unknown;
    }
    case K::Alternating:
    case K::Beatty:
    case K::Custom:
      return UdVerdict::Unknown;
  }
  return UdVerdict::Unknown;
}

UdReport empirical_ud_test(const IndexSequence& seq, unsigned k, std::uint64_t samples) {
  const std::uint64_t classes = checked_pow(seq.base(), k);
  if (classes > 1'000'000) throw Error(Errc::TooLarge, "b^k exceeds 10^6");
  if (samples < classes) throw Error(Errc::InvalidArgument, "need N >= b^k samples");
  UdReport rep;
  rep.depth = k;
  rep.samples = samples;
  rep.histogram.assign(classes, 0);
  for (std::uint64_t n = 0; n < samples; ++n) ++rep.histogram[static_cast<std::size_t>(truncate(seq.eval(n), k))];

  // |count/N - 1/b^k| = |count*b^k - N| / (N b^k); compare numerators.
  i128 worst = 0;
  for (auto count : rep.histogram) {
    i128 diff = static_cast<i128>(count) * classes - static_cast<i128>(samples);
    if (diff < 0) diff = -diff;
    worst = std::max(worst, diff);
  }
  rep.deviation = Rational::from_wide(worst, static_cast<i128>(samples) * classes);
  return rep;
}

IndexSequence parse_sequence_spec(std::string_view spec, std::uint32_t b) {
  auto fail = [&](const std::string& why) {
    return Error(Errc::ConfigError, "bad sequence spec '" + std::string(spec) + "': " + why);
  };
  if (spec == "natural") return IndexSequence::natural(b);
  if (spec == "neg") return IndexSequence::negative_shifted(b);
  if (spec == "alt") return IndexSequence::alternating(b);
  if (spec == "paper-ex2c") return IndexSequence::affine(rational_digits(1, 2, b), rational_digits(-1, 4, b));

  auto colon = spec.find(':');
  if (colon == std::string_view::npos) throw fail("unknown sequence name");
  std::string_view head = spec.substr(0, colon);
  std::string_view rest = spec.substr(colon + 1);

  std::map<std::string, std::string, std::less<>> kv;
  while (!rest.empty()) {
    auto comma = rest.find(',');
    std::string_view item = rest.substr(0, comma);
    auto eq = item.find('=');
    if (eq == std::string_view::npos) throw fail("expected key=value");
    if (!kv.emplace(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1))).second)
      throw fail("duplicate key");
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  auto take = [&](const char* key) -> std::string {
    auto it = kv.find(key);
    if (it == kv.end()) throw fail(std::string("missing key '") + key + "'");
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  auto rational = [&](const char* key) {
    std::string text = take(key);
    try {
      Rational r = Rational::parse(text);
      if (text.find('/') != std::string::npos && r.to_string() != text && ("+" + r.to_string()) != text)
        throw fail(std::string("'") + key + "' not in lowest terms");
      return rational_digits(r, b);
    } catch (const Error& e) {
      if (e.code() == Errc::ConfigError || e.code() == Errc::NotBAdicInteger) throw;
      throw fail(e.what());
    }
  };
  auto integer = [&](const char* key) {
    try {
      Rational r = Rational::parse(take(key));
      if (!r.is_integer()) throw fail(std::string("'") + key + "' must be an integer");
      return r.num();
    } catch (const Error& e) {
      if (e.code() == Errc::ConfigError) throw;
      throw fail(e.what());
    }
  };

  IndexSequence out = IndexSequence::natural(b);
  if (head == "affine") {
    auto a = rational("a");
    auto c = rational("c");
    out = IndexSequence::affine(a, c);
  } else if (head == "rat") {
    auto v = integer("v");
    auto alpha = rational("alpha");
    if (v <= 0) throw fail("v must be positive");
    out = IndexSequence::rational_affine(v, alpha);  // NotBAdicInteger unless gcd(v, b) = 1
  } else if (head == "quad") {
    auto a = rational("a");
    auto c = rational("c");
    auto d = rational("d");
    out = IndexSequence::quadratic(a, c, d);
  } else if (head == "beatty") {
    auto p = integer("p");
    auto q = integer("q");
    auto nmax = integer("nmax");
    if (q <= 0 || nmax < 0 || p < 0) throw fail("beatty needs p >= 0, q > 0, nmax >= 0");
    out = IndexSequence::beatty(p, q, static_cast<std::uint64_t>(nmax), b);
  } else {
    throw fail("unknown sequence family '" + std::string(head) + "'");
  }
  if (!kv.empty()) throw fail("unexpected key '" + kv.begin()->first + "'");
  return out;
}

}  // namespace qmc
