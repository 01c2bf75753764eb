#include "rearr/harmonic.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace rearr {

namespace {

double down(double v) { return std::nextafter(v, -std::numeric_limits<double>::infinity()); }
double up(double v) { return std::nextafter(v, std::numeric_limits<double>::infinity()); }

constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

// b approximately m * 2^k for m in [1, 2), as an integer.
BigInt ldexp_big(double m, long k) {
  if (k <= 52) {
    const double v = std::ldexp(m, static_cast<int>(k));
    return BigInt(std::floor(v));
  }
  BigInt base(std::floor(std::ldexp(m, 52)));
  return base << (k - 52);
}

}  // namespace

Enclosure Enclosure::of(const Rational& r) {
  const double v = r.to_double();  // truncated toward zero, < 1 ulp off
  return {down(down(v)), up(up(v))};
}

Enclosure Enclosure::operator+(const Enclosure& o) const {
  return {down(lo + o.lo), up(hi + o.hi)};
}

Enclosure Enclosure::operator-(const Enclosure& o) const {
  return {down(lo - o.hi), up(hi - o.lo)};
}

Rational harmonic_segment_exact(std::uint64_t a, std::uint64_t b) {
  if (a < 1) throw std::invalid_argument("harmonic_segment_exact: a must be >= 1");
  if (b < a) return Rational(0);
  if (b - a < 16) {
    mpq_class s(0);
    for (std::uint64_t k = a; k <= b; ++k) {
      s += mpq_class(1, static_cast<unsigned long>(k));
    }
    return Rational(s);
  }
  const std::uint64_t mid = a + (b - a) / 2;
  return harmonic_segment_exact(a, mid) + harmonic_segment_exact(mid + 1, b);
}

Enclosure harmonic_value(const BigInt& n) {
  if (sgn(n) < 0) throw std::invalid_argument("harmonic_value: n must be >= 0");
  if (n < 100) {
    const unsigned long small = n.get_ui();
    if (small == 0) return Enclosure::point(0.0);
    return Enclosure::of(harmonic_segment_exact(1, small));
  }

  // H(n) = ln n + gamma + 1/2n - 1/12n^2 + 1/120n^4 - theta/252n^6, theta in (0,1).
  long exp2 = 0;
  const double mant = mpz_get_d_2exp(&exp2, n.get_mpz_t());  // n = mant * 2^exp2
  const double ln_n = std::log(mant) + static_cast<double>(exp2) * std::numbers::ln2;

  const double nd = mpz_get_d(n.get_mpz_t());  // +inf when n overflows double
  double corr = 0.0, trunc = 0.0;
  if (std::isfinite(nd)) {
    const double inv = 1.0 / nd;
    const double inv2 = inv * inv;
    corr = 0.5 * inv - inv2 / 12.0 + inv2 * inv2 / 120.0;
    trunc = inv2 * inv2 * inv2 / 252.0;
  }
  const double v = ln_n + kEulerGamma + corr;

  // Covers libm rounding, the ln2 multiple, and the even-smaller pieces the
  // non-finite branch drops; validated with wide margin against exact values.
  const double slack = 1e-12 + 8e-15 * std::fabs(v);
  return {v - slack - trunc, v + slack};
}

Enclosure harmonic_segment(const BigInt& a, const BigInt& b) {
  if (sgn(a) <= 0 || b < a) throw std::invalid_argument("harmonic_segment: need 1 <= a <= b");
  return harmonic_value(b) - harmonic_value(a - BigInt(1));
}

std::optional<std::uint64_t> first_pool_reaching_exact(std::uint64_t a, const Rational& target,
                                                       std::uint64_t limit) {
  if (a < 1 || limit < a) throw std::invalid_argument("first_pool_reaching_exact: bad range");
  if (target.sign() <= 0) throw std::invalid_argument("first_pool_reaching_exact: target must be positive");

  // Estimate the crossing in doubles, then settle it with exact arithmetic;
  // the estimate is off by at most a step or two in this routine's range.
  const double t = target.to_double();
  std::uint64_t guess;
  const double lnb = std::log(static_cast<double>(a) - 0.5) + t;
  if (lnb > 44.0) {  // past 2^63: crossing cannot be below the cap anyway
    guess = limit;
  } else {
    guess = static_cast<std::uint64_t>(std::exp(lnb));
  }
  if (guess < a) guess = a;
  if (guess > limit) guess = limit;
  if (guess < 1024 || guess < a + 64) {
    // Short block: plain scan.
    Rational s(0);
    for (std::uint64_t k = a; k <= limit; ++k) {
      s += Rational(1, static_cast<long long>(k));
      if (!(s < target)) return k;
    }
    return std::nullopt;
  }

  Rational s = harmonic_segment_exact(a, guess);
  std::uint64_t b = guess;
  if (s < target) {
    while (s < target) {
      if (b == limit) return std::nullopt;
      ++b;
      s += Rational(1, static_cast<long long>(b));
    }
    return b;
  }
  while (b > a) {
    const Rational prev = s - Rational(1, static_cast<long long>(b));
    if (prev < target) break;
    s = prev;
    --b;
  }
  return b;
}

BoundaryResult first_pool_reaching(const BigInt& a, const Enclosure& h_before,
                                   const Enclosure& target) {
  if (sgn(a) <= 0) throw std::invalid_argument("first_pool_reaching: a must be >= 1");
  if (target.mid() > 1e5) throw OverflowError("first_pool_reaching: target magnitude unsupported");

  const auto seg = [&](const BigInt& b) { return harmonic_value(b) - h_before; };
  const auto pred = [&](const BigInt& b) { return seg(b).mid() >= target.mid(); };

  if (pred(a)) {
    const Enclosure s = seg(a);
    return {a, s, s.definitely_geq(target)};
  }

  // Initial upper candidate from inverting H(b) ~ ln b + gamma.
  const double x = h_before.mid() + target.mid() - kEulerGamma;
  BigInt hi;
  if (x < 40.0) {
    hi = BigInt(std::int64_t(1) << 60);
  } else {
    const double bits = x / std::numbers::ln2;
    const long k = static_cast<long>(bits);
    hi = ldexp_big(std::exp2(bits - static_cast<double>(k)), k + 2);
  }
  if (hi <= a) hi = a + BigInt(1);
  while (!pred(hi)) hi = hi * BigInt(2);

  BigInt lo = a;  // pred(lo) false, pred(hi) true
  while (hi - lo > BigInt(1)) {
    const BigInt mid = (lo + hi) / BigInt(2);
    if (pred(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }

  const Enclosure at = seg(hi);
  const Enclosure before = seg(hi - BigInt(1));
  const bool cert = at.definitely_geq(target) && before.definitely_less(target);
  return {hi, at, cert};
}

}  // namespace rearr
