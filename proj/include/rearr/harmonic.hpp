#pragma once

#include <cstdint>
#include <optional>

#include "rearr/rational.hpp"

namespace rearr {

// Closed interval [lo, hi] certified to contain a real value. Arithmetic
// rounds outward by one ulp per operation.
struct Enclosure {
  double lo = 0.0;
  double hi = 0.0;

  static Enclosure point(double v) { return {v, v}; }
  static Enclosure of(const Rational& r);

  Enclosure operator+(const Enclosure& o) const;
  Enclosure operator-(const Enclosure& o) const;
  Enclosure operator-() const { return {-hi, -lo}; }

  double width() const { return hi - lo; }
  double mid() const { return lo + (hi - lo) / 2; }

  // Decisive interval comparisons; overlapping intervals answer false to both.
  bool definitely_less(const Enclosure& o) const { return hi < o.lo; }
  bool definitely_geq(const Enclosure& o) const { return lo >= o.hi; }
};

// A scalar known exactly, approximately with certification, or both. The
// enclosure is always populated; `exact` is kept when no approximation has
// entered the value's history.
struct ApproxValue {
  std::optional<Rational> exact;
  Enclosure enc;

  static ApproxValue of(const Rational& r) { return {r, Enclosure::of(r)}; }
  static ApproxValue of(const Enclosure& e) { return {std::nullopt, e}; }

  ApproxValue operator+(const ApproxValue& o) const {
    if (exact && o.exact) return of(*exact + *o.exact);
    return of(enc + o.enc);
  }
  ApproxValue operator-(const ApproxValue& o) const {
    if (exact && o.exact) return of(*exact - *o.exact);
    return of(enc - o.enc);
  }
  ApproxValue operator-() const {
    if (exact) return of(-*exact);
    return of(-enc);
  }
  ApproxValue abs() const {
    if (exact) return of(rearr::abs(*exact));
    if (enc.lo >= 0) return *this;
    if (enc.hi <= 0) return of(-enc);
    return of(Enclosure{0.0, std::max(-enc.lo, enc.hi)});
  }
};

// Exact sum of 1/k for k in [a, b] (0 when b < a), by binary splitting.
Rational harmonic_segment_exact(std::uint64_t a, std::uint64_t b);

// Certified enclosure of H(n) = sum_{k<=n} 1/k. Exact summation below 100,
// the Euler-Maclaurin expansion with a slack bound above.
Enclosure harmonic_value(const BigInt& n);

// Certified enclosure of sum_{k=a}^{b} 1/k, 1 <= a <= b.
Enclosure harmonic_segment(const BigInt& a, const BigInt& b);

// Smallest b >= a with sum_{k=a}^{b} 1/k >= target, exactly; nullopt when no
// such b <= limit exists. `target` must be positive.
std::optional<std::uint64_t> first_pool_reaching_exact(std::uint64_t a, const Rational& target,
                                                       std::uint64_t limit);

struct BoundaryResult {
  BigInt pool_last;
  Enclosure segment;  // enclosure of the block sum magnitude up to pool_last
  bool certified = false;
};

// Approximate counterpart: the chosen b is the deterministic flip point of a
// midpoint predicate; `certified` is set only when the enclosures at b-1 and
// b decide the crossing strictly. h_before must enclose H(a-1).
BoundaryResult first_pool_reaching(const BigInt& a, const Enclosure& h_before,
                                   const Enclosure& target);

}  // namespace rearr
