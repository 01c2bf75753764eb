#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rearr {

using BigInt = mpz_class;

// Exact-mode values never overflow (arbitrary precision), but positional
// counters are 64-bit; exhausting them is reported, never wrapped.
class OverflowError : public std::runtime_error {
 public:
  explicit OverflowError(const std::string& what) : std::runtime_error(what) {}
};

// Exact rational scalar. Thin value wrapper over GMP's mpq_class that
// collapses expression templates at every operation, so `auto` and
// template code always see a plain value type.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(long n) : v_(n) {}                    // NOLINT: implicit by design
  Rational(long long n) : v_(static_cast<long>(n)) {}
  Rational(int n) : v_(n) {}                     // NOLINT
  Rational(long p, long q) : v_(p, q) {
    if (q == 0) throw std::invalid_argument("Rational: zero denominator");
    v_.canonicalize();
  }
  explicit Rational(const mpq_class& v) : v_(v) { v_.canonicalize(); }
  explicit Rational(const BigInt& n) : v_(n) {}

  // Accepts "p", "p/q" and plain decimals ("-2.5"). No exponent forms.
  static Rational parse(std::string_view text);

  // Canonical form, lowest terms: "p" when the denominator is 1, else "p/q".
  std::string str() const;

  double to_double() const { return v_.get_d(); }
  const mpq_class& raw() const { return v_; }
  BigInt numerator() const { return v_.get_num(); }
  BigInt denominator() const { return v_.get_den(); }

  int sign() const { return sgn(v_); }
  bool is_zero() const { return sgn(v_) == 0; }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw std::invalid_argument("Rational: division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { a += b; return a; }
  friend Rational operator-(Rational a, const Rational& b) { a -= b; return a; }
  friend Rational operator*(Rational a, const Rational& b) { a *= b; return a; }
  friend Rational operator/(Rational a, const Rational& b) { a /= b; return a; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.v_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) == 0; }
  friend bool operator!=(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) != 0; }
  friend bool operator<(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) < 0; }
  friend bool operator<=(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) <= 0; }
  friend bool operator>(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) > 0; }
  friend bool operator>=(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) >= 0; }

 private:
  mpq_class v_;
};

inline Rational abs(const Rational& a) {
  return a.sign() < 0 ? -a : a;
}

}  // namespace rearr
