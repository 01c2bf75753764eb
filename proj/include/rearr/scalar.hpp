#pragma once

#include <charconv>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "rearr/rational.hpp"

namespace rearr {

// The run-wide arithmetic mode. Exact runs use Rational throughout;
// float runs use double throughout. The two are never mixed inside one run.
enum class ArithmeticMode { exact, floating };

inline const char* to_string(ArithmeticMode m) {
  return m == ArithmeticMode::exact ? "exact" : "float";
}

inline ArithmeticMode parse_arithmetic_mode(const std::string& s) {
  if (s == "exact") return ArithmeticMode::exact;
  if (s == "float") return ArithmeticMode::floating;
  throw std::invalid_argument("unknown arithmetic mode '" + s + "' (want exact|float)");
}

template <typename S>
concept ScalarLike = std::same_as<S, Rational> || std::same_as<S, double>;

template <ScalarLike S>
constexpr ArithmeticMode mode_of() {
  return std::same_as<S, Rational> ? ArithmeticMode::exact : ArithmeticMode::floating;
}

template <ScalarLike S>
S scalar_from(const Rational& r) {
  if constexpr (std::same_as<S, Rational>) {
    return r;
  } else {
    return r.to_double();
  }
}

template <ScalarLike S>
S fraction(std::int64_t p, std::int64_t q) {
  if constexpr (std::same_as<S, Rational>) {
    return Rational(static_cast<long>(p), static_cast<long>(q));
  } else {
    return static_cast<double>(p) / static_cast<double>(q);
  }
}

template <ScalarLike S>
double to_double(const S& v) {
  if constexpr (std::same_as<S, Rational>) {
    return v.to_double();
  } else {
    return v;
  }
}

// Shortest decimal that round-trips back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("format_double: to_chars failed");
  return std::string(buf, ptr);
}

inline double parse_double(const std::string& s) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    // fall back to fraction syntax ("1/3") so float runs accept the same inputs
    return Rational::parse(s).to_double();
  }
  return v;
}

template <ScalarLike S>
std::string scalar_str(const S& v) {
  if constexpr (std::same_as<S, Rational>) {
    return v.str();
  } else {
    return format_double(v);
  }
}

template <ScalarLike S>
S scalar_parse(const std::string& s) {
  if constexpr (std::same_as<S, Rational>) {
    return Rational::parse(s);
  } else {
    return parse_double(s);
  }
}

template <ScalarLike S>
S scalar_abs(const S& v) {
  if constexpr (std::same_as<S, Rational>) {
    return abs(v);
  } else {
    return std::fabs(v);
  }
}

template <ScalarLike S>
int scalar_sign(const S& v) {
  if constexpr (std::same_as<S, Rational>) {
    return v.sign();
  } else {
    return v > 0 ? 1 : (v < 0 ? -1 : 0);
  }
}

}  // namespace rearr
