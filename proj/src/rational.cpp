#include "rearr/rational.hpp"

#include <cctype>

namespace rearr {

namespace {

bool valid_integer(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

// GMP's set_str rejects a leading '+', so drop it before handing over.
std::string strip_plus(std::string s) {
  if (!s.empty() && s[0] == '+') s.erase(s.begin());
  return s;
}

}  // namespace

Rational Rational::parse(std::string_view text) {
  std::string s(text);
  // strip surrounding whitespace
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  if (s.empty()) throw std::invalid_argument("Rational::parse: empty input");

  if (auto slash = s.find('/'); slash != std::string::npos) {
    std::string num = s.substr(0, slash);
    std::string den = s.substr(slash + 1);
    if (!valid_integer(num) || !valid_integer(den)) {
      throw std::invalid_argument("Rational::parse: malformed fraction '" + s + "'");
    }
    mpq_class q;
    if (q.set_str(strip_plus(num) + "/" + strip_plus(den), 10) != 0) {
      throw std::invalid_argument("Rational::parse: malformed fraction '" + s + "'");
    }
    if (q.get_den() == 0) throw std::invalid_argument("Rational::parse: zero denominator in '" + s + "'");
    q.canonicalize();
    return Rational(q);
  }

  if (auto dot = s.find('.'); dot != std::string::npos) {
    std::string intpart = s.substr(0, dot);
    std::string fracpart = s.substr(dot + 1);
    bool neg = !intpart.empty() && intpart[0] == '-';
    if (!intpart.empty() && (intpart[0] == '+' || intpart[0] == '-')) intpart.erase(intpart.begin());
    if (intpart.empty() && fracpart.empty()) {
      throw std::invalid_argument("Rational::parse: malformed decimal '" + s + "'");
    }
    for (char c : intpart)
      if (!std::isdigit(static_cast<unsigned char>(c)))
        throw std::invalid_argument("Rational::parse: malformed decimal '" + s + "'");
    for (char c : fracpart)
      if (!std::isdigit(static_cast<unsigned char>(c)))
        throw std::invalid_argument("Rational::parse: malformed decimal '" + s + "'");
    mpz_class num(intpart.empty() ? std::string("0") : intpart);
    mpz_class scale = 1;
    for (std::size_t i = 0; i < fracpart.size(); ++i) scale *= 10;
    num *= scale;
    if (!fracpart.empty()) num += mpz_class(fracpart);
    if (neg) num = -num;
    mpq_class q(num, scale);
    q.canonicalize();
    return Rational(q);
  }

  if (!valid_integer(s)) {
    throw std::invalid_argument("Rational::parse: malformed number '" + s + "'");
  }
  return Rational(mpq_class(mpz_class(strip_plus(s))));
}

std::string Rational::str() const {
  return v_.get_str();
}

}  // namespace rearr
