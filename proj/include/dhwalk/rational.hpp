#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace dhwalk {

/// Arbitrary-precision exact rational. All moment values, areas and volumes
/// live in this type; nothing in the core touches floating point.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  return Rational(BigInt(num), BigInt(den));
}

inline BigInt numerator_of(const Rational& q) { return boost::multiprecision::numerator(q); }
inline BigInt denominator_of(const Rational& q) { return boost::multiprecision::denominator(q); }

inline bool is_integer(const Rational& q) { return denominator_of(q) == 1; }

/// "p/q" in lowest terms, or "p" when the denominator is one.
inline std::string to_string(const Rational& q) {
  if (is_integer(q)) return numerator_of(q).str();
  return numerator_of(q).str() + "/" + denominator_of(q).str();
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

namespace detail {

inline std::optional<BigInt> parse_integer(std::string_view s) {
  if (s.empty()) return std::nullopt;
  std::size_t i = 0;
  bool negative = false;
  if (s[0] == '-' || s[0] == '+') {
    negative = s[0] == '-';
    i = 1;
  }
  if (i == s.size()) return std::nullopt;
  BigInt value = 0;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
    value = value * 10 + (s[i] - '0');
  }
  return negative ? BigInt(-value) : value;
}

}  // namespace detail

/// Parses "p", "-p", "p/q". Returns nullopt on anything else (including a
/// zero denominator and decimal notation).
inline std::optional<Rational> parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    auto n = detail::parse_integer(text);
    if (!n) return std::nullopt;
    return Rational(*n);
  }
  auto n = detail::parse_integer(text.substr(0, slash));
  auto d = detail::parse_integer(text.substr(slash + 1));
  if (!n || !d || *d == 0) return std::nullopt;
  if (text.substr(slash + 1).front() == '-' || text.substr(slash + 1).front() == '+') return std::nullopt;
  return Rational(*n, *d);
}

}  // namespace dhwalk
