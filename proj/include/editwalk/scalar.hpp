#pragma once

// Scalar types used by the exact and floating-point engines.
//
// Every numeric template in the library is instantiated either with `double`
// (default) or with `Rational`, an arbitrary-precision fraction. Rational
// instantiations reproduce identities exactly.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>
#include <system_error>

#include <boost/multiprecision/cpp_int.hpp>

#include "editwalk/error.hpp"

namespace editwalk {

using Rational = boost::multiprecision::cpp_rational;

template <class S>
inline constexpr bool is_exact_v = std::same_as<S, Rational>;

template <class S>
concept Scalar = std::same_as<S, double> || std::same_as<S, Rational>;

template <Scalar S>
S ratio(std::int64_t num, std::int64_t den) {
  if constexpr (is_exact_v<S>) {
    return Rational(num, den);
  } else {
    return static_cast<double>(num) / static_cast<double>(den);
  }
}

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.convert_to<double>(); }

inline double abs_value(double x) { return std::fabs(x); }
inline Rational abs_value(const Rational& x) { return x < 0 ? Rational(-x) : x; }

namespace detail {

inline Rational pow10(int k) {
  boost::multiprecision::cpp_int p = 1;
  for (int i = 0; i < k; ++i) p *= 10;
  return Rational(p);
}

// Exact decimal parse: "-12.0375e-2" -> -120375/1000000.
inline Rational parse_decimal_exact(std::string_view text) {
  std::string_view mantissa = text;
  int exponent = 0;
  if (auto epos = text.find_first_of("eE"); epos != std::string_view::npos) {
    mantissa = text.substr(0, epos);
    auto exp_text = text.substr(epos + 1);
    if (!exp_text.empty() && exp_text.front() == '+') exp_text.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(exp_text.data(), exp_text.data() + exp_text.size(), exponent);
    if (ec != std::errc{} || ptr != exp_text.data() + exp_text.size()) {
      fail(Errc::parse_error, "bad exponent in '" + std::string(text) + "'");
    }
  }
  bool negative = false;
  if (!mantissa.empty() && (mantissa.front() == '-' || mantissa.front() == '+')) {
    negative = mantissa.front() == '-';
    mantissa.remove_prefix(1);
  }
  std::string digits;
  int frac_digits = 0;
  bool seen_point = false;
  for (char ch : mantissa) {
    if (ch == '.' && !seen_point) {
      seen_point = true;
    } else if (ch >= '0' && ch <= '9') {
      digits.push_back(ch);
      if (seen_point) ++frac_digits;
    } else {
      fail(Errc::parse_error, "bad number '" + std::string(text) + "'");
    }
  }
  if (digits.empty()) fail(Errc::parse_error, "bad number '" + std::string(text) + "'");
  // cpp_int reads a leading 0 as octal
  digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
  Rational value{boost::multiprecision::cpp_int(digits)};
  exponent -= frac_digits;
  if (exponent > 0) value *= pow10(exponent);
  if (exponent < 0) value /= pow10(-exponent);
  return negative ? Rational(-value) : value;
}

}  // namespace detail

/// Parses "3", "0.075", "1e-3" or "1/4". Rational mode keeps decimals exact.
template <Scalar S>
S parse_scalar(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) fail(Errc::parse_error, "empty number");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    S num = parse_scalar<S>(text.substr(0, slash));
    S den = parse_scalar<S>(text.substr(slash + 1));
    if (den == S(0)) fail(Errc::parse_error, "zero denominator in '" + std::string(text) + "'");
    return num / den;
  }
  if constexpr (is_exact_v<S>) {
    return detail::parse_decimal_exact(text);
  } else {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
      fail(Errc::parse_error, "bad number '" + std::string(text) + "'");
    }
    return value;
  }
}

inline std::string format_scalar(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  (void)ec;
  return std::string(buf, ptr);
}

inline std::string format_scalar(const Rational& x) {
  auto num = boost::multiprecision::numerator(x);
  auto den = boost::multiprecision::denominator(x);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

}  // namespace editwalk
