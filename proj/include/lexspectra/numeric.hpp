#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <limits>
#include <string>
#include <string_view>

#include "lexspectra/errors.hpp"

namespace lexspectra {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
// 50 significant decimal digits; used for base eigenvalues that are not
// rational so that huge integer scales still leave usable digits.
using HighFloat = boost::multiprecision::cpp_bin_float_50;

inline BigInt ipow(const BigInt& base, std::size_t exponent) {
  BigInt result = 1;
  BigInt b = base;
  while (exponent > 0) {
    if (exponent & 1U) result *= b;
    exponent >>= 1U;
    if (exponent > 0) b *= b;
  }
  return result;
}

// 1 + n + ... + n^(k-1), i.e. (n^k - 1)/(n - 1) without the division, so the
// n = 1 case is well defined (= k).
inline BigInt geometric_sum(const BigInt& n, std::size_t k) {
  BigInt sum = 0;
  BigInt term = 1;
  for (std::size_t i = 0; i < k; ++i) {
    sum += term;
    term *= n;
  }
  return sum;
}

inline std::string to_string(const BigInt& value) { return value.str(); }

inline std::string to_string(const Rational& value) {
  if (boost::multiprecision::denominator(value) == 1) {
    return boost::multiprecision::numerator(value).str();
  }
  return boost::multiprecision::numerator(value).str() + "/" +
         boost::multiprecision::denominator(value).str();
}

inline bool is_integer(const Rational& value) {
  return boost::multiprecision::denominator(value) == 1;
}

inline BigInt floor_of(const Rational& value) {
  BigInt num = boost::multiprecision::numerator(value);
  BigInt den = boost::multiprecision::denominator(value);
  BigInt q = num / den;
  if (num % den != 0 && num < 0) q -= 1;
  return q;
}

inline BigInt ceil_of(const Rational& value) {
  BigInt f = floor_of(value);
  return Rational(f) == value ? f : BigInt(f + 1);
}

inline BigInt parse_bigint(std::string_view text) {
  if (text.empty()) throw ParseError("empty integer literal");
  std::size_t start = (text[0] == '-' || text[0] == '+') ? 1 : 0;
  if (start == text.size()) throw ParseError("bad integer literal '" + std::string(text) + "'");
  for (std::size_t i = start; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9') {
      throw ParseError("bad integer literal '" + std::string(text) + "'");
    }
  }
  BigInt value(std::string(text.substr(start)));
  return text[0] == '-' ? BigInt(-value) : value;
}

// Accepts "p" or "p/q".
inline Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_bigint(text));
  BigInt den = parse_bigint(text.substr(slash + 1));
  if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  return Rational(parse_bigint(text.substr(0, slash)), den);
}

inline HighFloat to_high(const Rational& value) {
  return HighFloat(boost::multiprecision::numerator(value)) /
         HighFloat(boost::multiprecision::denominator(value));
}

// Exact conversion: every binary float is a dyadic rational.
inline Rational to_rational(const HighFloat& value) {
  if (value == 0) return Rational(0);
  int exponent = 0;
  HighFloat mantissa = boost::multiprecision::frexp(value, &exponent);
  constexpr int kBits = std::numeric_limits<HighFloat>::digits;
  HighFloat scaled = boost::multiprecision::ldexp(mantissa, kBits);
  BigInt integral = static_cast<BigInt>(scaled);
  int shift = exponent - kBits;
  if (shift >= 0) return Rational(BigInt(integral << shift));
  return Rational(integral, BigInt(1) << (-shift));
}

}  // namespace lexspectra
