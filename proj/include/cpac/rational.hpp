#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

#include "cpac/error.hpp"

namespace cpac {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Always "p/q", including integers ("0/1", "1/1").
inline std::string to_fraction_string(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" +
         boost::multiprecision::denominator(r).str();
}

// Parses "p/q", "p", or a plain decimal such as "0.1" into an exact rational.
inline Rational parse_rational(std::string_view text) {
  const auto fail = [&] { return ParseError("malformed rational: '" + std::string(text) + "'"); };
  if (text.empty()) throw fail();
  const auto digits_only = [](std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
      if (c < '0' || c > '9') return false;
    return true;
  };
  bool negative = false;
  if (text.front() == '-') {
    negative = true;
    text.remove_prefix(1);
  }
  Rational value;
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const auto num = text.substr(0, slash);
    const auto den = text.substr(slash + 1);
    if (!digits_only(num) || !digits_only(den)) throw fail();
    const BigInt d{std::string(den)};
    if (d == 0) throw fail();
    value = Rational(BigInt(std::string(num)), d);
  } else if (const auto dot = text.find('.'); dot != std::string_view::npos) {
    const auto whole = text.substr(0, dot);
    const auto frac = text.substr(dot + 1);
    if ((!whole.empty() && !digits_only(whole)) || !digits_only(frac)) throw fail();
    BigInt scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    const BigInt w = whole.empty() ? BigInt(0) : BigInt(std::string(whole));
    value = Rational(w * scale + BigInt(std::string(frac)), scale);
  } else {
    if (!digits_only(text)) throw fail();
    value = Rational(BigInt(std::string(text)));
  }
  return negative ? Rational(-value) : value;
}

// Decimal rendering with `places` digits, rounding half to even.
inline std::string to_decimal_string(const Rational& r, unsigned places = 6) {
  BigInt scale = 1;
  for (unsigned i = 0; i < places; ++i) scale *= 10;
  const bool negative = r < 0;
  const Rational scaled = (negative ? Rational(-r) : r) * scale;
  const BigInt num = boost::multiprecision::numerator(scaled);
  const BigInt den = boost::multiprecision::denominator(scaled);
  BigInt q = num / den;
  const BigInt twice_rem = 2 * (num % den);
  if (twice_rem > den || (twice_rem == den && q % 2 == 1)) q += 1;
  std::string digits = q.str();
  if (digits.size() <= places) digits.insert(0, places + 1 - digits.size(), '0');
  std::string out = negative && q != 0 ? "-" : "";
  out += digits.substr(0, digits.size() - places);
  if (places > 0) out += "." + digits.substr(digits.size() - places);
  return out;
}

inline long double to_long_double(const Rational& r) {
  return boost::multiprecision::numerator(r).convert_to<long double>() /
         boost::multiprecision::denominator(r).convert_to<long double>();
}

}  // namespace cpac
