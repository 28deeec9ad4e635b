#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cctype>
#include <compare>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "shfam/error.hpp"

namespace shfam {

/// Arbitrary-precision signed integer used for sequences, arrays and towers.
using Integer = boost::multiprecision::cpp_int;

/// Machine integer used by the exhaustive searches over desk-scale sets.
using Value = std::int64_t;

enum class LogBase { two, natural };

inline std::string to_string(const Integer& x) { return x.str(); }

inline std::strong_ordering compare(const Integer& a, const Integer& b) {
  const int c = a.compare(b);
  return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

inline std::strong_ordering compare(const std::vector<Integer>& a, const std::vector<Integer>& b) {
  return std::lexicographical_compare_three_way(a.begin(), a.end(), b.begin(), b.end(),
                                                [](const Integer& x, const Integer& y) { return compare(x, y); });
}

inline bool fits_int64(const Integer& x) {
  return x >= std::numeric_limits<Value>::min() && x <= std::numeric_limits<Value>::max();
}

inline Value to_value(const Integer& x) {
  if (!fits_int64(x)) throw precondition_error("integer " + x.str() + " does not fit in 64 bits");
  return x.convert_to<Value>();
}

/// log2(x) for x > 0. Exact for powers of two; beyond 2^53 the top 53 bits
/// carry the mantissa and the bit length carries the exponent.
inline double log2_of(const Integer& x) {
  if (x <= 0) throw precondition_error("logarithm of nonpositive integer " + x.str());
  const std::size_t top = boost::multiprecision::msb(x);
  if (top < 53) return std::log2(x.convert_to<double>());
  const Integer head = x >> (top - 52);
  return std::log2(head.convert_to<double>()) + static_cast<double>(top - 52);
}

inline double log_of(const Integer& x, LogBase base) {
  const double l2 = log2_of(x);
  return base == LogBase::two ? l2 : l2 * std::log(2.0);
}

/// floor(2^y) for y >= 0. Below 2^63 the double result is floored directly;
/// above it only the leading 53 bits are meaningful.
inline Integer pow2_floor(double y) {
  if (!(y >= 0.0) || !std::isfinite(y)) throw precondition_error("pow2_floor needs a finite nonnegative exponent");
  if (y < 62.0) return Integer(static_cast<std::uint64_t>(std::floor(std::exp2(y))));
  const double whole = std::floor(y);
  const auto mantissa = static_cast<std::uint64_t>(std::floor(std::exp2(y - whole + 52.0)));
  return Integer(mantissa) << static_cast<unsigned>(whole - 52.0);
}

/// One tower step: floor(2^{(log x)^exponent}).
inline Integer tower_step(const Integer& x, double exponent, LogBase base = LogBase::two) {
  const double l = log_of(x, base);
  return pow2_floor(l <= 0.0 ? 0.0 : std::pow(l, exponent));
}

/// Largest n with base^n <= x (x >= 1, base >= 2).
inline unsigned floor_log(const Integer& x, const Integer& base) {
  if (x < 1 || base < 2) throw precondition_error("floor_log needs x >= 1 and base >= 2");
  unsigned n = 0;
  Integer p = base;
  while (p <= x) {
    p *= base;
    ++n;
  }
  return n;
}

inline Integer ipow(const Integer& base, unsigned exp) {
  Integer r = 1;
  for (unsigned i = 0; i < exp; ++i) r *= base;
  return r;
}

namespace detail {

class ExprParser {
 public:
  explicit ExprParser(std::string_view s) : s_(s) {}

  Integer parse() {
    Integer v = sum();
    skip_ws();
    if (pos_ != s_.size()) fail();
    return v;
  }

 private:
  Integer sum() {
    Integer v = product();
    for (;;) {
      skip_ws();
      if (eat('+')) v += product();
      else if (eat('-')) v -= product();
      else return v;
    }
  }

  Integer product() {
    Integer v = power();
    for (;;) {
      skip_ws();
      if (eat('*')) v *= power();
      else return v;
    }
  }

  Integer power() {
    Integer b = atom();
    skip_ws();
    if (!eat('^')) return b;
    const Integer e = power();
    if (e < 0 || e > 1'000'000) fail();
    return ipow(b, e.convert_to<unsigned>());
  }

  Integer atom() {
    skip_ws();
    if (eat('(')) {
      Integer v = sum();
      skip_ws();
      if (!eat(')')) fail();
      return v;
    }
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail();
    return Integer(std::string(s_.substr(start, pos_ - start)));
  }

  bool eat(char c) {
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail() const {
    throw precondition_error("malformed integer expression '" + std::string(s_) + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses decimal integers and simple expressions such as "2^64", "10^4-1" or "3*2^10".
inline Integer parse_integer(std::string_view text) { return detail::ExprParser(text).parse(); }

/// Parses a comma separated list of integer expressions ("0,1,2" or "2^16, 7").
inline std::vector<Integer> parse_integer_list(std::string_view text) {
  std::vector<Integer> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string_view item = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    if (item.find_first_not_of(" \t") == std::string_view::npos) {
      if (!(out.empty() && comma == std::string_view::npos)) throw precondition_error("empty item in list '" + std::string(text) + "'");
    } else {
      out.push_back(parse_integer(item));
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace shfam
