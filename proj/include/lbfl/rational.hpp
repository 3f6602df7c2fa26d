#pragma once

#include <cstdint>
#include <compare>
#include <numeric>
#include <string>

#include "lbfl/errors.hpp"

namespace lbfl {

/// Exact rational on 64-bit numerator/denominator with 128-bit intermediates.
/// Always reduced, denominator positive. Throws on overflow instead of
/// silently wrapping; all quantities in this project are far below the limit.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(int64_t n) : num_(n), den_(1) {}  // NOLINT: implicit by design
  Rational(int64_t n, int64_t d) : num_(n), den_(d) { reduce(); }

  int64_t num() const { return num_; }
  int64_t den() const { return den_; }

  Rational operator-() const { return raw(-num_, den_); }
  Rational operator+(const Rational& o) const {
    return make(i128(num_) * o.den_ + i128(o.num_) * den_, i128(den_) * o.den_);
  }
  Rational operator-(const Rational& o) const {
    return make(i128(num_) * o.den_ - i128(o.num_) * den_, i128(den_) * o.den_);
  }
  Rational operator*(const Rational& o) const {
    return make(i128(num_) * o.num_, i128(den_) * o.den_);
  }
  Rational operator/(const Rational& o) const {
    require(o.num_ != 0, ErrorKind::internal, "rational division by zero");
    return make(i128(num_) * o.den_, i128(den_) * o.num_);
  }

  bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
  std::strong_ordering operator<=>(const Rational& o) const {
    i128 lhs = i128(num_) * o.den_;
    i128 rhs = i128(o.num_) * den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  bool is_integer() const { return den_ == 1; }
  double to_double() const { return double(num_) / double(den_); }
  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  /// Accepts "p/q", plain integers, and decimals such as "0.25".
  static Rational parse(const std::string& text);

 private:
  using i128 = __int128;

  static Rational raw(int64_t n, int64_t d) {
    Rational r;
    r.num_ = n;
    r.den_ = d;
    return r;
  }
  static Rational make(i128 n, i128 d) {
    require(d != 0, ErrorKind::internal, "rational with zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    i128 g = gcd128(n < 0 ? -n : n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    constexpr i128 lim = INT64_MAX;
    require(n <= lim && n >= -lim && d <= lim, ErrorKind::internal,
            "rational overflow");
    return raw(int64_t(n), int64_t(d));
  }
  static i128 gcd128(i128 a, i128 b) {
    while (b) {
      i128 t = a % b;
      a = b;
      b = t;
    }
    return a == 0 ? 1 : a;
  }
  void reduce() { *this = make(num_, den_); }

  int64_t num_ = 0;
  int64_t den_ = 1;
};

inline Rational Rational::parse(const std::string& text) {
  require(!text.empty(), ErrorKind::malformed_input, "empty rational literal");
  auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      int64_t n = std::stoll(text.substr(0, slash));
      int64_t d = std::stoll(text.substr(slash + 1));
      return Rational(n, d);
    }
    auto dot = text.find('.');
    if (dot == std::string::npos) return Rational(std::stoll(text));
    std::string frac = text.substr(dot + 1);
    require(frac.size() <= 12, ErrorKind::malformed_input,
            "decimal literal too long: " + text);
    int64_t whole = dot == 0 ? 0 : std::stoll(text.substr(0, dot));
    int64_t den = 1;
    for (size_t i = 0; i < frac.size(); ++i) den *= 10;
    int64_t num = frac.empty() ? 0 : std::stoll(frac);
    bool neg = text[0] == '-';
    int64_t mag = (whole < 0 ? -whole : whole) * den + num;
    return Rational(neg ? -mag : mag, den);
  } catch (const std::logic_error&) {
    throw LbflError(ErrorKind::malformed_input, "bad rational literal: " + text);
  }
}

}  // namespace lbfl
