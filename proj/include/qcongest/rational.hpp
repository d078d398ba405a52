#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace qcongest {

/// Exact nonnegative rational length with a distinguished infinite value.
///
/// Approximate distances produced by weight rounding are of the form
/// d * 2^i / (2 * l * q), so they are kept exact instead of as doubles; every
/// sandwich bound in the toolkit is then checked without tolerance.
/// Infinity is encoded as den == 0 and absorbs addition.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t value) : num_(value), den_(1) {}  // NOLINT
  Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
    if (den <= 0) throw std::invalid_argument("Rational: denominator must be positive");
    if (num < 0) throw std::invalid_argument("Rational: lengths are nonnegative");
    normalize();
  }

  static constexpr Rational infinite() {
    Rational r;
    r.num_ = 1;
    r.den_ = 0;
    return r;
  }

  constexpr bool is_finite() const { return den_ != 0; }
  constexpr std::int64_t num() const { return num_; }
  constexpr std::int64_t den() const { return den_; }

  double to_double() const {
    return is_finite() ? static_cast<double>(num_) / static_cast<double>(den_)
                       : std::numeric_limits<double>::infinity();
  }

  /// Smallest integer >= value. Requires a finite value.
  std::int64_t ceil() const {
    if (!is_finite()) throw std::domain_error("Rational::ceil of infinity");
    return (num_ + den_ - 1) / den_;
  }

  /// Value expressed as an integer count of 1/unit; requires unit to be a
  /// multiple of the denominator.
  std::int64_t scaled_to(std::int64_t unit) const {
    if (!is_finite() || unit % den_ != 0)
      throw std::domain_error("Rational::scaled_to: unit not a multiple of denominator");
    return num_ * (unit / den_);
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    if (!a.is_finite() || !b.is_finite()) return infinite();
    const std::int64_t g = std::gcd(a.den_, b.den_);
    const __int128 den = static_cast<__int128>(a.den_ / g) * b.den_;
    const __int128 num = static_cast<__int128>(a.num_) * (b.den_ / g) +
                         static_cast<__int128>(b.num_) * (a.den_ / g);
    return from_wide(num, den);
  }
  Rational& operator+=(const Rational& other) { return *this = *this + other; }

  friend Rational operator*(const Rational& a, const Rational& b) {
    if (!a.is_finite() || !b.is_finite()) return infinite();
    return from_wide(static_cast<__int128>(a.num_) * b.num_,
                     static_cast<__int128>(a.den_) * b.den_);
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (!a.is_finite() || !b.is_finite()) {
      return static_cast<int>(!a.is_finite()) <=> static_cast<int>(!b.is_finite());
    }
    const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    return lhs <=> rhs;
  }

  std::string str() const {
    if (!is_finite()) return "inf";
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  static Rational from_wide(__int128 num, __int128 den) {
    __int128 a = num, b = den;
    while (b != 0) {
      const __int128 t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      num /= a;
      den /= a;
    }
    constexpr __int128 kMax = std::numeric_limits<std::int64_t>::max();
    if (num > kMax || den > kMax) throw std::overflow_error("Rational overflow");
    Rational r;
    r.num_ = static_cast<std::int64_t>(num);
    r.den_ = static_cast<std::int64_t>(den);
    return r;
  }

  void normalize() {
    const std::int64_t g = std::gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace qcongest
