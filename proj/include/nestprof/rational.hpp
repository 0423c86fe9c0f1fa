#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>

namespace nestprof {

/// Exact non-negative rational, normalized (gcd 1, positive denominator).
/// Dependency strengths are ratios of small counts, so exact comparison
/// against a threshold is cheap and avoids float round-off in tests.
class Rational {
 public:
  constexpr Rational() : num_(0), den_(1) {}

  Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
    if (den_ == 0) throw std::invalid_argument("Rational: zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    if (num_ < 0) throw std::invalid_argument("Rational: negative value");
    const std::int64_t g = std::gcd(num_, den_);
    num_ /= g;
    den_ /= g;
  }

  static Rational zero() { return Rational(); }
  static Rational one() { return Rational(1, 1); }

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }

  double to_double() const noexcept {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  friend bool operator==(const Rational& a, const Rational& b) noexcept {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) noexcept {
    return !(a == b);
  }
  friend bool operator<(const Rational& a, const Rational& b) noexcept {
    return static_cast<__int128>(a.num_) * b.den_ <
           static_cast<__int128>(b.num_) * a.den_;
  }
  friend bool operator<=(const Rational& a, const Rational& b) noexcept {
    return !(b < a);
  }
  friend bool operator>(const Rational& a, const Rational& b) noexcept {
    return b < a;
  }
  friend bool operator>=(const Rational& a, const Rational& b) noexcept {
    return !(a < b);
  }

  /// Parses "1", "0.99", ".5" into an exact rational.
  static Rational parse_decimal(std::string_view text) {
    if (text.empty()) throw std::invalid_argument("empty decimal");
    std::size_t dot = text.find('.');
    std::string_view whole = text.substr(0, dot);
    std::string_view frac =
        dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
    if (whole.empty() && frac.empty())
      throw std::invalid_argument("bad decimal: " + std::string(text));
    if (whole.size() + frac.size() > 18)
      throw std::invalid_argument("decimal has too many digits: " + std::string(text));
    std::int64_t num = 0;
    std::int64_t den = 1;
    for (char c : whole) {
      if (c < '0' || c > '9')
        throw std::invalid_argument("bad decimal: " + std::string(text));
      num = num * 10 + (c - '0');
    }
    for (char c : frac) {
      if (c < '0' || c > '9')
        throw std::invalid_argument("bad decimal: " + std::string(text));
      num = num * 10 + (c - '0');
      den *= 10;
    }
    return Rational(num, den);
  }

 private:
  std::int64_t num_;
  std::int64_t den_;
};

}  // namespace nestprof
