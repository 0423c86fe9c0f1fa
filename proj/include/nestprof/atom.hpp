#pragma once

#include <charconv>
#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <variant>

namespace nestprof {

/// An atomic JSON value: string, number, or boolean. Null is not an atom.
///
/// Numbers are canonicalized on construction: any value that is integral
/// and representable as int64 is stored as an integer, so `1` and `1.0`
/// are the same atom. A Real atom is therefore never numerically equal to
/// an Integer atom, which keeps equality, ordering, and hashing aligned.
/// Equality is typed: strings never equal numbers, booleans only equal
/// booleans.
class Atom {
 public:
  enum class Kind : std::uint8_t { Boolean, Integer, Real, String };

  static Atom boolean(bool b) { return Atom(Repr(std::in_place_index<0>, b)); }

  static Atom integer(std::int64_t i) {
    return Atom(Repr(std::in_place_index<1>, i));
  }

  static Atom number(double d) {
    // 2^63 as a double is exact; values in [-2^63, 2^63) that are
    // integral convert to int64 without loss.
    if (std::trunc(d) == d && d >= -9223372036854775808.0 &&
        d < 9223372036854775808.0) {
      return integer(static_cast<std::int64_t>(d));
    }
    return Atom(Repr(std::in_place_index<2>, d));
  }

  static Atom number_unsigned(std::uint64_t u) {
    if (u <= static_cast<std::uint64_t>(INT64_MAX))
      return integer(static_cast<std::int64_t>(u));
    return number(static_cast<double>(u));
  }

  static Atom string(std::string s) {
    return Atom(Repr(std::in_place_index<3>, std::move(s)));
  }

  Kind kind() const noexcept { return static_cast<Kind>(repr_.index()); }
  bool is_number() const noexcept {
    return kind() == Kind::Integer || kind() == Kind::Real;
  }

  bool as_bool() const { return std::get<0>(repr_); }
  std::int64_t as_int() const { return std::get<1>(repr_); }
  double as_real() const { return std::get<2>(repr_); }
  const std::string& as_string() const { return std::get<3>(repr_); }

  friend bool operator==(const Atom& a, const Atom& b) noexcept {
    return a.repr_ == b.repr_;
  }

  /// Total order: booleans < numbers < strings; numbers compare
  /// numerically across the Integer/Real split.
  friend bool operator<(const Atom& a, const Atom& b) noexcept {
    const int ra = a.type_rank();
    const int rb = b.type_rank();
    if (ra != rb) return ra < rb;
    switch (a.kind()) {
      case Kind::Boolean:
        return !a.as_bool() && b.as_bool();
      case Kind::String:
        return a.as_string() < b.as_string();
      default:
        break;
    }
    // Numbers. long double has a 64-bit mantissa on x86-64, so int64
    // converts exactly.
    const long double x = a.kind() == Kind::Integer
                              ? static_cast<long double>(a.as_int())
                              : static_cast<long double>(a.as_real());
    const long double y = b.kind() == Kind::Integer
                              ? static_cast<long double>(b.as_int())
                              : static_cast<long double>(b.as_real());
    if (x != y) return x < y;
    return a.repr_.index() < b.repr_.index();
  }

  friend bool operator<=(const Atom& a, const Atom& b) noexcept { return !(b < a); }
  friend bool operator>(const Atom& a, const Atom& b) noexcept { return b < a; }
  friend bool operator>=(const Atom& a, const Atom& b) noexcept { return !(a < b); }
  friend bool operator!=(const Atom& a, const Atom& b) noexcept { return !(a == b); }

  /// Canonical text form: `true`/`false`, decimal digits for integers,
  /// shortest round-trip form for reals, the raw characters for strings.
  std::string to_string() const {
    switch (kind()) {
      case Kind::Boolean:
        return as_bool() ? "true" : "false";
      case Kind::Integer:
        return std::to_string(as_int());
      case Kind::Real: {
        char buf[32];
        auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), as_real());
        return std::string(buf, end);
      }
      case Kind::String:
        return as_string();
    }
    return {};
  }

  std::size_t hash() const noexcept {
    switch (kind()) {
      case Kind::Boolean:
        return as_bool() ? 0x9e3779b97f4a7c15u : 0xc2b2ae3d27d4eb4fu;
      case Kind::Integer:
        return std::hash<std::int64_t>{}(as_int()) ^ 0x165667b19e3779f9u;
      case Kind::Real:
        return std::hash<double>{}(as_real()) ^ 0x27d4eb2f165667c5u;
      case Kind::String:
        return std::hash<std::string>{}(as_string());
    }
    return 0;
  }

 private:
  using Repr = std::variant<bool, std::int64_t, double, std::string>;

  explicit Atom(Repr r) : repr_(std::move(r)) {}

  int type_rank() const noexcept {
    switch (kind()) {
      case Kind::Boolean:
        return 0;
      case Kind::Integer:
      case Kind::Real:
        return 1;
      case Kind::String:
        return 2;
    }
    return 3;
  }

  Repr repr_;
};

struct AtomHash {
  std::size_t operator()(const Atom& a) const noexcept { return a.hash(); }
};

}  // namespace nestprof
