#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <string>

namespace lethargy {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Exact value of a finite double.
Rational to_rational(double x);

/// Simplest rational (smallest denominator, at most `max_den`) that rounds to
/// exactly `x`; falls back to the exact dyadic value. 0.3 -> 3/10.
Rational simplest_rational(double x, std::int64_t max_den = 1'000'000'000);

/// Parses "p/q", an integer, or a decimal literal ("0.3", "1e-2") exactly.
Rational parse_rational(const std::string& text);

Rational pow(const Rational& base, std::size_t exponent);

double to_double(const Rational& x);

std::string to_string(const Rational& x);

/// Extended nonnegative reals: a rational or +infinity, ordered above every
/// rational.
class Extended {
 public:
  Extended() = default;
  Extended(Rational v) : value_(std::move(v)) {}  // NOLINT(implicit)
  Extended(int v) : value_(v) {}                  // NOLINT(implicit)

  static Extended infinity() {
    Extended e;
    e.infinite_ = true;
    return e;
  }

  bool is_infinite() const noexcept { return infinite_; }
  /// Throws std::logic_error when infinite.
  const Rational& value() const;
  double to_double() const;
  std::string to_string() const;

  friend bool operator==(const Extended& a, const Extended& b);
  friend std::strong_ordering operator<=>(const Extended& a, const Extended& b);

 private:
  Rational value_{0};
  bool infinite_ = false;
};

Extended min(const Extended& a, const Extended& b);
Extended operator+(const Extended& a, const Extended& b);

}  // namespace lethargy
