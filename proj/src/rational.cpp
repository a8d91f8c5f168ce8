#include "lethargy/rational.hpp"

#include "lethargy/errors.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lethargy {

Rational to_rational(double x) {
  if (!std::isfinite(x)) throw InvalidSpec("cannot convert a non-finite value to a rational");
  if (x == 0.0) return Rational(0);
  int exponent = 0;
  const double mantissa = std::frexp(x, &exponent);  // x = mantissa * 2^exponent
  // 53 significant bits.
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
  exponent -= 53;
  BigInt num(scaled);
  BigInt den(1);
  if (exponent >= 0) {
    num <<= exponent;
  } else {
    den <<= -exponent;
  }
  return Rational(num, den);
}

Rational simplest_rational(double x, std::int64_t max_den) {
  if (!std::isfinite(x)) throw InvalidSpec("cannot convert a non-finite value to a rational");
  const Rational exact = to_rational(x);
  // Continued-fraction convergents of the exact value; the first convergent
  // that rounds back to x is the simplest representation within max_den.
  Rational rest = exact;
  // h_{-1}=1, h_{-2}=0, k_{-1}=0, k_{-2}=1.
  BigInt hm1(1), hm2(0), km1(0), km2(1);
  for (int iter = 0; iter < 128; ++iter) {
    BigInt a = boost::multiprecision::numerator(rest) / boost::multiprecision::denominator(rest);
    if (rest < 0 && a * boost::multiprecision::denominator(rest) != boost::multiprecision::numerator(rest)) {
      a -= 1;  // floor for negatives
    }
    BigInt hn = a * hm1 + hm2;
    BigInt kn = a * km1 + km2;
    if (kn > max_den) break;
    Rational candidate(hn, kn);
    if (to_double(candidate) == x) return candidate;
    Rational frac = rest - Rational(a);
    if (frac == 0) break;
    rest = 1 / frac;
    hm2 = hm1;
    hm1 = hn;
    km2 = km1;
    km1 = kn;
  }
  return exact;
}

Rational parse_rational(const std::string& text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s.empty()) throw InvalidSpec("empty rational literal");
  const auto slash = s.find('/');
  if (slash != std::string::npos) {
    const Rational num = parse_rational(s.substr(0, slash));
    const Rational den = parse_rational(s.substr(slash + 1));
    if (den == 0) throw InvalidSpec("zero denominator in '" + text + "'");
    return num / den;
  }
  // Decimal literal: [sign] digits [. digits] [e|E [sign] digits]
  std::size_t i = 0;
  bool negative = false;
  if (s[i] == '+' || s[i] == '-') {
    negative = s[i] == '-';
    ++i;
  }
  BigInt digits(0);
  long long scale = 0;
  bool any = false;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
    digits = digits * 10 + (s[i] - '0');
    ++i;
    any = true;
  }
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      digits = digits * 10 + (s[i] - '0');
      --scale;
      ++i;
      any = true;
    }
  }
  if (!any) throw InvalidSpec("malformed rational literal '" + text + "'");
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    bool exp_negative = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
      exp_negative = s[i] == '-';
      ++i;
    }
    long long e = 0;
    bool exp_any = false;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      e = e * 10 + (s[i] - '0');
      if (e > 100000) throw InvalidSpec("exponent too large in '" + text + "'");
      ++i;
      exp_any = true;
    }
    if (!exp_any) throw InvalidSpec("malformed exponent in '" + text + "'");
    scale += exp_negative ? -e : e;
  }
  if (i != s.size()) throw InvalidSpec("malformed rational literal '" + text + "'");
  BigInt ten_pow = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(scale < 0 ? -scale : scale));
  Rational r = scale >= 0 ? Rational(digits * ten_pow) : Rational(digits, ten_pow);
  return negative ? Rational(-r) : r;
}

Rational pow(const Rational& base, std::size_t exponent) {
  const BigInt num = boost::multiprecision::pow(boost::multiprecision::numerator(base),
                                                static_cast<unsigned>(exponent));
  const BigInt den = boost::multiprecision::pow(boost::multiprecision::denominator(base),
                                                static_cast<unsigned>(exponent));
  return Rational(num, den);
}

double to_double(const Rational& x) { return x.convert_to<double>(); }

std::string to_string(const Rational& x) {
  const BigInt& den = boost::multiprecision::denominator(x);
  if (den == 1) return boost::multiprecision::numerator(x).str();
  return boost::multiprecision::numerator(x).str() + "/" + den.str();
}

const Rational& Extended::value() const {
  if (infinite_) throw std::logic_error("Extended::value() on infinity");
  return value_;
}

double Extended::to_double() const {
  return infinite_ ? std::numeric_limits<double>::infinity() : lethargy::to_double(value_);
}

std::string Extended::to_string() const { return infinite_ ? "inf" : lethargy::to_string(value_); }

bool operator==(const Extended& a, const Extended& b) {
  if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
  return a.value_ == b.value_;
}

std::strong_ordering operator<=>(const Extended& a, const Extended& b) {
  if (a.infinite_ && b.infinite_) return std::strong_ordering::equal;
  if (a.infinite_) return std::strong_ordering::greater;
  if (b.infinite_) return std::strong_ordering::less;
  if (a.value_ < b.value_) return std::strong_ordering::less;
  if (a.value_ > b.value_) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Extended min(const Extended& a, const Extended& b) { return b < a ? b : a; }

Extended operator+(const Extended& a, const Extended& b) {
  if (a.is_infinite() || b.is_infinite()) return Extended::infinity();
  return Extended(a.value() + b.value());
}

}  // namespace lethargy
