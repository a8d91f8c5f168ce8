#pragma once

#include "lethargy/rational.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace lethargy {

/// coefficient * ratio^n
struct GeometricTerm {
  Rational coefficient;
  Rational ratio;
};

/// e_n = sum of the terms for every n >= start.
struct GeometricTail {
  std::size_t start = 1;
  std::vector<GeometricTerm> terms;
};

/// e_n = coefficient * n^-exponent (asymptotically, for majorants).
struct PowerLaw {
  double coefficient = 1.0;
  double exponent = 1.0;
};

/// A positive target sequence e_1, e_2, ... Immutable; cheap to copy.
class SequenceSpec {
 public:
  struct Harmonic {};
  struct Geometric {
    Rational ratio;
    Rational scale{1};
  };
  struct Power {
    double alpha = 1.0;
  };
  /// e_1..e_P given, then e_{P+i} = e_P * tail_ratio^i.
  struct Explicit {
    std::vector<Rational> prefix;
    Rational tail_ratio;
  };
  /// scale * base_n^power
  struct Transformed {
    std::shared_ptr<const SequenceSpec> base;
    Rational scale{1};
    double power = 1.0;
  };
  /// base_n + 1 / (k 3^n)
  struct Perturbed {
    std::shared_ptr<const SequenceSpec> base;
    std::size_t k = 1;
  };
  using Form = std::variant<Harmonic, Geometric, Power, Explicit, Transformed, Perturbed>;

  static SequenceSpec harmonic();
  static SequenceSpec geometric(Rational ratio, Rational scale = Rational(1));
  static SequenceSpec power(double alpha);
  static SequenceSpec explicit_list(std::vector<Rational> prefix, Rational tail_ratio);
  static SequenceSpec explicit_list(const std::vector<double>& prefix, double tail_ratio);

  /// scale * e_n^power
  SequenceSpec transformed(Rational scale, double power) const;
  SequenceSpec sqrt() const { return transformed(Rational(1), 0.5); }
  /// e_n + 1/(k 3^n)
  SequenceSpec perturbed(std::size_t k) const;

  const Form& form() const noexcept { return form_; }

  double value(std::size_t n) const;
  /// Certified value: exact for rational forms, otherwise the exact value of
  /// the double returned by value().
  Rational exact(std::size_t n) const;
  /// True when exact() is the mathematical value, not a rounding of it.
  bool is_exact() const noexcept;

  std::optional<GeometricTail> tail() const;
  std::optional<PowerLaw> power_law() const;

  std::string describe() const;

 private:
  explicit SequenceSpec(Form form) : form_(std::move(form)) {}
  Form form_;
};

/// sum_{j >= n} weight^(j - n) e_j, exact when `exact` is set and otherwise
/// a certified upper bound. +infinity when the series diverges.
struct TailSum {
  Extended value;
  bool exact = true;
};

TailSum weighted_tail(const SequenceSpec& seq, std::size_t n, const Rational& weight);

}  // namespace lethargy
