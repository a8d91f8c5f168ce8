#pragma once

#include "lethargy/rational.hpp"
#include "lethargy/vector.hpp"

#include <span>
#include <string>
#include <variant>
#include <vector>

namespace lethargy {

/// ||x|| = (sum |x_k|^p)^(1/p); p = infinity gives the max norm.
struct Homogeneous {
  double p = 2.0;
};

/// ||x|| = (l_p norm of x)^s, so that ||t x|| = |t|^s ||x||.
struct SConvex {
  double p = 2.0;
  double s = 1.0;
};

/// ||x|| = scale * sum_k ratio^k |x_k| / (1 + |x_k|).
/// The default (ratio 1/2, scale 1) is the bounded sequence-space F-norm.
struct CompositeBounded {
  Rational ratio{1, 2};
  Rational scale{1};
};

/// Coordinates k with k >= first, k <= last (last == 0: unbounded) and
/// (k - first) divisible by stride.
struct CoordinateSelector {
  Index first = 1;
  Index last = 0;
  Index stride = 1;

  bool contains(Index k) const noexcept {
    return k >= first && (last == 0 || k <= last) && (k - first) % stride == 0;
  }
};

/// u(x) = (l_2 norm of the selected block)^degree, degree in (0, 1].
struct Seminorm {
  CoordinateSelector selector;
  double degree = 1.0;

  double eval(const Vector& x) const;
};

/// ||x|| = sum_j 2^-j u_j(x) / (1 + u_j(x)), j = 1, 2, ...
struct SeminormFamily {
  std::vector<Seminorm> seminorms;
};

/// Computable F-norm on finitely supported sequences. Immutable.
class FNormSpec {
 public:
  using Variant = std::variant<Homogeneous, SConvex, CompositeBounded, SeminormFamily>;

  /// Validates the parameters; throws InvalidSpec.
  explicit FNormSpec(Variant variant);

  static FNormSpec lp(double p) { return FNormSpec(Homogeneous{p}); }
  static FNormSpec s_convex(double p, double s) { return FNormSpec(SConvex{p, s}); }
  static FNormSpec composite(Rational ratio = Rational(1, 2), Rational scale = Rational(1)) {
    return FNormSpec(CompositeBounded{std::move(ratio), std::move(scale)});
  }
  static FNormSpec seminorms(std::vector<Seminorm> family) {
    return FNormSpec(SeminormFamily{std::move(family)});
  }

  const Variant& variant() const noexcept { return variant_; }

  double eval(const Vector& x) const;

  /// Scaling exponent s with ||t x|| = |t|^s ||x||, or 0 for variants without
  /// power homogeneity (bounded ones).
  double homogeneity() const noexcept;
  /// True when sup_t ||t x|| is finite for every x.
  bool bounded() const noexcept;
  /// Enlarging |x_k| never decreases ||x|| and ||.|| is minimised
  /// coordinatewise at 0. Distances to coordinate subspaces then have the
  /// closed form ||tail(x)||.
  bool coordinate_monotone() const noexcept { return true; }

  /// sup over t >= 0 of ||t x||: +infinity for homogeneous variants.
  double ray_supremum(const Vector& x) const;

  std::string describe() const;

 private:
  Variant variant_;
};

/// One violated instance of an F-norm axiom.
struct AxiomViolation {
  enum class Axiom { kZeroIff, kUnimodular, kTriangle } axiom;
  std::size_t sample = 0;
  std::size_t other = 0;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct AxiomReport {
  std::size_t checks = 0;
  std::vector<AxiomViolation> violations;

  bool passed() const noexcept { return violations.empty(); }
};

/// Checks ||x|| = 0 iff x = 0, ||a x|| = ||x|| for every scalar with |a| = 1
/// taken from `scalars`, and the triangle inequality over all sample pairs,
/// with relative slack `rel_tol`.
AxiomReport fnorm_axiom_check(const FNormSpec& spec, std::span<const Vector> samples,
                              std::span<const double> scalars, double rel_tol = 1e-12);

const char* to_string(AxiomViolation::Axiom axiom) noexcept;

}  // namespace lethargy
