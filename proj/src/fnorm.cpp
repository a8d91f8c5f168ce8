#include "lethargy/fnorm.hpp"

#include "lethargy/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace lethargy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double lp_norm(const Vector& x, double p) {
  if (x.empty()) return 0.0;
  double scale = 0.0;
  for (const auto& [i, v] : x) scale = std::max(scale, std::abs(v));
  if (std::isinf(p)) return scale;
  if (p == 1.0) {
    double sum = 0.0;
    for (const auto& [i, v] : x) sum += std::abs(v);
    return sum;
  }
  // Scaled to avoid overflow and underflow of |v|^p.
  double sum = 0.0;
  for (const auto& [i, v] : x) sum += std::pow(std::abs(v) / scale, p);
  return scale * std::pow(sum, 1.0 / p);
}

void check_p(double p) {
  if (!(p >= 1.0)) throw InvalidSpec("l_p exponent must lie in [1, inf]");
}

double selected_l2(const Vector& x, const CoordinateSelector& sel) {
  double scale = 0.0;
  for (const auto& [i, v] : x) {
    if (sel.contains(i)) scale = std::max(scale, std::abs(v));
  }
  if (scale == 0.0) return 0.0;
  double sum = 0.0;
  for (const auto& [i, v] : x) {
    if (sel.contains(i)) sum += (v / scale) * (v / scale);
  }
  return scale * std::sqrt(sum);
}

double bounded_transform(double u) { return std::isinf(u) ? 1.0 : u / (1.0 + u); }

}  // namespace

double Seminorm::eval(const Vector& x) const {
  const double l2 = selected_l2(x, selector);
  return l2 == 0.0 ? 0.0 : std::pow(l2, degree);
}

FNormSpec::FNormSpec(Variant variant) : variant_(std::move(variant)) {
  std::visit(
      [](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Homogeneous>) {
          check_p(v.p);
        } else if constexpr (std::is_same_v<T, SConvex>) {
          check_p(v.p);
          if (!(v.s > 0.0 && v.s <= 1.0)) throw InvalidSpec("s-convexity exponent must lie in (0, 1]");
        } else if constexpr (std::is_same_v<T, CompositeBounded>) {
          if (!(v.ratio > 0 && v.ratio < 1)) throw InvalidSpec("composite weight ratio must lie in (0, 1)");
          if (!(v.scale > 0)) throw InvalidSpec("composite scale must be positive");
        } else {
          if (v.seminorms.empty()) throw InvalidSpec("seminorm family is empty");
          for (const auto& s : v.seminorms) {
            if (!(s.degree > 0.0 && s.degree <= 1.0)) {
              throw InvalidSpec("seminorm homogeneity degree must lie in (0, 1]");
            }
            if (s.selector.first == 0 || s.selector.stride == 0) {
              throw InvalidSpec("seminorm selector needs first >= 1 and stride >= 1");
            }
          }
        }
      },
      variant_);
}

double FNormSpec::eval(const Vector& x) const {
  return std::visit(
      [&x](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Homogeneous>) {
          return lp_norm(x, v.p);
        } else if constexpr (std::is_same_v<T, SConvex>) {
          const double n = lp_norm(x, v.p);
          return n == 0.0 ? 0.0 : std::pow(n, v.s);
        } else if constexpr (std::is_same_v<T, CompositeBounded>) {
          const double ratio = to_double(v.ratio);
          const double scale = to_double(v.scale);
          double sum = 0.0;
          for (const auto& [i, c] : x) {
            sum += std::pow(ratio, static_cast<double>(i)) * bounded_transform(std::abs(c));
          }
          return scale * sum;
        } else {
          double sum = 0.0;
          double weight = 1.0;
          for (const auto& s : v.seminorms) {
            weight *= 0.5;
            sum += weight * bounded_transform(s.eval(x));
          }
          return sum;
        }
      },
      variant_);
}

double FNormSpec::homogeneity() const noexcept {
  if (std::holds_alternative<Homogeneous>(variant_)) return 1.0;
  if (const auto* s = std::get_if<SConvex>(&variant_)) return s->s;
  return 0.0;
}

bool FNormSpec::bounded() const noexcept { return homogeneity() == 0.0; }

double FNormSpec::ray_supremum(const Vector& x) const {
  if (x.empty()) return 0.0;
  if (!bounded()) return kInf;
  if (const auto* c = std::get_if<CompositeBounded>(&variant_)) {
    const double ratio = to_double(c->ratio);
    double sum = 0.0;
    for (const auto& [i, v] : x) sum += std::pow(ratio, static_cast<double>(i));
    return to_double(c->scale) * sum;
  }
  const auto& family = std::get<SeminormFamily>(variant_);
  double sum = 0.0;
  double weight = 1.0;
  for (const auto& s : family.seminorms) {
    weight *= 0.5;
    if (s.eval(x) > 0.0) sum += weight;
  }
  return sum;
}

std::string FNormSpec::describe() const {
  std::ostringstream os;
  std::visit(
      [&os](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Homogeneous>) {
          os << "homogeneous(p=" << v.p << ")";
        } else if constexpr (std::is_same_v<T, SConvex>) {
          os << "s_convex(p=" << v.p << ", s=" << v.s << ")";
        } else if constexpr (std::is_same_v<T, CompositeBounded>) {
          os << "composite_bounded(ratio=" << to_string(v.ratio) << ", scale=" << to_string(v.scale) << ")";
        } else {
          os << "seminorm_family(" << v.seminorms.size() << " seminorms)";
        }
      },
      variant_);
  return os.str();
}

const char* to_string(AxiomViolation::Axiom axiom) noexcept {
  switch (axiom) {
    case AxiomViolation::Axiom::kZeroIff: return "zero-iff";
    case AxiomViolation::Axiom::kUnimodular: return "unimodular-invariance";
    case AxiomViolation::Axiom::kTriangle: return "triangle";
  }
  return "unknown";
}

AxiomReport fnorm_axiom_check(const FNormSpec& spec, std::span<const Vector> samples,
                              std::span<const double> scalars, double rel_tol) {
  if (samples.empty()) throw InvalidSpec("axiom check needs at least one sample");
  AxiomReport report;
  using Axiom = AxiomViolation::Axiom;

  ++report.checks;
  if (spec.eval(Vector{}) != 0.0) report.violations.push_back({Axiom::kZeroIff, 0, 0, spec.eval(Vector{}), 0.0});

  std::vector<double> norms;
  norms.reserve(samples.size());
  for (const auto& x : samples) norms.push_back(spec.eval(x));

  for (std::size_t i = 0; i < samples.size(); ++i) {
    ++report.checks;
    // Only total variants are required to separate points; the seminorm
    // family may legitimately vanish off its selected coordinates.
    const bool total = !std::holds_alternative<SeminormFamily>(spec.variant());
    if (total && !samples[i].empty() && !(norms[i] > 0.0)) {
      report.violations.push_back({Axiom::kZeroIff, i, i, norms[i], 0.0});
    }
    for (std::size_t a = 0; a < scalars.size(); ++a) {
      if (std::abs(scalars[a]) != 1.0) continue;
      ++report.checks;
      const double scaled = spec.eval(scalars[a] * samples[i]);
      if (std::abs(scaled - norms[i]) > rel_tol * std::max(1.0, norms[i])) {
        report.violations.push_back({Axiom::kUnimodular, i, a, scaled, norms[i]});
      }
    }
    for (std::size_t j = i; j < samples.size(); ++j) {
      ++report.checks;
      const double lhs = spec.eval(samples[i] + samples[j]);
      const double rhs = norms[i] + norms[j];
      if (lhs > rhs + rel_tol * std::max(1.0, rhs)) {
        report.violations.push_back({Axiom::kTriangle, i, j, lhs, rhs});
      }
    }
  }
  return report;
}

}  // namespace lethargy
