#include "lethargy/chain.hpp"

#include "lethargy/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <variant>

namespace lethargy {

ChainSpec::ChainSpec(std::vector<Index> prefix, Index slope, long long offset)
    : prefix_(std::move(prefix)), slope_(slope), offset_(offset) {
  if (slope_ == 0) throw InvalidSpec("chain rule slope must be at least 1 (strict nesting)");
  Index previous = 0;
  bool first = true;
  for (Index m : prefix_) {
    if (!first && m <= previous) throw InvalidSpec("chain cuts must be strictly increasing");
    previous = m;
    first = false;
  }
  const long long next_n = static_cast<long long>(prefix_.size()) + 1;
  const long long next_cut = static_cast<long long>(slope_) * next_n + offset_;
  if (next_cut < 0) throw InvalidSpec("chain rule produces a negative cut index");
  if (!prefix_.empty() && next_cut <= static_cast<long long>(prefix_.back())) {
    throw InvalidSpec("chain rule does not continue the explicit cuts strictly");
  }
}

ChainSpec ChainSpec::explicit_cuts(std::vector<Index> cuts) {
  if (cuts.empty()) return linear();
  const long long offset = static_cast<long long>(cuts.back()) - static_cast<long long>(cuts.size());
  return ChainSpec(std::move(cuts), 1, offset);
}

Index ChainSpec::cut(std::size_t n) const {
  if (n == 0) return 0;
  if (n <= prefix_.size()) return prefix_[n - 1];
  return static_cast<Index>(static_cast<long long>(slope_) * static_cast<long long>(n) + offset_);
}

ChainSpec ChainSpec::subchain(std::span<const std::size_t> levels) const {
  std::vector<Index> cuts;
  cuts.reserve(levels.size());
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] == 0 || (i > 0 && levels[i] <= levels[i - 1])) {
      throw InvalidSpec("subchain levels must be strictly increasing and positive");
    }
    cuts.push_back(cut(levels[i]));
  }
  return explicit_cuts(std::move(cuts));
}

std::string ChainSpec::describe() const {
  std::ostringstream os;
  os << "chain(";
  if (!prefix_.empty()) {
    os << "cuts=[";
    for (std::size_t i = 0; i < prefix_.size(); ++i) os << (i ? "," : "") << prefix_[i];
    os << "], then ";
  }
  os << "m_n=" << slope_ << "*n" << (offset_ < 0 ? "-" : "+") << std::llabs(offset_) << ")";
  return os.str();
}

double distance(const FNormSpec& spec, const ChainSpec& chain, std::size_t n, const Vector& x) {
  if (!spec.coordinate_monotone()) return distance_bruteforce(spec, chain, n, x);
  return spec.eval(x.tail(chain.cut(n)));
}

double distance_bruteforce(const FNormSpec& spec, const ChainSpec& chain, std::size_t n, const Vector& x,
                           std::size_t grid_points) {
  const Index dim = chain.cut(n);
  if (dim > kBruteForceMaxDim) {
    throw DimensionTooLarge("brute-force distance supports dim V_n <= 4, got " + std::to_string(dim));
  }
  if (dim == 0) return spec.eval(x);
  grid_points = std::max<std::size_t>(grid_points, 2);

  double radius = 1.0;
  for (const auto& [i, v] : x) radius = std::max(radius, 2.0 * std::abs(v) + 1.0);

  auto objective = [&](const std::vector<double>& v) {
    Vector diff = x;
    for (Index j = 0; j < dim; ++j) diff.set(j + 1, diff[j + 1] - v[j]);
    return spec.eval(diff);
  };

  // Coarse grid over [-radius, radius]^dim.
  std::vector<double> best(dim, 0.0);
  double best_value = objective(best);
  std::vector<std::size_t> counter(dim, 0);
  const double h = 2.0 * radius / static_cast<double>(grid_points - 1);
  std::vector<double> point(dim);
  while (true) {
    for (Index j = 0; j < dim; ++j) point[j] = -radius + h * static_cast<double>(counter[j]);
    const double value = objective(point);
    if (value < best_value) {
      best_value = value;
      best = point;
    }
    Index j = 0;
    while (j < dim && ++counter[j] == grid_points) counter[j++] = 0;
    if (j == dim) break;
  }

  // Pattern search over all 3^dim - 1 directions; the diagonals let it leave
  // the ridges of max-type norms.
  std::vector<std::vector<double>> directions;
  const std::size_t total = static_cast<std::size_t>(std::pow(3.0, static_cast<double>(dim)));
  for (std::size_t code = 0; code < total; ++code) {
    std::vector<double> d(dim);
    std::size_t c = code;
    bool nonzero = false;
    for (Index j = 0; j < dim; ++j) {
      d[j] = static_cast<double>(c % 3) - 1.0;
      nonzero = nonzero || d[j] != 0.0;
      c /= 3;
    }
    if (nonzero) directions.push_back(std::move(d));
  }
  double step = h;
  const double min_step = 1e-13 * radius;
  while (step > min_step) {
    bool improved = false;
    for (const auto& d : directions) {
      for (Index j = 0; j < dim; ++j) point[j] = best[j] + step * d[j];
      const double value = objective(point);
      if (value < best_value) {
        best_value = value;
        best = point;
        improved = true;
      }
    }
    if (!improved) step *= 0.5;
  }
  return best_value;
}

namespace {

// scale * sum_{k=a+1}^{b} ratio^k
Rational composite_block_weight(const CompositeBounded& c, Index a, Index b) {
  if (b <= a) return Rational(0);
  const Rational one(1);
  return c.scale * (pow(c.ratio, a + 1) - pow(c.ratio, b + 1)) / (one - c.ratio);
}

Vector fresh_block(const ChainSpec& chain, std::size_t n) {
  Vector v;
  for (Index k = chain.cut(n) + 1; k <= chain.cut(n + 1); ++k) v.set(k, 1.0);
  return v;
}

// Ray-scaling factor for the seminorm-family lower bound.
constexpr double kRayScale = 1e6;

}  // namespace

DnvEstimate dnv_estimate(const FNormSpec& spec, const ChainSpec& chain, std::size_t n) {
  if (n == 0) throw InvalidSpec("chain levels start at 1");
  if (!spec.bounded()) return {Extended::infinity(), false};
  if (const auto* c = std::get_if<CompositeBounded>(&spec.variant())) {
    return {Extended(composite_block_weight(*c, chain.cut(n), chain.cut(n + 1))), false};
  }
  // Fresh vectors have best approximation 0 in V_n, so dist(t v, V_n) = ||t v||.
  const Vector v = kRayScale * fresh_block(chain, n);
  const double lower = spec.eval(v) * (1.0 - 1e-12);
  return {Extended(to_rational(lower)), true};
}

DvInfimum dv_infimum(const FNormSpec& spec, const ChainSpec& chain, std::size_t horizon) {
  if (horizon == 0) throw InvalidSpec("horizon must be at least 1");
  DvInfimum out{Extended::infinity(), 1, false};
  for (std::size_t n = 1; n <= horizon; ++n) {
    const DnvEstimate d = dnv_estimate(spec, chain, n);
    out.lower_bound_only = out.lower_bound_only || d.lower_bound_only;
    if (d.value < out.value) {
      out.value = d.value;
      out.attained_at = n;
    }
  }
  return out;
}

Extended r_of_chain(const FNormSpec& spec, const ChainSpec& chain, std::size_t horizon) {
  if (horizon == 0) throw InvalidSpec("horizon must be at least 1");
  if (!spec.bounded()) return Extended::infinity();
  const Index last = chain.cut(horizon + 1);
  if (const auto* c = std::get_if<CompositeBounded>(&spec.variant())) {
    // The weights decrease in k, so the last generator attains the infimum.
    return Extended(c->scale * pow(c->ratio, last));
  }
  const auto& family = std::get<SeminormFamily>(spec.variant());
  Extended best = Extended::infinity();
  for (Index j = 1; j <= last; ++j) {
    Rational sup(0);
    Rational weight(1);
    for (const auto& s : family.seminorms) {
      weight /= 2;
      if (s.selector.contains(j)) sup += weight;
    }
    best = min(best, Extended(sup));
  }
  return best;
}

SeminormLowerBound dv_lower_bound_seminorms(const FNormSpec& family, const ChainSpec& chain, std::size_t depth,
                                            std::size_t horizon) {
  const auto* fam = std::get_if<SeminormFamily>(&family.variant());
  if (fam == nullptr) throw InvalidSpec("dv_lower_bound_seminorms needs a seminorm family");
  if (depth == 0 || horizon == 0) throw InvalidSpec("depth and horizon must be at least 1");
  const std::size_t used = std::min(depth, fam->seminorms.size());

  SeminormLowerBound out;
  for (std::size_t n = 1; n <= horizon; ++n) {
    ++out.levels_checked;
    const Index cut = chain.cut(n);
    const Vector witness = Vector::unit(cut + 1);
    bool separated = false;
    for (std::size_t j = 0; j < used && !separated; ++j) {
      // Coordinates <= cut can be cancelled by V_n, so the seminorm distance
      // is the seminorm of the tail.
      separated = fam->seminorms[j].eval(witness.tail(cut)) > 0.0;
    }
    if (!separated) {
      out.failing_level = n;
      out.bound = 0;
      return out;
    }
  }
  out.bound = Rational(1) / pow(Rational(2), depth);
  return out;
}

}  // namespace lethargy
