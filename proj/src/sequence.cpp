#include "lethargy/sequence.hpp"

#include "lethargy/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace lethargy {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool is_integer(double x) { return std::isfinite(x) && std::floor(x) == x; }

// Rational upper bound on a positive double estimate.
Rational round_up(double x) { return to_rational(std::nextafter(x * (1.0 + 4e-16), std::numeric_limits<double>::infinity())); }

}  // namespace

SequenceSpec SequenceSpec::harmonic() { return SequenceSpec(Harmonic{}); }

SequenceSpec SequenceSpec::geometric(Rational ratio, Rational scale) {
  if (!(ratio > 0 && ratio < 1)) throw InvalidSpec("geometric ratio must lie in (0, 1)");
  if (!(scale > 0)) throw InvalidSpec("geometric scale must be positive");
  return SequenceSpec(Geometric{std::move(ratio), std::move(scale)});
}

SequenceSpec SequenceSpec::power(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidSpec("power exponent must be positive");
  return SequenceSpec(Power{alpha});
}

SequenceSpec SequenceSpec::explicit_list(std::vector<Rational> prefix, Rational tail_ratio) {
  if (prefix.empty()) throw InvalidSpec("explicit sequence needs at least one value");
  if (!(tail_ratio > 0 && tail_ratio <= 1)) throw InvalidSpec("explicit tail ratio must lie in (0, 1]");
  for (const auto& v : prefix) {
    if (!(v > 0)) throw InvalidSpec("explicit sequence values must be positive");
  }
  return SequenceSpec(Explicit{std::move(prefix), std::move(tail_ratio)});
}

SequenceSpec SequenceSpec::explicit_list(const std::vector<double>& prefix, double tail_ratio) {
  std::vector<Rational> exact;
  exact.reserve(prefix.size());
  for (double v : prefix) exact.push_back(to_rational(v));
  return explicit_list(std::move(exact), simplest_rational(tail_ratio));
}

SequenceSpec SequenceSpec::transformed(Rational scale, double power) const {
  if (!(scale > 0)) throw InvalidSpec("transform scale must be positive");
  if (!(power > 0.0)) throw InvalidSpec("transform power must be positive");
  return SequenceSpec(Transformed{std::make_shared<const SequenceSpec>(*this), std::move(scale), power});
}

SequenceSpec SequenceSpec::perturbed(std::size_t k) const {
  if (k == 0) throw InvalidSpec("perturbation index k must be at least 1");
  return SequenceSpec(Perturbed{std::make_shared<const SequenceSpec>(*this), k});
}

double SequenceSpec::value(std::size_t n) const {
  if (n == 0) throw InvalidSpec("sequence indices start at 1");
  const double dn = static_cast<double>(n);
  return std::visit(
      Overloaded{
          [&](const Harmonic&) { return 1.0 / dn; },
          [&](const Geometric& g) { return to_double(g.scale) * std::pow(to_double(g.ratio), dn); },
          [&](const Power& p) { return std::pow(dn, -p.alpha); },
          [&](const Explicit& e) {
            if (n <= e.prefix.size()) return to_double(e.prefix[n - 1]);
            return to_double(e.prefix.back()) *
                   std::pow(to_double(e.tail_ratio), static_cast<double>(n - e.prefix.size()));
          },
          [&](const Transformed& t) { return to_double(t.scale) * std::pow(t.base->value(n), t.power); },
          [&](const Perturbed& p) { return p.base->value(n) + 1.0 / (static_cast<double>(p.k) * std::pow(3.0, dn)); },
      },
      form_);
}

Rational SequenceSpec::exact(std::size_t n) const {
  if (n == 0) throw InvalidSpec("sequence indices start at 1");
  return std::visit(
      Overloaded{
          [&](const Harmonic&) { return Rational(1, static_cast<long long>(n)); },
          [&](const Geometric& g) { return Rational(g.scale * pow(g.ratio, n)); },
          [&](const Power& p) {
            if (is_integer(p.alpha)) {
              return Rational(Rational(1) / pow(Rational(static_cast<long long>(n)), static_cast<std::size_t>(p.alpha)));
            }
            return to_rational(value(n));
          },
          [&](const Explicit& e) {
            if (n <= e.prefix.size()) return e.prefix[n - 1];
            return Rational(e.prefix.back() * pow(e.tail_ratio, n - e.prefix.size()));
          },
          [&](const Transformed& t) {
            if (t.power == 1.0) return Rational(t.scale * t.base->exact(n));
            return to_rational(value(n));
          },
          [&](const Perturbed& p) {
            return Rational(p.base->exact(n) + Rational(1) / (Rational(static_cast<long long>(p.k)) * pow(Rational(3), n)));
          },
      },
      form_);
}

bool SequenceSpec::is_exact() const noexcept {
  return std::visit(Overloaded{
                        [](const Harmonic&) { return true; },
                        [](const Geometric&) { return true; },
                        [](const Power& p) { return is_integer(p.alpha); },
                        [](const Explicit&) { return true; },
                        [](const Transformed& t) { return t.power == 1.0 && t.base->is_exact(); },
                        [](const Perturbed& p) { return p.base->is_exact(); },
                    },
                    form_);
}

std::optional<GeometricTail> SequenceSpec::tail() const {
  return std::visit(
      Overloaded{
          [](const Harmonic&) -> std::optional<GeometricTail> { return std::nullopt; },
          [](const Geometric& g) -> std::optional<GeometricTail> {
            return GeometricTail{1, {{g.scale, g.ratio}}};
          },
          [](const Power&) -> std::optional<GeometricTail> { return std::nullopt; },
          [](const Explicit& e) -> std::optional<GeometricTail> {
            const std::size_t start = e.prefix.size();
            return GeometricTail{start, {{e.prefix.back() / pow(e.tail_ratio, start), e.tail_ratio}}};
          },
          [](const Transformed& t) -> std::optional<GeometricTail> {
            auto base = t.base->tail();
            if (!base) return std::nullopt;
            if (t.power == 1.0) {
              for (auto& term : base->terms) term.coefficient *= t.scale;
              return base;
            }
            if (base->terms.size() != 1) return std::nullopt;
            const auto& term = base->terms.front();
            const double c = std::pow(to_double(term.coefficient), t.power);
            const double r = std::pow(to_double(term.ratio), t.power);
            if (!(c > 0.0) || !std::isfinite(c)) return std::nullopt;
            return GeometricTail{base->start, {{Rational(t.scale * to_rational(c)), to_rational(r)}}};
          },
          [](const Perturbed& p) -> std::optional<GeometricTail> {
            auto base = p.base->tail();
            if (!base) return std::nullopt;
            base->terms.push_back({Rational(1, static_cast<long long>(p.k)), Rational(1, 3)});
            return base;
          },
      },
      form_);
}

std::optional<PowerLaw> SequenceSpec::power_law() const {
  return std::visit(
      Overloaded{
          [](const Harmonic&) -> std::optional<PowerLaw> { return PowerLaw{1.0, 1.0}; },
          [](const Geometric&) -> std::optional<PowerLaw> { return std::nullopt; },
          [](const Power& p) -> std::optional<PowerLaw> { return PowerLaw{1.0, p.alpha}; },
          [](const Explicit&) -> std::optional<PowerLaw> { return std::nullopt; },
          [](const Transformed& t) -> std::optional<PowerLaw> {
            auto base = t.base->power_law();
            if (!base) return std::nullopt;
            return PowerLaw{to_double(t.scale) * std::pow(base->coefficient, t.power), base->exponent * t.power};
          },
          [](const Perturbed&) -> std::optional<PowerLaw> { return std::nullopt; },
      },
      form_);
}

std::string SequenceSpec::describe() const {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const Harmonic&) { os << "harmonic"; },
                 [&](const Geometric& g) {
                   os << "geometric(ratio=" << to_string(g.ratio);
                   if (g.scale != 1) os << ", scale=" << to_string(g.scale);
                   os << ")";
                 },
                 [&](const Power& p) { os << "power(alpha=" << p.alpha << ")"; },
                 [&](const Explicit& e) {
                   os << "explicit(" << e.prefix.size() << " values, tail_ratio=" << to_string(e.tail_ratio) << ")";
                 },
                 [&](const Transformed& t) {
                   os << to_string(t.scale) << "*(" << t.base->describe() << ")^" << t.power;
                 },
                 [&](const Perturbed& p) { os << "(" << p.base->describe() << ") + 1/(" << p.k << "*3^n)"; },
             },
             form_);
  return os.str();
}

TailSum weighted_tail(const SequenceSpec& seq, std::size_t n, const Rational& weight) {
  if (n == 0) throw InvalidSpec("sequence indices start at 1");
  if (auto tail = seq.tail()) {
    // Prefix part exactly, then the closed geometric form from tail->start.
    Rational sum(0);
    Rational w(1);
    std::size_t j = n;
    for (; j < tail->start; ++j) {
      sum += w * seq.exact(j);
      w *= weight;
    }
    for (const auto& term : tail->terms) {
      const Rational q = weight * term.ratio;
      if (q >= 1) return {Extended::infinity(), true};
      sum += w * term.coefficient * pow(term.ratio, j) / (Rational(1) - q);
    }
    return {Extended(sum), seq.is_exact()};
  }
  if (const auto* p = std::get_if<SequenceSpec::Perturbed>(&seq.form())) {
    TailSum base = weighted_tail(*p->base, n, weight);
    if (base.value.is_infinite()) return base;
    const Rational q = weight / 3;
    if (q >= 1) return {Extended::infinity(), true};
    const Rational extra =
        Rational(1) / (Rational(static_cast<long long>(p->k)) * pow(Rational(3), n)) / (Rational(1) - q);
    return {Extended(base.value.value() + extra), base.exact};
  }
  if (auto law = seq.power_law()) {
    // e_{j+1}/e_j -> 1: divergent for weight >= 1 unless exponent > 1 and
    // weight == 1, where an integral majorant applies.
    if (weight > 1) return {Extended::infinity(), true};
    if (weight < 1) throw Unsupported("sub-unit weights are not supported for power-law sequences");
    if (law->exponent <= 1.0) return {Extended::infinity(), true};
    const double dn = static_cast<double>(n);
    const double bound = law->coefficient * (std::pow(dn, -law->exponent) +
                                             std::pow(dn, 1.0 - law->exponent) / (law->exponent - 1.0));
    return {Extended(round_up(bound)), false};
  }
  throw Unsupported("no tail rule available for " + seq.describe());
}

}  // namespace lethargy
