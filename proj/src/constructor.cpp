#include "lethargy/constructor.hpp"

#include "lethargy/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace lethargy {
namespace {

std::string fmt(double x) {
  std::ostringstream out;
  out.precision(17);
  out << x;
  return out.str();
}

bool is_l2(const FNormSpec& spec) {
  const auto* h = std::get_if<Homogeneous>(&spec.variant());
  return h != nullptr && h->p == 2.0;
}

Vector fresh_block(const ChainSpec& chain, std::size_t n) {
  Vector g;
  for (Index j = chain.cut(n) + 1; j <= chain.cut(n + 1); ++j) g.set(j, 1.0);
  return g;
}

// Scale t >= 0 with ||t g|| = target, for target below the ray supremum.
double scale_to(const FNormSpec& spec, const Vector& g, double target, double tol) {
  const double s = spec.homogeneity();
  if (s > 0.0) return std::pow(target / spec.eval(g), 1.0 / s);
  auto f = [&](double t) { return spec.eval(t * g); };
  double hi = 1.0;
  int doublings = 0;
  while (f(hi) < target) {
    hi *= 2.0;
    if (++doublings > 1000) throw InfeasibleTarget("target " + fmt(target) + " not reached along the generator ray");
  }
  return ivt_smallest_t(f, target, hi, tol);
}

Rational rational_of(const SequenceSpec& seq, std::size_t n) { return seq.exact(n); }

}  // namespace

double default_tolerance(const FNormSpec& spec) {
  return spec.bounded() ? 1e-10 : 1e-12;
}

Vector select_vn(const FNormSpec& spec, const ChainSpec& chain, std::size_t n, double target, double delta) {
  if (!(target > 0.0)) throw InvalidSpec("select_vn needs a positive target, got " + fmt(target));
  const double tol = std::max(delta / 4.0, 0.0);
  const Vector single = Vector::unit(chain.cut(n) + 1);
  if (spec.ray_supremum(single) > target) return scale_to(spec, single, target, tol) * single;
  if (chain.fresh_count(n) > 1) {
    const Vector block = fresh_block(chain, n);
    if (spec.ray_supremum(block) > target) return scale_to(spec, block, target, tol) * block;
  }
  throw InfeasibleTarget("level " + std::to_string(n) + ": no element of V_" + std::to_string(n + 1) +
                         " reaches distance " + fmt(target) + " from V_" + std::to_string(n));
}

std::vector<Vector> net_zn(const FNormSpec& spec, const ChainSpec& chain, std::size_t n, const Vector& v,
                           double delta, NetMode mode, std::size_t grid_points) {
  if (mode == NetMode::kCoordinate && v.head(chain.cut(n)).empty()) return {Vector()};
  const Vector head = v.head(chain.cut(n));
  std::size_t points = std::max<std::size_t>(grid_points, 2);
  for (int attempt = 0; attempt < 12; ++attempt, points *= 2) {
    std::vector<Vector> net;
    net.reserve(points);
    for (std::size_t i = 0; i < points; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(points - 1);
      net.push_back(t * head);
    }
    if (verify_net(spec, chain, n, v, net, delta)) return net;
  }
  throw InfeasibleTarget("no finite net of truncations met the slack " + fmt(delta) + " at level " +
                         std::to_string(n));
}

bool verify_net(const FNormSpec& spec, const ChainSpec& chain, std::size_t n, const Vector& v,
                const std::vector<Vector>& net, double delta, std::size_t samples) {
  if (net.empty()) return false;
  samples = std::max<std::size_t>(samples, 2);
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(samples - 1);
    const Vector g = t * v;
    const double d = distance(spec, chain, n, g);
    double best = std::numeric_limits<double>::infinity();
    for (const Vector& z : net) best = std::min(best, spec.eval(g - z));
    if (!(best <= d + delta)) return false;
  }
  return true;
}

double ivt_smallest_t(const std::function<double(double)>& f, double target, double upper, double tol) {
  if (!(upper >= 0.0) || !std::isfinite(upper)) throw BracketError("invalid bracket [0, " + fmt(upper) + "]");
  const double f_lo = f(0.0);
  if (std::abs(f_lo - target) <= tol) return 0.0;
  if (f_lo > target) {
    throw BracketError("f(0) = " + fmt(f_lo) + " already exceeds the target " + fmt(target));
  }
  const double f_hi = f(upper);
  if (f_hi < target - tol) {
    throw BracketError("f(" + fmt(upper) + ") = " + fmt(f_hi) + " stays below the target " + fmt(target));
  }
  if (f_hi < target) return upper;
  // Invariant: f(lo) < target <= f(hi).
  double lo = 0.0;
  double hi = upper;
  for (int iter = 0; iter < 2000; ++iter) {
    const double mid = lo + (hi - lo) / 2.0;
    if (mid <= lo || mid >= hi) break;
    if (f(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double err_hi = std::abs(f(hi) - target);
  const double err_lo = std::abs(f(lo) - target);
  if (err_lo <= tol && err_lo <= err_hi) return lo;
  if (err_hi <= tol) return hi;
  throw BracketError("bisection stopped at |f(t) - target| = " + fmt(std::min(err_lo, err_hi)) +
                     " above the tolerance " + fmt(tol));
}

ConstructionTrace construct_wn(const FNormSpec& spec, const ChainSpec& chain, const SequenceSpec& seq,
                               const DeltaSchedule& deltas, std::size_t depth, double tol) {
  if (depth == 0) throw InvalidSpec("construction depth must be at least 1");
  if (deltas.horizon < depth) {
    throw InvalidSpec("delta schedule covers " + std::to_string(deltas.horizon) + " levels, depth is " +
                      std::to_string(depth));
  }
  if (tol <= 0.0) tol = default_tolerance(spec);

  ConstructionTrace trace;
  trace.chain = chain;
  trace.deltas = deltas;
  trace.depth = depth;

  std::vector<Vector> v(depth + 1);
  std::vector<double> e(depth + 1);
  std::vector<double> delta(depth + 1);
  for (std::size_t j = 1; j <= depth; ++j) {
    e[j] = to_double(rational_of(seq, j));
    delta[j] = to_double(deltas.delta(j));
    v[j] = select_vn(spec, chain, j, to_double(deltas.target(j)), delta[j]);
  }

  // a_m = sum_{l=m+1}^{N} 2^(l-m-1) (e_l + delta_l), accumulated downward.
  Rational accumulated(0);
  std::vector<LevelRecord> records(depth + 1);
  Vector u;
  for (std::size_t m = depth; m >= 1; --m) {
    LevelRecord& rec = records[m];
    rec.level = m;
    rec.target = e[m];
    rec.q_bound = to_double(deltas.target(m));
    auto along = [&](double t) { return distance(spec, chain, m, t * v[m]); };
    if (m == depth) {
      rec.bracket = 1.0;
    } else {
      const double s_target = to_double(rational_of(seq, m) + accumulated);
      rec.bracket = ivt_smallest_t(along, s_target, 1.0, tol);
    }
    auto with_tail = [&](double t) { return distance(spec, chain, m, t * v[m] + u); };
    rec.t = ivt_smallest_t(with_tail, e[m], rec.bracket, tol);

    const Vector g = rec.t * v[m];
    const auto net = net_zn(spec, chain, m, g, delta[m]);
    const Vector* best = &net.front();
    double best_norm = spec.eval(g - *best);
    for (const Vector& z : net) {
      const double value = spec.eval(g - z);
      if (value < best_norm) {
        best_norm = value;
        best = &z;
      }
    }
    rec.q = g - *best;
    rec.q_norm = spec.eval(rec.q);
    u += rec.q;
    accumulated = 2 * accumulated + rational_of(seq, m) + deltas.delta(m);
  }

  trace.element = u;
  double partial_norm = 0.0;
  Rational partial_bound(0);
  for (std::size_t j = depth; j >= 1; --j) {
    LevelRecord& rec = records[j];
    rec.achieved = distance(spec, chain, j, u);
    if (std::abs(rec.achieved - rec.target) > tol) {
      throw BracketError("level " + std::to_string(j) + ": reached " + fmt(rec.achieved) + " instead of " +
                         fmt(rec.target));
    }
    if (!(rec.q_norm < rec.q_bound)) {
      throw Error("level " + std::to_string(j) + ": ||q_j|| = " + fmt(rec.q_norm) + " is not below " +
                  fmt(rec.q_bound));
    }
    // sum_{l=j}^{N} ||q_l|| < sum_{l=j}^{N} 2^(l-j) (e_l + delta_l)
    partial_norm += rec.q_norm;
    partial_bound = 2 * partial_bound + rational_of(seq, j) + deltas.delta(j);
    const double bound = to_double(partial_bound);
    if (!(partial_norm < bound)) {
      throw Error("level " + std::to_string(j) + ": partial sum " + fmt(partial_norm) + " is not below " +
                  fmt(bound));
    }
  }
  records.erase(records.begin());
  trace.levels = std::move(records);

  const TailSum tail = weighted_tail(seq, depth, Rational(1));
  trace.tail_bound = tail.value.to_double();
  trace.notes.push_back("levels 1.." + std::to_string(depth) + " reached within " + fmt(tol));
  return trace;
}

ConstructionTrace construct_exact(const FNormSpec& spec, const ChainSpec& chain, const SequenceSpec& seq,
                                  std::size_t depth, std::optional<double> eps_tail, double tol) {
  if (depth == 0) {
    if (!eps_tail) throw InvalidSpec("either a depth or a tail tolerance is required");
    if (!(*eps_tail > 0.0)) throw InvalidSpec("tail tolerance must be positive");
    const auto found = depth_for_tail(seq, to_rational(*eps_tail));
    if (!found) throw InvalidSpec("no depth reaches tail sum " + fmt(*eps_tail) + " for " + seq.describe());
    depth = std::max<std::size_t>(*found, 1);
  } else if (eps_tail) {
    const TailSum tail = weighted_tail(seq, depth, Rational(1));
    if (tail.value.is_infinite() || tail.value.value() > to_rational(*eps_tail)) {
      throw InvalidSpec("depth " + std::to_string(depth) + " leaves tail sum " + tail.value.to_string() +
                        " above " + fmt(*eps_tail));
    }
  }
  const std::size_t horizon = 2 * depth;
  require_valid(seq, horizon + 1);

  std::vector<Extended> dnv;
  bool lower_only = false;
  dnv.reserve(horizon);
  for (std::size_t n = 1; n <= horizon; ++n) {
    const DnvEstimate est = dnv_estimate(spec, chain, n);
    lower_only = lower_only || est.lower_bound_only;
    dnv.push_back(est.value);
  }

  DeltaSchedule deltas;
  try {
    deltas = delta_select(seq, dnv, horizon);
  } catch (const PreconditionError& err) {
    if (err.condition() == condition::kSummability && !check_rapid(seq, 3, horizon)) {
      throw PreconditionError(condition::kRapidDecrease,
                              seq.describe() + " does not decrease by a factor 3; the exact construction "
                                               "needs the summability condition");
    }
    throw;
  }

  ConstructionTrace trace = construct_wn(spec, chain, seq, deltas, depth, tol);
  if (lower_only) trace.notes.push_back("d_(n,V) values are certified lower bounds");
  return trace;
}

ConstructionTrace construct_hilbert_exact(const ChainSpec& chain, const SequenceSpec& seq, std::size_t depth) {
  if (depth == 0) throw InvalidSpec("construction depth must be at least 1");
  for (std::size_t n = 1; n <= depth; ++n) {
    if (!(seq.exact(n + 1) > 0) || seq.exact(n + 1) > seq.exact(n)) {
      throw InvalidSpec(seq.describe() + " is not positive and nonincreasing at n = " + std::to_string(n));
    }
  }
  const FNormSpec l2 = FNormSpec::lp(2.0);
  ConstructionTrace trace;
  trace.chain = chain;
  trace.depth = depth;
  for (std::size_t n = 1; n <= depth; ++n) {
    const double e = seq.value(n);
    double a = e;
    if (n < depth) {
      const double next = seq.value(n + 1);
      a = std::sqrt((e - next) * (e + next));
    }
    LevelRecord rec;
    rec.level = n;
    rec.target = e;
    rec.t = a;
    rec.q = Vector::unit(chain.cut(n) + 1, a);
    rec.q_norm = a;
    rec.q_bound = e;
    trace.element += rec.q;
    trace.levels.push_back(std::move(rec));
  }
  for (LevelRecord& rec : trace.levels) rec.achieved = distance(l2, chain, rec.level, trace.element);
  trace.tail_bound = std::sqrt(2.0) * seq.value(depth + 1);
  return trace;
}

SandwichResult construct_sandwich(const FNormSpec& spec, const ChainSpec& chain, const SequenceSpec& seq,
                                  std::size_t depth, unsigned factor) {
  if (depth == 0) throw InvalidSpec("construction depth must be at least 1");
  if (factor != 2 && factor != 3) throw Unsupported("sandwich factor must be 2 or 3");
  if (factor == 2 && !is_l2(spec)) throw Unsupported("the factor-2 sandwich is available for l_2 only");
  require_valid(seq, depth + 1);

  SandwichInfo info;
  info.rescale = rescale_until(seq, factor, depth);
  const RescaleResult& r = info.rescale;
  const std::size_t checkpoints = r.n.size();

  const Rational last_ratio =
      checkpoints >= 2 ? Rational(r.f_exact[checkpoints - 1] / r.f_exact[checkpoints - 2]) : Rational(1, 4);
  const Rational tail_ratio = std::min(Rational(1, 4), last_ratio);

  SandwichResult out;
  out.depth = depth;
  out.factor = factor;

  if (factor == 2) {
    const ChainSpec w = chain.subchain(r.n);
    const SequenceSpec f = SequenceSpec::explicit_list(r.f_exact, tail_ratio);
    out.trace = construct_hilbert_exact(w, f, checkpoints);
    info.k_o = 1;
    info.n_o = 1;
    out.n_o = 1;
    out.trace.sandwich = info;
    return out;
  }

  for (std::size_t k_o = 1; k_o <= checkpoints; ++k_o) {
    const std::vector<std::size_t> levels(r.n.begin() + static_cast<std::ptrdiff_t>(k_o - 1), r.n.end());
    const std::vector<Rational> values(r.f_exact.begin() + static_cast<std::ptrdiff_t>(k_o - 1), r.f_exact.end());
    const ChainSpec w = chain.subchain(levels);
    const SequenceSpec f = SequenceSpec::explicit_list(values, tail_ratio);
    const std::size_t sub_depth = levels.size();
    const std::size_t horizon = 2 * sub_depth;
    std::vector<Extended> dnv;
    bool lower_only = false;
    for (std::size_t k = 1; k <= horizon; ++k) {
      const DnvEstimate est = dnv_estimate(spec, w, k);
      lower_only = lower_only || est.lower_bound_only;
      dnv.push_back(est.value);
    }
    DeltaSchedule deltas;
    try {
      deltas = delta_select(f, dnv, horizon);
    } catch (const PreconditionError& err) {
      if (err.condition() != condition::kSummability) throw;
      continue;
    }
    out.trace = construct_wn(spec, w, f, deltas, sub_depth);
    info.k_o = k_o;
    info.n_o = k_o == 1 ? 1 : r.n[k_o - 1] + 1;
    out.n_o = info.n_o;
    out.trace.sandwich = info;
    out.trace.notes.push_back("checkpoint values continued geometrically with ratio " + to_string(tail_ratio));
    if (lower_only) out.trace.notes.push_back("d_(n,V) values are certified lower bounds");
    return out;
  }
  throw PreconditionError(condition::kDegenerateChain,
                          "no checkpoint k_o with f_k < d_(k,W) for all k >= k_o among " +
                              std::to_string(checkpoints) + " checkpoints of " + seq.describe());
}

ShapiroResult shapiro_witness(const FNormSpec& spec, const ChainSpec& chain, const SequenceSpec& seq,
                              std::size_t depth) {
  ShapiroResult out;
  out.sandwich = construct_sandwich(spec, chain, seq.sqrt(), depth, 3);
  const auto& checkpoints = out.sandwich.trace.sandwich->rescale.n;
  for (std::size_t n = out.sandwich.n_o; n <= depth; ++n) {
    RatioRow row;
    row.n = n;
    row.e = seq.value(n);
    row.rho = distance(spec, chain, n, out.sandwich.trace.element);
    row.ratio = row.rho / row.e;
    row.lower_bound = 1.0 / (3.0 * std::sqrt(row.e));
    row.checkpoint = std::find(checkpoints.begin(), checkpoints.end(), n) != checkpoints.end();
    out.rows.push_back(row);
  }
  return out;
}

TyuremskikhResult tyuremskikh_witness(const FNormSpec& spec, const ChainSpec& chain, const SequenceSpec& seq,
                                      std::size_t depth) {
  TyuremskikhResult out;
  out.sandwich = construct_sandwich(spec, chain, seq.transformed(Rational(3), 0.5), depth, 3);
  std::size_t first_small = depth + 1;
  for (std::size_t n = 1; n <= depth; ++n) {
    if (seq.exact(n) <= 1) {
      first_small = n;
      break;
    }
  }
  out.certified_from = std::max(out.sandwich.n_o, first_small);
  out.certified = out.certified_from <= depth;
  for (std::size_t n = out.certified_from; n <= depth; ++n) {
    const double rho = distance(spec, chain, n, out.sandwich.trace.element);
    if (!(rho >= seq.value(n))) out.certified = false;
  }
  return out;
}

double setchain_distance(const FNormSpec& spec, const SetChainSpec& setchain, std::size_t n, const Vector& x) {
  if (n == 0) throw InvalidSpec("set chain levels start at 1");
  if (std::holds_alternative<BallChain>(setchain)) {
    if (spec.homogeneity() != 1.0) throw Unsupported("ball chains need a homogeneous norm");
    return std::max(spec.eval(x) - static_cast<double>(n), 0.0);
  }
  if (!is_l2(spec)) throw Unsupported("line-augmented set chains are implemented for l_2 only");
  const ChainSpec& base = std::get<LineAugmentedChain>(setchain).base;
  const double to_subspace = distance(spec, base, n - 1, x);
  // The best fresh line is the one through the largest fresh coordinate.
  Index best = 0;
  double best_abs = -1.0;
  for (const auto& [j, value] : x) {
    if (j > base.cut(n - 1) && j <= base.cut(n) && std::abs(value) > best_abs) {
      best = j;
      best_abs = std::abs(value);
    }
  }
  double rest = 0.0;
  for (const auto& [j, value] : x) {
    if (j != best) rest += value * value;
  }
  return std::min(to_subspace, std::sqrt(rest));
}

}  // namespace lethargy
