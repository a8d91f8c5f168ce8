#include "doctest.h"
#include "helpers.hpp"

#include "lethargy/constructor.hpp"
#include "lethargy/errors.hpp"
#include "lethargy/seqtools.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <vector>

using namespace lethargy;
using lethargy::testing::random_vector;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

std::vector<Extended> dnv_values(const FNormSpec& spec, const ChainSpec& chain, std::size_t horizon) {
  std::vector<Extended> out;
  for (std::size_t n = 1; n <= horizon; ++n) out.push_back(dnv_estimate(spec, chain, n).value);
  return out;
}

ConstructionTrace build(const FNormSpec& spec, const ChainSpec& chain, const SequenceSpec& seq, std::size_t depth) {
  const DeltaSchedule deltas = delta_select(seq, dnv_values(spec, chain, 2 * depth), 2 * depth);
  return construct_wn(spec, chain, seq, deltas, depth);
}

// min over t of ||x - t b_j|| by a coarse scan plus golden-section refinement.
double line_distance_oracle(const FNormSpec& spec, const Vector& x, Index j) {
  auto f = [&](double t) { return spec.eval(x - Vector::unit(j, t)); };
  const double radius = 2.0 * std::abs(x[j]) + 1.0;
  double best_t = 0.0;
  for (int i = -200; i <= 200; ++i) {
    const double t = radius * i / 200.0;
    if (f(t) < f(best_t)) best_t = t;
  }
  double lo = best_t - radius / 200.0;
  double hi = best_t + radius / 200.0;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double a = hi - g * (hi - lo);
    const double b = lo + g * (hi - lo);
    if (f(a) < f(b)) {
      hi = b;
    } else {
      lo = a;
    }
  }
  return std::min(f((lo + hi) / 2), f(best_t));
}

}  // namespace

TEST_CASE("select_vn examples") {
  const ChainSpec chain = ChainSpec::linear();
  const Vector v = select_vn(FNormSpec::lp(2), chain, 3, 0.5, 1e-6);
  CHECK(v == Vector::unit(4, 0.5));
  const Vector s = select_vn(FNormSpec::s_convex(2, 0.5), chain, 3, 0.5, 1e-6);
  CHECK(s.support_size() == 1);
  CHECK(s[4] == doctest::Approx(0.25).epsilon(1e-15));

  const FNormSpec c = FNormSpec::composite();
  for (std::size_t n = 1; n <= 10; ++n) {
    const Index k = chain.cut(n) + 1;
    const double target = std::ldexp(1.0, -static_cast<int>(k)) / 3.0;
    const Vector w = select_vn(c, chain, n, target, 1e-12);
    CHECK(w[k] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(distance(c, chain, n, w) == doctest::Approx(target).epsilon(1e-12));
  }
}

TEST_CASE("select_vn falls back to the fresh block and reports infeasible targets") {
  const FNormSpec c = FNormSpec::composite();
  const ChainSpec doubled = ChainSpec::linear(2, 0);
  // Fresh coordinates 3 and 4 of level 1: a single one saturates at 1/8,
  // both together at 3/16.
  const Vector block = select_vn(c, doubled, 1, 0.15, 1e-12);
  CHECK(block.support_size() == 2);
  CHECK(distance(c, doubled, 1, block) == doctest::Approx(0.15).epsilon(1e-12));
  CHECK_THROWS_AS(select_vn(c, doubled, 1, 0.2, 1e-12), InfeasibleTarget);
  CHECK_THROWS_AS(select_vn(c, ChainSpec::linear(), 1, 0.25, 1e-12), InfeasibleTarget);
  CHECK_THROWS_AS(select_vn(FNormSpec::lp(2), ChainSpec::linear(), 1, 0.0, 1e-12), InvalidSpec);
}

TEST_CASE("net_zn: coordinate mode and grid mode") {
  const FNormSpec l2 = FNormSpec::lp(2);
  const ChainSpec chain = ChainSpec::linear();
  const Vector fresh = Vector::unit(3, 0.7);
  const auto trivial = net_zn(l2, chain, 2, fresh, 1e-9);
  REQUIRE(trivial.size() == 1);
  CHECK(trivial.front().empty());
  CHECK(verify_net(l2, chain, 2, fresh, trivial, 1e-12));

  const Vector general{{1, 0.5}, {2, -0.3}, {3, 1.0}};
  for (const FNormSpec& spec : {FNormSpec::lp(2), FNormSpec::lp(1), FNormSpec::composite()}) {
    const auto net = net_zn(spec, chain, 2, general, 0.05, NetMode::kGrid, 11);
    CHECK(net.size() <= 11);
    CHECK(verify_net(spec, chain, 2, general, net, 0.05, 1000));
    CHECK_FALSE(verify_net(spec, chain, 2, general, {Vector()}, 1e-3, 1000));
  }
  // A slack larger than every ||t v|| makes {0} a net in any mode.
  CHECK(verify_net(l2, chain, 2, general, {Vector()}, 10.0, 1000));
}

TEST_CASE("ivt_smallest_t examples") {
  CHECK(ivt_smallest_t([](double t) { return t; }, 0.3, 1.0, 1e-14) == doctest::Approx(0.3).epsilon(1e-13));
  for (int k = 1; k <= 20; ++k) {
    const double w = std::ldexp(1.0, -k);
    const double t = ivt_smallest_t([w](double s) { return w * s / (1 + s); }, w / 2, 4.0, 1e-12 * w);
    CHECK(t == doctest::Approx(1.0).epsilon(1e-10));
  }
  CHECK(ivt_smallest_t([](double t) { return std::sqrt(t * t + 0.25); }, 0.5, 1.0, 1e-14) == 0.0);
  // Flat segment on [0.2, 0.6]: the left end is returned.
  auto flat = [](double t) { return t < 0.2 ? t : (t < 0.6 ? 0.2 : t - 0.4); };
  CHECK(ivt_smallest_t(flat, 0.2, 1.0, 1e-14) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK_THROWS_AS(ivt_smallest_t([](double t) { return t; }, 2.0, 1.0, 1e-12), BracketError);
  CHECK_THROWS_AS(ivt_smallest_t([](double t) { return t + 1.0; }, 0.5, 1.0, 1e-12), BracketError);
}

TEST_CASE("construct_wn in l_2 reproduces the telescoping closed form") {
  const FNormSpec l2 = FNormSpec::lp(2);
  const ChainSpec chain = ChainSpec::linear();
  const SequenceSpec seq = SequenceSpec::geometric(Rational(1, 4));
  const ConstructionTrace trace = build(l2, chain, seq, 10);
  REQUIRE(trace.levels.size() == 10);
  for (std::size_t j = 1; j <= 10; ++j) {
    const double e = seq.value(j);
    CHECK(std::abs(distance(l2, chain, j, trace.element) - e) <= 1e-9);
    if (j < 10) {
      const double next = seq.value(j + 1);
      CHECK(std::abs(trace.element[j + 1]) == doctest::Approx(std::sqrt(e * e - next * next)).epsilon(1e-10));
    }
    const LevelRecord& rec = trace.levels[j - 1];
    CHECK(rec.level == j);
    CHECK(rec.q_norm < rec.q_bound);
    CHECK(rec.t >= 0.0);
    CHECK(rec.t <= rec.bracket);
  }
}

TEST_CASE("construct_wn in l_1 has coefficients e_j - e_(j+1)") {
  const FNormSpec l1 = FNormSpec::lp(1);
  const ChainSpec chain = ChainSpec::linear();
  const SequenceSpec seq = SequenceSpec::geometric(Rational(1, 4));
  const ConstructionTrace trace = build(l1, chain, seq, 8);
  for (std::size_t j = 1; j <= 8; ++j) {
    CHECK(std::abs(distance(l1, chain, j, trace.element) - seq.value(j)) <= 1e-9);
    if (j < 8) {
      CHECK(std::abs(trace.element[j + 1]) == doctest::Approx(seq.value(j) - seq.value(j + 1)).epsilon(1e-10));
    }
  }
}

TEST_CASE("construct_wn in the bounded composite space") {
  const FNormSpec c = FNormSpec::composite();
  const ChainSpec chain = ChainSpec::explicit_cuts({0});  // V_n = { x_j = 0 for j >= n }
  const SequenceSpec seq = SequenceSpec::geometric(Rational(1, 8));
  const ConstructionTrace trace = build(c, chain, seq, 6);
  for (std::size_t j = 1; j <= 6; ++j) {
    const double rho = distance(c, chain, j, trace.element);
    CHECK(std::abs(rho - seq.value(j)) <= 1e-9);
    CHECK(std::abs(rho - seq.value(j)) <= 1e-12 * seq.value(j));
  }
  // Independent minimisation for the two smallest levels.
  for (std::size_t j = 1; j <= 2; ++j) {
    CHECK(distance_bruteforce(c, chain, j, trace.element) == doctest::Approx(seq.value(j)).epsilon(1e-6));
  }
}

TEST_CASE("simultaneity and certificates across norms") {
  const SequenceSpec seq = SequenceSpec::geometric(Rational(1, 4));
  const ChainSpec chain = ChainSpec::linear(2, 1);
  for (const FNormSpec& spec : {FNormSpec::lp(1), FNormSpec::lp(2), FNormSpec::lp(kInf), FNormSpec::s_convex(2, 0.5),
                                FNormSpec::s_convex(1, 0.3)}) {
    const ConstructionTrace trace = build(spec, chain, seq, 12);
    double partial = 0.0;
    Rational bound(0);
    for (std::size_t j = 12; j >= 1; --j) {
      const LevelRecord& rec = trace.levels[j - 1];
      CHECK(std::abs(distance(spec, chain, j, trace.element) - seq.value(j)) <= 1e-12);
      CHECK(rec.q_norm < to_double(trace.deltas->target(j)));
      partial += rec.q_norm;
      bound = 2 * bound + seq.exact(j) + trace.deltas->delta(j);
      CHECK(partial < to_double(bound));
    }
  }
}

TEST_CASE("oracle equivalence: inductive and closed-form Hilbert constructions") {
  const FNormSpec l2 = FNormSpec::lp(2);
  const ChainSpec chain = ChainSpec::linear();
  for (const SequenceSpec& seq : {SequenceSpec::geometric(Rational(1, 4)), SequenceSpec::geometric(Rational(3, 10))}) {
    const ConstructionTrace inductive = build(l2, chain, seq, 12);
    const ConstructionTrace closed = construct_hilbert_exact(chain, seq, 12);
    for (std::size_t j = 1; j <= 12; ++j) {
      CHECK(std::abs(inductive.levels[j - 1].achieved - closed.levels[j - 1].achieved) <= 1e-8);
    }
  }
}

TEST_CASE("construct_exact") {
  const FNormSpec l2 = FNormSpec::lp(2);
  const ChainSpec chain = ChainSpec::linear();
  const ConstructionTrace auto_depth = construct_exact(l2, chain, SequenceSpec::geometric(Rational(1, 4)), 0, 1e-8);
  CHECK(auto_depth.depth == 14);
  CHECK(auto_depth.tail_bound == doctest::Approx(4.0 / 3.0 * std::pow(4.0, -14)));
  CHECK(auto_depth.tail_bound <= 1e-8);

  try {
    construct_exact(l2, chain, SequenceSpec::geometric(Rational(1, 3)), 10);
    FAIL("expected a summability error");
  } catch (const PreconditionError& err) {
    CHECK(err.condition() == condition::kSummability);
  }
  try {
    construct_exact(l2, chain, SequenceSpec::harmonic(), 10);
    FAIL("expected a rapid-decrease error");
  } catch (const PreconditionError& err) {
    CHECK(err.condition() == condition::kRapidDecrease);
    CHECK(std::string(err.what()).find("construct_sandwich") != std::string::npos);
  }

  const SequenceSpec point3 = SequenceSpec::geometric(Rational(3, 10));
  const ConstructionTrace trace = construct_exact(l2, chain, point3, 10);
  for (std::size_t j = 1; j <= 10; ++j) CHECK(std::abs(distance(l2, chain, j, trace.element) - point3.value(j)) <= 1e-9);
  CHECK_THROWS_AS(construct_exact(l2, chain, point3, 3, 1e-8), InvalidSpec);
}

TEST_CASE("construct_hilbert_exact") {
  const FNormSpec l2 = FNormSpec::lp(2);
  const ChainSpec chain = ChainSpec::linear();
  const ConstructionTrace half = construct_hilbert_exact(chain, SequenceSpec::geometric(Rational(1, 2)), 10);
  for (std::size_t n = 1; n < 10; ++n) {
    CHECK(half.element[n + 1] == doctest::Approx(std::ldexp(std::sqrt(3.0) / 2, -static_cast<int>(n))));
  }
  CHECK(half.element[11] == doctest::Approx(std::ldexp(1.0, -10)));

  const SequenceSpec constant = SequenceSpec::explicit_list({Rational(1, 2)}, Rational(1));
  const ConstructionTrace flat = construct_hilbert_exact(chain, constant, 6);
  CHECK(flat.element.support_size() == 1);
  CHECK(flat.element[7] == 0.5);
  for (std::size_t n = 1; n <= 6; ++n) CHECK(distance(l2, chain, n, flat.element) == 0.5);

  const ConstructionTrace harmonic = construct_hilbert_exact(chain, SequenceSpec::harmonic(), 100);
  for (std::size_t n = 1; n <= 100; ++n) {
    CHECK(std::abs(distance(l2, chain, n, harmonic.element) - 1.0 / static_cast<double>(n)) <= 1e-12);
  }
  CHECK_THROWS_AS(
      construct_hilbert_exact(chain, SequenceSpec::explicit_list({Rational(1), Rational(2)}, Rational(1, 2)), 3),
      InvalidSpec);
}

TEST_CASE("construct_sandwich: harmonic in l_2 with factor 3") {
  const FNormSpec l2 = FNormSpec::lp(2);
  const ChainSpec chain = ChainSpec::linear();
  const SandwichResult s = construct_sandwich(l2, chain, SequenceSpec::harmonic(), 200, 3);
  CHECK(s.n_o == 1);
  REQUIRE(s.trace.sandwich);
  CHECK(s.trace.sandwich->k_o == 1);
  for (std::size_t n = 1; n <= 200; ++n) {
    const double rho = distance(l2, chain, n, s.trace.element);
    const double e = 1.0 / static_cast<double>(n);
    CHECK(rho >= e / 3 - 1e-12);
    CHECK(rho <= 3 * e + 1e-12);
  }
  std::size_t level = 1;
  double f = 1.0;
  for (int k = 1; level <= 200; ++k, level *= 3, f /= 3) {
    CHECK(std::abs(distance(l2, chain, level, s.trace.element) - f) <= 1e-10);
  }
}

TEST_CASE("construct_sandwich: factor 2 in l_2 and the distance ladder") {
  const FNormSpec l2 = FNormSpec::lp(2);
  const ChainSpec chain = ChainSpec::linear();
  const SandwichResult s = construct_sandwich(l2, chain, SequenceSpec::harmonic(), 200, 2);
  const auto& n = s.trace.sandwich->rescale.n;
  const auto& f = s.trace.sandwich->rescale.f;
  for (std::size_t k = 0; k < n.size(); ++k) {
    CHECK(n[k] == (std::size_t{1} << k));
    CHECK(std::abs(distance(l2, chain, n[k], s.trace.element) - f[k]) <= 1e-12);
    // Constant between consecutive checkpoints.
    if (k + 1 < n.size()) {
      for (std::size_t m = n[k] + 1; m <= n[k + 1]; ++m) {
        CHECK(distance(l2, chain, m, s.trace.element) == distance(l2, chain, n[k + 1], s.trace.element));
      }
    }
  }
  for (std::size_t m = 1; m <= 200; ++m) {
    const double rho = distance(l2, chain, m, s.trace.element);
    const double e = 1.0 / static_cast<double>(m);
    CHECK(rho >= e / 2 - 1e-12);
    CHECK(rho <= 2 * e + 1e-12);
  }
  CHECK_THROWS_AS(construct_sandwich(FNormSpec::lp(1), chain, SequenceSpec::harmonic(), 20, 2), Unsupported);
}

TEST_CASE("construct_sandwich in Banach and s-convex spaces") {
  const ChainSpec chain = ChainSpec::linear();
  const SequenceSpec seq = SequenceSpec::power(0.5);
  for (const FNormSpec& spec : {FNormSpec::lp(1), FNormSpec::lp(kInf), FNormSpec::s_convex(2, 0.5)}) {
    const SandwichResult s = construct_sandwich(spec, chain, seq, 100, 3);
    CHECK(s.n_o == 1);
    for (std::size_t n = 1; n <= 100; ++n) {
      const double rho = distance(spec, chain, n, s.trace.element);
      CHECK(rho >= seq.value(n) / 3 - 1e-11);
      CHECK(rho <= 3 * seq.value(n) + 1e-11);
    }
  }
}

TEST_CASE("construct_sandwich with a vanishing d_V") {
  const FNormSpec c = FNormSpec::composite();
  const ChainSpec chain = ChainSpec::explicit_cuts({0});
  try {
    construct_sandwich(c, chain, SequenceSpec::harmonic(), 50, 3);
    FAIL("expected a degenerate-chain error");
  } catch (const PreconditionError& err) {
    CHECK(err.condition() == condition::kDegenerateChain);
    CHECK(std::string(err.what()).find("e_n < d_(n,V)") != std::string::npos);
  }
  const SequenceSpec fast = SequenceSpec::geometric(Rational(1, 8));
  const SandwichResult s = construct_sandwich(c, chain, fast, 12, 3);
  for (std::size_t n = s.n_o; n <= 12; ++n) {
    const double rho = distance(c, chain, n, s.trace.element);
    CHECK(rho >= fast.value(n) / 3 - 1e-10);
    CHECK(rho <= 3 * fast.value(n) + 1e-10);
  }
}

TEST_CASE("construct_sandwich starts late when early levels are infeasible") {
  // The composite weights cap early targets: e_1 = 2 exceeds every
  // distance, so the first checkpoints are skipped and n_o > 1.
  const FNormSpec c = FNormSpec::composite();
  const ChainSpec chain = ChainSpec::explicit_cuts({0});
  const SequenceSpec seq =
      SequenceSpec::explicit_list({Rational(2), Rational(1, 2), Rational(1, 64), Rational(1, 512)}, Rational(1, 8));
  const SandwichResult s = construct_sandwich(c, chain, seq, 12, 3);
  CHECK(s.trace.sandwich->k_o > 1);
  CHECK(s.n_o == s.trace.sandwich->rescale.n[s.trace.sandwich->k_o - 1] + 1);
  for (std::size_t n = s.n_o; n <= 12; ++n) {
    const double rho = distance(c, chain, n, s.trace.element);
    CHECK(rho >= seq.value(n) / 3 - 1e-10);
    CHECK(rho <= 3 * seq.value(n) + 1e-10);
  }
}

TEST_CASE("shapiro_witness") {
  const FNormSpec l2 = FNormSpec::lp(2);
  const ChainSpec chain = ChainSpec::linear();
  const ShapiroResult h = shapiro_witness(l2, chain, SequenceSpec::harmonic(), 200);
  std::size_t checkpoints = 0;
  for (const RatioRow& row : h.rows) {
    CHECK(row.ratio >= std::sqrt(static_cast<double>(row.n)) / 3 - 1e-9);
    checkpoints += row.checkpoint ? 1 : 0;
  }
  CHECK(checkpoints == 3);  // n = 1, 9, 81
  CHECK(h.rows.back().ratio > 4.0);

  const ShapiroResult g = shapiro_witness(l2, chain, SequenceSpec::geometric(Rational(1, 4)), 20);
  for (const RatioRow& row : g.rows) CHECK(row.ratio >= std::ldexp(1.0, static_cast<int>(row.n)) / 3 * (1 - 1e-9));

  try {
    shapiro_witness(l2, chain, SequenceSpec::explicit_list({Rational(1), Rational(1), Rational(1, 2)}, Rational(1, 2)),
                    10);
    FAIL("expected a sequence error");
  } catch (const PreconditionError& err) {
    CHECK(err.condition() == condition::kSequence);
  }
}

TEST_CASE("tyuremskikh_witness") {
  const FNormSpec l2 = FNormSpec::lp(2);
  const ChainSpec chain = ChainSpec::linear();
  const TyuremskikhResult h = tyuremskikh_witness(l2, chain, SequenceSpec::harmonic(), 200);
  CHECK(h.certified);
  CHECK(h.certified_from == 1);
  for (std::size_t n = 1; n <= 200; ++n) {
    const double rho = distance(l2, chain, n, h.sandwich.trace.element);
    CHECK(rho >= 1.0 / std::sqrt(static_cast<double>(n)) - 1e-12);
  }
  const TyuremskikhResult g = tyuremskikh_witness(l2, chain, SequenceSpec::geometric(Rational(1, 4)), 15);
  CHECK(g.certified);
  for (std::size_t n = 1; n <= 15; ++n) {
    CHECK(distance(l2, chain, n, g.sandwich.trace.element) >= std::ldexp(1.0, -static_cast<int>(n)) - 1e-15);
  }
  // e_1 = 4, e_2 = 2, e_3 = 1: sqrt(e) < e until e <= 1.
  const TyuremskikhResult big =
      tyuremskikh_witness(l2, chain, SequenceSpec::geometric(Rational(1, 2), Rational(8)), 12);
  CHECK(big.certified_from == 3);
  CHECK(big.certified);
}

TEST_CASE("setchain_distance") {
  const FNormSpec l2 = FNormSpec::lp(2);
  const ChainSpec base = ChainSpec::linear(2, 0);
  const SetChainSpec lines = LineAugmentedChain{base};
  CHECK(setchain_distance(l2, lines, 3, Vector{{1, 1.0}, {4, -2.0}}) == 0.0);
  CHECK(setchain_distance(l2, lines, 3, Vector::unit(5, 5.0)) == 0.0);
  CHECK(setchain_distance(l2, lines, 3, Vector{{5, 3.0}, {6, 4.0}}) == doctest::Approx(3.0));
  CHECK(setchain_distance(l2, lines, 1, Vector{{1, 3.0}, {3, 4.0}}) == doctest::Approx(4.0));
  CHECK_THROWS_AS(setchain_distance(FNormSpec::lp(1), lines, 2, Vector::unit(1)), Unsupported);
  CHECK_THROWS_AS(setchain_distance(l2, lines, 0, Vector::unit(1)), InvalidSpec);

  std::mt19937_64 rng(42);
  const ChainSpec chain = ChainSpec::linear();
  const SetChainSpec unit_lines = LineAugmentedChain{chain};
  for (int trial = 0; trial < 200; ++trial) {
    const Vector x = random_vector(rng, 5);
    for (std::size_t n = 1; n <= 4; ++n) {
      double oracle = n == 1 ? l2.eval(x) : distance_bruteforce(l2, chain, n - 1, x);
      for (Index j = chain.cut(n - 1) + 1; j <= chain.cut(n); ++j) oracle = std::min(oracle, line_distance_oracle(l2, x, j));
      CHECK(setchain_distance(l2, unit_lines, n, x) == doctest::Approx(oracle).epsilon(1e-6));
    }
  }
}

TEST_CASE("ball chains cannot keep distances away from zero") {
  const FNormSpec l2 = FNormSpec::lp(2);
  const SetChainSpec balls = BallChain{};
  CHECK(setchain_distance(l2, balls, 1, Vector::unit(1, 3.0)) == doctest::Approx(2.0));
  CHECK(setchain_distance(l2, balls, 3, Vector::unit(1, 3.0)) == 0.0);
  CHECK_THROWS_AS(setchain_distance(FNormSpec::composite(), balls, 1, Vector::unit(1)), Unsupported);
  // Whatever element is built, dist(x, W_n) = 0 once n >= ||x||, while e_n / 3 > 0.
  const SandwichResult s = construct_sandwich(l2, ChainSpec::linear(), SequenceSpec::harmonic(), 50, 3);
  const double norm = l2.eval(s.trace.element);
  const std::size_t n = static_cast<std::size_t>(std::ceil(norm));
  CHECK(setchain_distance(l2, balls, n, s.trace.element) == 0.0);
  CHECK(setchain_distance(l2, balls, n, s.trace.element) < 1.0 / (3.0 * n));
}
