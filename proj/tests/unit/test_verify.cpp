#include "doctest.h"

#include "lethargy/constructor.hpp"
#include "lethargy/errors.hpp"
#include "lethargy/verify.hpp"

#include <cmath>

using namespace lethargy;

TEST_CASE("verify_exact passes on constructed elements and flags perturbations") {
  const FNormSpec l2 = FNormSpec::lp(2);
  const ChainSpec chain = ChainSpec::linear();
  const SequenceSpec seq = SequenceSpec::geometric(Rational(1, 4));
  ConstructionTrace trace = construct_exact(l2, chain, seq, 10);
  const LethargyReport ok = verify_exact(trace, l2, chain, seq);
  CHECK(ok.status() == ReportStatus::kPass);
  CHECK(ok.tol == doctest::Approx(1e-11));
  CHECK(ok.rows.size() == 10);

  // Coordinate 5 is seen by levels 1..4 only.
  trace.element.set(5, trace.element[5] + 1e-3);
  const LethargyReport bad = verify_exact(trace, l2, chain, seq);
  CHECK(bad.status() == ReportStatus::kFail);
  for (const ReportRow& row : bad.rows) CHECK(row.pass == (row.n >= 5));

  const ConstructionTrace hilbert = construct_hilbert_exact(chain, SequenceSpec::harmonic(), 100);
  CHECK(verify_exact(hilbert, l2, chain, SequenceSpec::harmonic(), 1e-12).ok());
}

TEST_CASE("verify_sandwich recomputes checkpoints") {
  const FNormSpec l2 = FNormSpec::lp(2);
  const ChainSpec chain = ChainSpec::linear();
  const SequenceSpec h = SequenceSpec::harmonic();

  const SandwichResult three = construct_sandwich(l2, chain, h, 200, 3);
  const LethargyReport r3 = verify_sandwich(three, l2, chain, h, 1e-10);
  CHECK(r3.status() == ReportStatus::kPass);
  std::size_t level = 1;
  double f = 1.0;
  for (const ReportRow& row : r3.rows) {
    if (row.n == level) {
      CHECK(row.checkpoint);
      REQUIRE(row.checkpoint_value);
      CHECK(*row.checkpoint_value == doctest::Approx(f));
      level *= 3;
      f /= 3;
    } else {
      CHECK_FALSE(row.checkpoint);
    }
  }

  const SandwichResult two = construct_sandwich(l2, chain, h, 200, 2);
  const LethargyReport r2 = verify_sandwich(two, l2, chain, h, 1e-10);
  CHECK(r2.ok());
  CHECK(r2.factor == 2);
  std::size_t seen = 0;
  for (const ReportRow& row : r2.rows) {
    const bool power_of_two = (row.n & (row.n - 1)) == 0;
    CHECK(row.checkpoint == power_of_two);
    if (row.checkpoint) {
      CHECK(*row.checkpoint_value == 1.0 / static_cast<double>(row.n));
      ++seen;
    }
  }
  CHECK(seen == 8);

  SandwichResult zero = three;
  zero.trace.element = Vector();
  const LethargyReport r0 = verify_sandwich(zero, l2, chain, h);
  CHECK(r0.status() == ReportStatus::kFail);
  CHECK(r0.failures() == r0.rows.size());
}

TEST_CASE("verify_setchain with lines, the ratio bound, and balls") {
  const FNormSpec l2 = FNormSpec::lp(2);
  const ChainSpec chain = ChainSpec::linear();
  const SequenceSpec h = SequenceSpec::harmonic();
  const SandwichResult s = construct_sandwich(l2, chain, h, 100, 3);

  const LethargyReport lines = verify_setchain(s.trace.element, l2, LineAugmentedChain{chain}, h, s.n_o, 100);
  CHECK(lines.status() == ReportStatus::kPass);
  REQUIRE(lines.ratio_bound);
  CHECK(*lines.ratio_bound == 2.0);
  for (const ReportRow& row : lines.rows) {
    REQUIRE(row.upper_alt);
    CHECK(*row.upper_alt == doctest::Approx(6.0 * row.e));
    CHECK(row.rho <= *row.upper_alt);
    CHECK(row.rho >= distance(l2, chain, row.n, s.trace.element) - 1e-15);
  }

  const LethargyReport balls = verify_setchain(s.trace.element, l2, BallChain{}, h, s.n_o, 100);
  CHECK(balls.expected_failure);
  CHECK(balls.status() == ReportStatus::kExpectedFail);
  CHECK(balls.ok());
  CHECK(balls.failures() > 0);
}

TEST_CASE("report status logic") {
  LethargyReport report;
  CHECK(report.status() == ReportStatus::kFail);  // no rows
  report.rows.push_back(ReportRow{1, 1.0, 1.0, 1.0, 1.0, std::nullopt, false, std::nullopt, true});
  CHECK(report.status() == ReportStatus::kPass);
  report.expected_failure = true;
  CHECK(report.status() == ReportStatus::kFail);  // the expected failure did not show up
  report.rows.front().pass = false;
  CHECK(report.status() == ReportStatus::kExpectedFail);
  CHECK(std::string(to_string(ReportStatus::kExpectedFail)) == "EXPECTED-FAIL");
}

TEST_CASE("equivalence_dv_test") {
  const ChainSpec shifted = ChainSpec::explicit_cuts({0});
  const EquivalenceReport composite =
      equivalence_dv_test(FNormSpec::composite(), FNormSpec::composite(Rational(1, 2), Rational(3)), shifted, 40);
  CHECK(composite.agree);
  CHECK(composite.first_trend == DvTrend::kToZero);
  CHECK(composite.second_trend == DvTrend::kToZero);
  CHECK(composite.second.value == Extended(3 * pow(Rational(1, 2), 40)));

  const EquivalenceReport hom = equivalence_dv_test(FNormSpec::lp(2), FNormSpec::lp(1), ChainSpec::linear(), 40);
  CHECK(hom.agree);
  CHECK(hom.first.value.is_infinite());
  CHECK(hom.second_trend == DvTrend::kBoundedAway);

  const FNormSpec family = FNormSpec::seminorms({Seminorm{{1, 0, 1}, 1.0}});
  const FNormSpec family2 = FNormSpec::seminorms({Seminorm{{1, 0, 1}, 0.5}, Seminorm{{1, 0, 2}, 1.0}});
  const EquivalenceReport semi = equivalence_dv_test(family, family2, ChainSpec::linear(), 20);
  CHECK(semi.first_trend == DvTrend::kBoundedAway);
  CHECK(semi.agree);

  CHECK_THROWS_AS(equivalence_dv_test(FNormSpec::composite(), FNormSpec::lp(2), shifted, 20), InvalidSpec);
}
