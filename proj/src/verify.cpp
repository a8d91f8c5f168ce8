#include "lethargy/verify.hpp"

#include "lethargy/errors.hpp"
#include "lethargy/seqtools.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lethargy {

const char* to_string(ReportMode mode) noexcept {
  switch (mode) {
    case ReportMode::kExact: return "exact";
    case ReportMode::kSandwich: return "sandwich";
    case ReportMode::kShapiro: return "shapiro";
    case ReportMode::kTyuremskikh: return "tyuremskikh";
    case ReportMode::kSetchain: return "setchain";
  }
  return "unknown";
}

const char* to_string(ReportStatus status) noexcept {
  switch (status) {
    case ReportStatus::kPass: return "PASS";
    case ReportStatus::kFail: return "FAIL";
    case ReportStatus::kExpectedFail: return "EXPECTED-FAIL";
  }
  return "unknown";
}

const char* to_string(DvTrend trend) noexcept {
  return trend == DvTrend::kToZero ? "to-zero" : "bounded-away";
}

std::size_t LethargyReport::failures() const noexcept {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const ReportRow& r) { return !r.pass; }));
}

ReportStatus LethargyReport::status() const noexcept {
  const std::size_t failed = failures();
  if (expected_failure) return failed > 0 ? ReportStatus::kExpectedFail : ReportStatus::kFail;
  return failed == 0 && !rows.empty() ? ReportStatus::kPass : ReportStatus::kFail;
}

LethargyReport verify_exact(const ConstructionTrace& trace, const FNormSpec& spec, const ChainSpec& chain,
                            const SequenceSpec& seq, double tol) {
  LethargyReport report;
  report.mode = ReportMode::kExact;
  report.depth = trace.depth;
  report.tol = tol > 0.0 ? tol : 10.0 * default_tolerance(spec);
  for (std::size_t n = 1; n <= trace.depth; ++n) {
    ReportRow row;
    row.n = n;
    row.e = seq.value(n);
    row.rho = distance(spec, chain, n, trace.element);
    row.lower = row.e;
    row.upper = row.e;
    row.pass = std::abs(row.rho - row.e) <= report.tol;
    report.rows.push_back(row);
  }
  report.notes = trace.notes;
  return report;
}

LethargyReport verify_sandwich(const SandwichResult& result, const FNormSpec& spec, const ChainSpec& chain,
                               const SequenceSpec& seq, double tol) {
  LethargyReport report;
  report.mode = ReportMode::kSandwich;
  report.depth = result.depth;
  report.n_o = result.n_o;
  report.factor = result.factor;
  report.tol = tol > 0.0 ? tol : 10.0 * default_tolerance(spec);
  const double c = static_cast<double>(result.factor);

  const RescaleResult checkpoints = rescale_until(seq, result.factor, result.depth);
  for (std::size_t n = result.n_o; n <= result.depth; ++n) {
    ReportRow row;
    row.n = n;
    row.e = seq.value(n);
    row.rho = distance(spec, chain, n, result.trace.element);
    row.lower = row.e / c;
    row.upper = c * row.e;
    row.pass = row.rho >= row.lower - report.tol && row.rho <= row.upper + report.tol;
    const auto it = std::find(checkpoints.n.begin(), checkpoints.n.end(), n);
    if (it != checkpoints.n.end()) {
      row.checkpoint = true;
      row.checkpoint_value = checkpoints.f[static_cast<std::size_t>(it - checkpoints.n.begin())];
      row.pass = row.pass && std::abs(row.rho - *row.checkpoint_value) <= report.tol;
    }
    report.rows.push_back(row);
  }
  report.notes = result.trace.notes;
  return report;
}

LethargyReport verify_setchain(const Vector& element, const FNormSpec& spec, const SetChainSpec& setchain,
                               const SequenceSpec& seq, std::size_t n_o, std::size_t depth, double tol) {
  LethargyReport report;
  report.mode = ReportMode::kSetchain;
  report.depth = depth;
  report.n_o = n_o;
  report.factor = 3;
  report.tol = tol > 0.0 ? tol : 10.0 * default_tolerance(spec);
  report.expected_failure = std::holds_alternative<BallChain>(setchain);
  if (report.expected_failure) {
    report.notes.push_back("balls of radius n exhaust the space, so they do not form a set chain");
  }
  const Rational m = max_consecutive_ratio(seq, depth + 1);
  report.ratio_bound = to_double(m);
  for (std::size_t n = n_o; n <= depth; ++n) {
    ReportRow row;
    row.n = n;
    row.e = seq.value(n);
    row.rho = setchain_distance(spec, setchain, n, element);
    row.lower = row.e / 3.0;
    row.upper = n == 1 ? std::numeric_limits<double>::infinity() : 3.0 * seq.value(n - 1);
    row.upper_alt = 3.0 * *report.ratio_bound * row.e;
    row.pass = row.rho >= row.lower - report.tol && row.rho <= row.upper + report.tol &&
               row.rho <= *row.upper_alt + report.tol;
    report.rows.push_back(row);
  }
  return report;
}

EquivalenceReport equivalence_dv_test(const FNormSpec& first, const FNormSpec& second, const ChainSpec& chain,
                                      std::size_t horizon) {
  if (first.bounded() != second.bounded()) {
    throw InvalidSpec("a bounded and an unbounded F-norm are not equivalent: " + first.describe() + " vs " +
                      second.describe());
  }
  horizon = std::max<std::size_t>(horizon, 4);
  EquivalenceReport out;
  out.first = dv_infimum(first, chain, horizon);
  out.second = dv_infimum(second, chain, horizon);
  auto trend = [&](const FNormSpec& spec, const DvInfimum& full) {
    if (full.value.is_infinite()) return DvTrend::kBoundedAway;
    const DvInfimum half = dv_infimum(spec, chain, horizon / 2);
    // Still halving over the second half of the horizon: heading to zero.
    return full.value.value() * 2 < half.value.value() ? DvTrend::kToZero : DvTrend::kBoundedAway;
  };
  out.first_trend = trend(first, out.first);
  out.second_trend = trend(second, out.second);
  out.agree = out.first_trend == out.second_trend;
  return out;
}

}  // namespace lethargy
