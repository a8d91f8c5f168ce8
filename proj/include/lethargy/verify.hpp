#pragma once

#include "lethargy/chain.hpp"
#include "lethargy/constructor.hpp"
#include "lethargy/fnorm.hpp"
#include "lethargy/sequence.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace lethargy {

enum class ReportMode { kExact, kSandwich, kShapiro, kTyuremskikh, kSetchain };
enum class ReportStatus { kPass, kFail, kExpectedFail };

const char* to_string(ReportMode mode) noexcept;
const char* to_string(ReportStatus status) noexcept;

struct ReportRow {
  std::size_t n = 0;
  double e = 0.0;
  double rho = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  /// Bound expressed through e_n alone (3 M e_n for set chains).
  std::optional<double> upper_alt;
  bool checkpoint = false;
  /// f_k at a checkpoint, which rho must match.
  std::optional<double> checkpoint_value;
  bool pass = false;
};

struct LethargyReport {
  ReportMode mode = ReportMode::kExact;
  std::vector<ReportRow> rows;
  std::size_t n_o = 1;
  std::size_t depth = 0;
  unsigned factor = 1;
  double tol = 0.0;
  /// The input is a known counterexample: failing rows are the expected outcome.
  bool expected_failure = false;
  std::optional<double> ratio_bound;
  std::vector<std::string> notes;

  std::size_t failures() const noexcept;
  ReportStatus status() const noexcept;
  /// PASS and EXPECTED-FAIL both count as success.
  bool ok() const noexcept { return status() != ReportStatus::kFail; }
};

/// |dist(x, V_n) - e_n| <= tol for 1 <= n <= depth, recomputed from the element.
/// tol == 0 selects ten times the construction tolerance.
LethargyReport verify_exact(const ConstructionTrace& trace, const FNormSpec& spec, const ChainSpec& chain,
                            const SequenceSpec& seq, double tol = 0.0);

/// e_n / c - tol <= dist(x, V_n) <= c e_n + tol for n_o <= n <= depth, and
/// dist(x, V_{n_k}) = f_k at checkpoints, which are recomputed independently.
LethargyReport verify_sandwich(const SandwichResult& result, const FNormSpec& spec, const ChainSpec& chain,
                               const SequenceSpec& seq, double tol = 0.0);

/// e_n / 3 <= dist(x, W_n) <= 3 e_(n-1), plus 3 M e_n when
/// M = max e_n / e_(n+1) is finite. Ball chains report EXPECTED-FAIL.
LethargyReport verify_setchain(const Vector& element, const FNormSpec& spec, const SetChainSpec& setchain,
                               const SequenceSpec& seq, std::size_t n_o, std::size_t depth, double tol = 0.0);

enum class DvTrend { kToZero, kBoundedAway };

const char* to_string(DvTrend trend) noexcept;

struct EquivalenceReport {
  DvInfimum first;
  DvInfimum second;
  DvTrend first_trend = DvTrend::kBoundedAway;
  DvTrend second_trend = DvTrend::kBoundedAway;
  bool agree = false;
};

/// Compares whether d_V vanishes for two F-norms on the same chain. A bounded
/// and an unbounded F-norm are never equivalent and are rejected.
EquivalenceReport equivalence_dv_test(const FNormSpec& first, const FNormSpec& second, const ChainSpec& chain,
                                      std::size_t horizon = 40);

}  // namespace lethargy
