#pragma once

#include "lethargy/rational.hpp"
#include "lethargy/sequence.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lethargy {

struct SequenceReport {
  bool ok = true;
  /// First index where positivity or strict decrease fails.
  std::optional<std::size_t> failing_index;
  std::string message;
  /// How values beyond the horizon are controlled.
  std::string tail_certificate;
};

/// Positivity, strict decrease up to `horizon`, and a tail certificate.
SequenceReport seq_validate(const SequenceSpec& seq, std::size_t horizon);

/// Throws PreconditionError when seq_validate fails.
void require_valid(const SequenceSpec& seq, std::size_t horizon);

/// e_n >= factor * e_{n+1} for all n <= horizon, in exact arithmetic.
bool check_rapid(const SequenceSpec& seq, unsigned factor, std::size_t horizon);

/// Smallest (e_n / e_{n+1}) - 2 over n <= horizon and the geometric tail.
Rational growth_margin(const SequenceSpec& seq, std::size_t horizon);

struct BSeries {
  /// b_n = sum_{j >= n} 2^(j-n) e_j.
  Rational value;
  bool closed_form = true;
  /// Upper bound on the part of b_n not summed explicitly (0 in closed form).
  Rational remainder_bound{0};
  /// eps with e_j >= (2 + eps) e_{j+1}.
  Rational epsilon;
  /// Largest observed b_{m+1} / b_m, m <= horizon; must not exceed 1/(2+eps).
  Rational max_ratio;
  /// Upper bound on sum_{m >= 1} b_m.
  Rational sum_bound;
};

/// Throws PreconditionError(kRatioTest) when no eps > 0 exists or when the
/// ratio bound b_{m+1}/b_m <= 1/(2+eps) fails.
BSeries b_series(const SequenceSpec& seq, std::size_t n, std::size_t horizon);

enum class LemmaMode { kThree, kTwo };

/// e_n - (sum_{j=n+1}^{n+m} 2^(j-n-1) e_j + 2^m e_{n+m}).
Rational lemma_three_slack(const SequenceSpec& seq, std::size_t n, std::size_t m);
/// e_n - sum_{j>n} e_j; -infinity is reported as nullopt (divergent tail).
std::optional<Rational> lemma_two_slack(const SequenceSpec& seq, std::size_t n);

struct LemmaCheck {
  bool holds = true;
  Rational min_slack;
  std::size_t worst_n = 1;
  std::size_t worst_m = 0;
};

/// Mode three: all n, m <= horizon. Mode two: all n <= horizon.
LemmaCheck lemma_ineq_check(const SequenceSpec& seq, LemmaMode mode, std::size_t horizon);

struct RescaleResult {
  std::vector<Rational> f_exact;
  std::vector<double> f;
  std::vector<std::size_t> n;
  /// rapid[k] is true when f_{k+1} = e_{n_k + 1} (rapid branch).
  std::vector<bool> rapid;
  unsigned factor = 3;
};

/// Checkpoint construction: f_1 = e_1, n_1 = 1; f_{k+1} = e_{n_k+1} when
/// e_{n_k+1} <= f_k / c, otherwise f_{k+1} = f_k / c with
/// n_{k+1} = max{ n >= n_k + 1 : f_k <= c e_n }. Exact arithmetic.
RescaleResult rescale(const SequenceSpec& seq, unsigned factor, std::size_t checkpoints);

/// Same, continuing until n_K >= min_level.
RescaleResult rescale_until(const SequenceSpec& seq, unsigned factor, std::size_t min_level);

inline constexpr std::size_t kRescaleScanCap = 10'000'000;

struct DeltaSchedule {
  std::size_t horizon = 0;
  /// delta_1..delta_H; delta_j = delta_H 8^-(j-H) beyond the horizon.
  std::vector<Rational> deltas;
  /// sigma_n = min{e_{n-1}, d_{n,V}} - sum_{j>=n} 2^(j-n) e_j.
  std::vector<Rational> slacks;
  /// T_n = sum_{j>=n} 2^(j-n) (e_j + delta_j).
  std::vector<Rational> targets;
  /// min{e_{n-1}, d_{n,V}}.
  std::vector<Extended> bounds;
  /// bound_n - T_n; each at least slacks[n]/2 when bound_n is finite.
  std::vector<Extended> margins;
  bool verified = false;

  const Rational& delta(std::size_t j) const { return deltas.at(j - 1); }
  const Rational& target(std::size_t n) const { return targets.at(n - 1); }
};

/// Selects delta_n so that sum_{j>=n} 2^(j-n)(e_j + delta_j) < min{e_{n-1}, d_{n,V}}
/// for every n <= horizon (e_0 = +inf), then re-verifies it exactly.
/// `dnv[n-1]` is d_{n,V}. Throws PreconditionError(kSummability) naming n when
/// the undisturbed sum already fails the strict inequality.
DeltaSchedule delta_select(const SequenceSpec& seq, std::span<const Extended> dnv, std::size_t horizon);

/// e_{n,k} = e_n + 1/(k 3^n). Requires e_n >= sum_{j>n} e_j for n <= horizon
/// and verifies the strict inequality for the perturbed sequence.
SequenceSpec perturb_borodin(const SequenceSpec& seq, std::size_t k, std::size_t horizon = 64);

/// Smallest ratio bound M >= e_n / e_{n+1} over n <= horizon.
Rational max_consecutive_ratio(const SequenceSpec& seq, std::size_t horizon);

/// Smallest N with sum_{j >= N} e_j <= eps (certified), or nullopt within cap.
std::optional<std::size_t> depth_for_tail(const SequenceSpec& seq, const Rational& eps, std::size_t cap = 100000);

}  // namespace lethargy
