#pragma once

#include "lethargy/fnorm.hpp"
#include "lethargy/rational.hpp"
#include "lethargy/vector.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lethargy {

/// Strictly nested coordinate chain V_n = { x : x_j = 0 for j > m_n }.
///
/// The cut indices are an explicit prefix m_1..m_P followed by the affine rule
/// m_n = slope * n + offset. V_0 is the zero subspace (m_0 = 0).
class ChainSpec {
 public:
  ChainSpec(std::vector<Index> prefix, Index slope, long long offset);

  /// m_n = slope * n + offset.
  static ChainSpec linear(Index slope = 1, long long offset = 0) { return ChainSpec({}, slope, offset); }
  /// Explicit cuts, continued by one fresh coordinate per level.
  static ChainSpec explicit_cuts(std::vector<Index> cuts);

  Index cut(std::size_t n) const;
  /// Number of coordinates in V_{n+1} \ V_n.
  Index fresh_count(std::size_t n) const { return cut(n + 1) - cut(n); }

  /// W_k = V_{levels[k-1]}; `levels` must be strictly increasing.
  ChainSpec subchain(std::span<const std::size_t> levels) const;

  std::string describe() const;

 private:
  std::vector<Index> prefix_;
  Index slope_ = 1;
  long long offset_ = 0;
};

/// dist(x, V_n). Exact (no iteration) for coordinatewise-monotone F-norms.
double distance(const FNormSpec& spec, const ChainSpec& chain, std::size_t n, const Vector& x);

/// Direct minimisation of ||x - v|| over v in V_n (grid scan followed by a
/// pattern search). Independent of the closed form; only for dim V_n <= 4.
/// Returns an upper bound on the true distance.
double distance_bruteforce(const FNormSpec& spec, const ChainSpec& chain, std::size_t n, const Vector& x,
                           std::size_t grid_points = 9);

inline constexpr std::size_t kBruteForceMaxDim = 4;

struct DnvEstimate {
  Extended value;
  /// Set for the seminorm family, whose supremum is only bounded from below.
  bool lower_bound_only = false;
};

/// d_{n,V} = sup { dist(v, V_n) : v in V_{n+1} }.
DnvEstimate dnv_estimate(const FNormSpec& spec, const ChainSpec& chain, std::size_t n);

struct DvInfimum {
  Extended value;
  std::size_t attained_at = 1;
  bool lower_bound_only = false;
};

/// min_{n <= horizon} d_{n,V}; an upper bound on the true infimum d_V.
DvInfimum dv_infimum(const FNormSpec& spec, const ChainSpec& chain, std::size_t horizon);

/// inf over generators b_j of V_{horizon+1} of sup_t ||t b_j||.
Extended r_of_chain(const FNormSpec& spec, const ChainSpec& chain, std::size_t horizon);

struct SeminormLowerBound {
  Rational bound{0};
  std::optional<std::size_t> failing_level;
  std::size_t levels_checked = 0;
};

/// Lower bound d_{n,V} >= 2^-N over n <= horizon, certified by finding, for
/// every n, a generator of V_{n+1} at positive seminorm distance from V_n for
/// one of the first N seminorms.
SeminormLowerBound dv_lower_bound_seminorms(const FNormSpec& family, const ChainSpec& chain, std::size_t depth,
                                            std::size_t horizon);

}  // namespace lethargy
