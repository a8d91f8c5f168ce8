#pragma once

#include "lethargy/chain.hpp"
#include "lethargy/fnorm.hpp"
#include "lethargy/seqtools.hpp"
#include "lethargy/sequence.hpp"
#include "lethargy/vector.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace lethargy {

/// One level j of an inductive construction: q_j = t_j v_j - z_j.
struct LevelRecord {
  std::size_t level = 0;
  double target = 0.0;     // e_j
  double t = 0.0;          // t_j
  double bracket = 1.0;    // upper end s_j of the bisection bracket for t_j
  Vector q;                // q_j
  double q_norm = 0.0;     // ||q_j||
  double q_bound = 0.0;    // sum_{l>=j} 2^(l-j)(e_l + delta_l)
  double achieved = 0.0;   // dist(w, V_j)
};

struct SandwichInfo {
  RescaleResult rescale;
  std::size_t k_o = 1;
  std::size_t n_o = 1;
};

struct ConstructionTrace {
  /// w_N, the truncated stand-in for the limit element.
  Vector element;
  /// Chain whose levels the records refer to (a subchain for sandwich runs).
  ChainSpec chain = ChainSpec::linear();
  std::vector<LevelRecord> levels;
  std::optional<DeltaSchedule> deltas;
  /// Certified bound on the contribution of levels beyond the depth.
  double tail_bound = 0.0;
  std::size_t depth = 0;
  std::optional<SandwichInfo> sandwich;
  std::vector<std::string> notes;
};

/// Default absolute tolerance on distance values for a norm variant.
double default_tolerance(const FNormSpec& spec);

/// v_n in V_{n+1} \ V_n with ||v_n|| = dist(v_n, V_n) = target, supported on
/// the fresh coordinates of level n (the first one when that suffices).
/// Throws InfeasibleTarget when target >= sup_t ||t g|| for every fresh
/// generator g.
Vector select_vn(const FNormSpec& spec, const ChainSpec& chain, std::size_t n, double target, double delta);

enum class NetMode { kCoordinate, kGrid };

/// Finite Z_n in V_n such that every g = t v (t in [0,1]) has some z with
/// ||g - z|| <= dist(g, V_n) + delta. Coordinate mode returns {0}; grid mode
/// uses the truncations of t_i v on a grid of `grid_points` values, refined
/// until `verify_net` accepts it.
std::vector<Vector> net_zn(const FNormSpec& spec, const ChainSpec& chain, std::size_t n, const Vector& v,
                           double delta, NetMode mode = NetMode::kCoordinate, std::size_t grid_points = 11);

/// Samples `samples` equispaced t in [0,1] and checks the net property.
bool verify_net(const FNormSpec& spec, const ChainSpec& chain, std::size_t n, const Vector& v,
                const std::vector<Vector>& net, double delta, std::size_t samples = 1000);

/// Smallest t in [0, upper] with f(t) = target for a continuous
/// nondecreasing f, by bisection. Requires f(0) <= target <= f(upper) and
/// returns t with |f(t) - target| <= tol; on flat segments the left end.
double ivt_smallest_t(const std::function<double(double)>& f, double target, double upper, double tol);

/// Backward induction building w_N with dist(w_N, V_j) = e_j for all j <= N.
ConstructionTrace construct_wn(const FNormSpec& spec, const ChainSpec& chain, const SequenceSpec& seq,
                               const DeltaSchedule& deltas, std::size_t depth, double tol = 0.0);

/// Exact-distance element at truncation depth N for sequences satisfying the
/// strict summability condition. depth == 0 picks the smallest N whose tail
/// sum is at most eps_tail.
ConstructionTrace construct_exact(const FNormSpec& spec, const ChainSpec& chain, const SequenceSpec& seq,
                                  std::size_t depth, std::optional<double> eps_tail = std::nullopt, double tol = 0.0);

/// l_2 closed form: coefficient sqrt(e_n^2 - e_{n+1}^2) on the first fresh
/// coordinate of level n for n < N and e_N for n = N.
ConstructionTrace construct_hilbert_exact(const ChainSpec& chain, const SequenceSpec& seq, std::size_t depth);

struct SandwichResult {
  ConstructionTrace trace;
  std::size_t n_o = 1;
  /// Levels n_o..depth of the original chain carry the sandwich bounds.
  std::size_t depth = 0;
  unsigned factor = 3;
};

/// Element with e_n/c <= dist(x, V_n) <= c e_n for n_o <= n <= N.
/// c = 3 uses the inductive construction on the checkpoint subchain;
/// c = 2 is available for l_2 only and uses the closed form.
SandwichResult construct_sandwich(const FNormSpec& spec, const ChainSpec& chain, const SequenceSpec& seq,
                                  std::size_t depth, unsigned factor = 3);

struct RatioRow {
  std::size_t n = 0;
  double e = 0.0;
  double rho = 0.0;
  double ratio = 0.0;        // rho / e
  double lower_bound = 0.0;  // e^-1/2 / 3
  bool checkpoint = false;
};

struct ShapiroResult {
  SandwichResult sandwich;
  std::vector<RatioRow> rows;
};

/// Sandwich element for sqrt(e_n); its ratio rho_n/e_n grows like e_n^-1/2.
ShapiroResult shapiro_witness(const FNormSpec& spec, const ChainSpec& chain, const SequenceSpec& seq,
                              std::size_t depth);

struct TyuremskikhResult {
  SandwichResult sandwich;
  /// First level from which rho_n >= e_n is certified (also needs e_n <= 1).
  std::size_t certified_from = 1;
  bool certified = false;
};

/// Sandwich element for 3 sqrt(e_n), so that rho_n >= sqrt(e_n) >= e_n.
TyuremskikhResult tyuremskikh_witness(const FNormSpec& spec, const ChainSpec& chain, const SequenceSpec& seq,
                                      std::size_t depth);

/// W_n = V_{n-1} united with the coordinate lines t b_j, m_{n-1} < j <= m_n.
struct LineAugmentedChain {
  ChainSpec base;
};

/// W_n = { x : ||x|| <= n }. Not a valid set chain: the union is everything.
struct BallChain {};

using SetChainSpec = std::variant<LineAugmentedChain, BallChain>;

/// dist(x, W_n). Line-augmented chains need l_2; ball chains any homogeneous norm.
double setchain_distance(const FNormSpec& spec, const SetChainSpec& setchain, std::size_t n, const Vector& x);

}  // namespace lethargy
