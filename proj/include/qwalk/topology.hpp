#pragma once

// Edge states of the two-domain walk and the sweeps that probe them.
//
// The two-domain bidirectional walk with coin R(x) = exp(i theta(x) sigma_x)
// (AngleConvention::Full), theta(x) = theta_minus < 0 for x < 0 and
// theta_plus > 0 for x >= 0, has two exact eigenstates localized at x = 0:
//
//   phi_e(omega) = (1/N) sum_x e^{i omega x} |x> (x) (a_x |1> + i b_x |0>)
//   a_x = r(x)^x,  b_x = r(x)^(x+1),  r = (1 - sin theta) / cos theta
//   N^2 = 1/sin(theta_plus) - 1/sin(theta_minus)
//
// with eigenvalue +1 for omega = 0 and -1 for omega = pi.
//
// Overlap probability. For theta_minus = -theta_plus the closed form
//   P0 = [2 tan(theta) (1 - sin theta) / cos theta]^2
// equals (sum_omega |<phi_e(omega)|psi>|^2)^2, which is also the population of
// the window {-1, 0} carried by the projection of psi onto the edge pair, when
// psi is the interface slice of the pair, |0> (x) (|1> + i r|0>)/sqrt(1+r^2)
// (interface_state). At theta = pi/4 that slice is exactly PhiCe. Neither
// |sum_omega <phi_e|psi>|^2 nor sum_omega |<phi_e|psi>|^2 alone reproduces P0.

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "qwalk/distribution.hpp"
#include "qwalk/walk.hpp"

namespace qwalk::topology {

enum class EdgeBranch { Zero, Pi };

inline constexpr int kDefaultWindow = 30;
inline constexpr double kTailTolerance = 1e-12;

struct EdgeStateSpec {
  EdgeBranch omega = EdgeBranch::Zero;
  double theta_plus = 0.0;
  double theta_minus = 0.0;
  /// Half-width of the constructed window. nullopt starts at kDefaultWindow
  /// and widens until the neglected tail is below kTailTolerance.
  std::optional<int> window;
};

struct EdgeState {
  WalkState state;
  int window = 0;
  /// Probability mass outside |x| <= window before renormalization.
  double truncation_deficit = 0.0;
};

/// Two-domain profile with the full-angle coin used throughout this module.
CoinProfile edge_profile(double theta_minus, double theta_plus);

/// (1 - sin theta) / cos theta, evaluated as cos theta / (1 + sin theta).
double decay_ratio(double theta);

/// N from the closed form.
double edge_normalization(double theta_plus, double theta_minus);

/// Tail mass outside |x| <= window, as a fraction of the full state.
double edge_tail_mass(double theta_plus, double theta_minus, int window);

/// Smallest window with tail mass below kTailTolerance.
int required_window(double theta_plus, double theta_minus);

/// Throws if theta_minus >= 0, theta_plus <= 0, theta_plus > pi/2,
/// theta_minus <= -pi/2, or an explicit window leaves too much tail.
EdgeState edge_state(const EdgeStateSpec& spec);

struct Stationarity {
  double defect;      ///< 1 - |<phi|U|phi>|
  double eigenphase;  ///< arg <phi|U|phi>
};

/// One-step stationarity of an arbitrary normalized state.
Stationarity stationarity(const WalkState& state, const CoinProfile& profile,
                          WalkKind kind = WalkKind::Bidirectional);

/// Stationarity of the edge state under one bidirectional step of its own
/// two-domain profile.
Stationarity stationarity(const EdgeStateSpec& spec);

double stationarity_defect(const EdgeStateSpec& spec);

/// Closed-form P0 for theta_minus = -theta_plus, 0 <= theta_plus < pi/2.
double overlap_p0(double theta_plus);

/// |0> (x) (|1> + i r(theta_plus)|0>) / sqrt(1 + r^2).
WalkState interface_state(double theta_plus);

/// <phi_e(0)|psi> and <phi_e(pi)|psi>.
std::array<Complex, 2> edge_pair_overlaps(const WalkState& psi,
                                          double theta_plus,
                                          double theta_minus);

struct OverlapReadings {
  double square_of_sum;           ///< |sum_omega <phi_e|psi>|^2
  double sum_of_squares;          ///< sum_omega |<phi_e|psi>|^2
  double squared_sum_of_squares;  ///< (sum_omega |<phi_e|psi>|^2)^2
  double window_projection;       ///< {-1,0} population of the pair projection
};

OverlapReadings overlap_readings(const WalkState& psi, double theta_plus,
                                 double theta_minus);

/// Probability summed over `window` (default {-1, 0}).
double p_edge(const Distribution& dist,
              const std::vector<int>& window = {-1, 0});

enum class SweepMode {
  /// theta_plus = fixed, theta_minus = grid value
  FixPlusVaryMinus,
  /// theta_plus = grid value, theta_minus = -theta_plus
  Antisymmetric,
};

enum class SweepInitial { PhiCo, PhiCe, Interface };

struct SweepPlan {
  SweepMode mode = SweepMode::FixPlusVaryMinus;
  double fixed = 0.0;
  std::vector<double> grid;
  std::vector<int> steps;
  SweepInitial initial = SweepInitial::PhiCe;

  /// Grid strictly monotone, steps positive.
  void validate() const;
};

struct SweepRow {
  double theta_swept;
  int steps;
  double p_edge;
};

/// (theta_minus, theta_plus) for a grid value under the plan's mode.
std::pair<double, double> sweep_angles(const SweepPlan& plan, double swept);

/// Initial state for a grid point; Interface uses the point's theta_plus.
WalkState sweep_initial_state(const SweepPlan& plan, double theta_plus);

/// Bidirectional-coordinate distribution after `t` steps of the two-domain
/// walk from `initial`.
using SweepEvaluator = std::function<Distribution(
    const CoinProfile& profile, const WalkState& initial, int t)>;

Distribution ideal_evaluator(const CoinProfile& profile,
                             const WalkState& initial, int t);

/// Rows ordered by (grid order, steps order). Grid points run concurrently on
/// up to `threads` workers (0 = hardware concurrency); output order does not
/// depend on completion order.
std::vector<SweepRow> run_sweep(const SweepPlan& plan,
                                const SweepEvaluator& evaluate = ideal_evaluator,
                                unsigned threads = 0);

}  // namespace qwalk::topology
