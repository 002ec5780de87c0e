#pragma once

// Ideal coined quantum walk on the integer line.
//
// A state is a table of coin amplitudes (c0, c1) over a contiguous window of
// positions. One step applies the position-dependent coin and then the
// coin-conditioned shift (U = S R). The window grows with the light cone and
// is never truncated.

#include <array>
#include <complex>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "qwalk/distribution.hpp"

namespace qwalk {

using Complex = std::complex<double>;

/// Coin amplitudes at one position: [0] for coin |0>, [1] for coin |1>.
using CoinVector = std::array<Complex, 2>;

/// 2x2 complex matrix in the (|0>, |1>) coin basis, row-major.
struct CoinMatrix {
  std::array<std::array<Complex, 2>, 2> m{};

  CoinVector operator*(const CoinVector& v) const {
    return {m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]};
  }
  CoinMatrix adjoint() const;
};

/// exp(i theta n.sigma / 2) with n = (cos axis, sin axis, 0).
CoinMatrix coin_matrix(double theta, double axis = 0.0);

enum class WalkKind {
  /// coin |0> stays, coin |1> moves x -> x+1
  Unidirectional,
  /// coin |0> moves x -> x-1, coin |1> moves x -> x+1
  Bidirectional,
};

/// How a profile angle becomes a coin rotation.
///   Half: R(x) = exp(i theta(x) sigma/2)   (the rotation-angle reading)
///   Full: R(x) = exp(i theta(x) sigma)     (the reading under which the
///         two-domain edge states are exact eigenstates; see topology.hpp)
enum class AngleConvention { Half, Full };

class CoinProfile {
 public:
  enum class Kind { Homogeneous, TwoDomain, PerStepTable };
  /// (step, position) -> angle; steps are 1-based.
  using Table = std::map<std::pair<int, int>, double>;

  static CoinProfile homogeneous(double theta,
                                 AngleConvention conv = AngleConvention::Half,
                                 double axis = 0.0);
  /// theta_minus for x < boundary, theta_plus for x >= boundary.
  static CoinProfile two_domain(double theta_minus, double theta_plus,
                                int boundary = 0,
                                AngleConvention conv = AngleConvention::Half,
                                double axis = 0.0);
  static CoinProfile per_step_table(Table table,
                                    AngleConvention conv = AngleConvention::Half,
                                    double axis = 0.0);

  Kind kind() const { return kind_; }
  double theta_minus() const { return theta_minus_; }
  double theta_plus() const { return theta_plus_; }
  int boundary() const { return boundary_; }
  double axis() const { return axis_; }
  AngleConvention convention() const { return convention_; }
  const Table& table() const { return table_; }

  /// Profile angle at (x, step); nullopt when a table has no entry.
  std::optional<double> angle(int x, int step) const;

  /// Argument to coin_matrix for a profile angle under this convention.
  double rotation_angle(double profile_angle) const {
    return convention_ == AngleConvention::Full ? 2.0 * profile_angle
                                                : profile_angle;
  }

  bool operator==(const CoinProfile&) const = default;

 private:
  Kind kind_ = Kind::Homogeneous;
  double theta_minus_ = 0.0;
  double theta_plus_ = 0.0;
  int boundary_ = 0;
  double axis_ = 0.0;
  AngleConvention convention_ = AngleConvention::Half;
  Table table_;
};

class WalkState {
 public:
  WalkState() = default;
  WalkState(int offset, std::vector<CoinVector> amps);

  /// |x> (x) (c0|0> + c1|1>), not normalized.
  static WalkState localized(int x, const CoinVector& coin);

  int offset() const { return offset_; }
  int begin_x() const { return offset_; }
  int end_x() const { return offset_ + static_cast<int>(amps_.size()); }
  std::size_t size() const { return amps_.size(); }
  const std::vector<CoinVector>& amps() const { return amps_; }

  /// Amplitudes at x; zero outside the window.
  CoinVector at(int x) const;

  double norm_squared() const;
  WalkState normalized() const;

  /// p(x) = |a(x,0)|^2 + |a(x,1)|^2.
  Distribution marginal(int step = 0) const;

  WalkState& operator*=(Complex s);
  friend WalkState operator+(const WalkState& a, const WalkState& b);
  friend WalkState operator*(Complex s, WalkState a) { return a *= s; }

 private:
  int offset_ = 0;
  std::vector<CoinVector> amps_;
};

/// <a|b> over the union of windows.
Complex inner(const WalkState& a, const WalkState& b);

/// Largest |amplitude difference| over the union of windows.
double max_abs_diff(const WalkState& a, const WalkState& b);

WalkState apply_coin(const WalkState& state, const CoinProfile& profile,
                     int step);
WalkState apply_shift(const WalkState& state, WalkKind kind);

/// U = S R with the coin of step `step_index` (1-based).
WalkState step(const WalkState& state, const CoinProfile& profile,
               WalkKind kind, int step_index);

/// U^dagger = R^dagger S^dagger; inverts step() with the same arguments.
WalkState step_adjoint(const WalkState& state, const CoinProfile& profile,
                       WalkKind kind, int step_index);

/// States after 0..t steps.
std::vector<WalkState> evolve_states(const WalkState& initial,
                                     const CoinProfile& profile, WalkKind kind,
                                     int t);

/// Position distributions after 0..t steps.
std::vector<Distribution> evolve(const WalkState& initial,
                                 const CoinProfile& profile, WalkKind kind,
                                 int t);

enum class NamedInitial {
  /// |0> (x) [|0> + i(sqrt2-1)|1>] / sqrt(4-2sqrt2), orthogonal to the edge pair
  PhiCo,
  /// |0> (x) [|1> + i(sqrt2-1)|0>] / sqrt(4-2sqrt2), close to the edge pair
  PhiCe,
};

WalkState initial_state(NamedInitial name);

/// Normalized custom state; throws on zero norm.
WalkState initial_state(const WalkState& custom);

/// Offset c in theta_u(x, tau) = theta_b(2x - tau + c). The coin of step tau
/// acts on the state at time tau - 1, whose bidirectional position is
/// 2x - (tau - 1).
inline constexpr int kUniToBiOffset = 1;

/// Bidirectional position of unidirectional position `x_uni` at time t.
inline int uni_to_bi_position(int x_uni, int t) { return 2 * x_uni - t; }

/// Relabels a step-t unidirectional distribution (support within [0, t]) to
/// bidirectional coordinates x_b = 2 x_u - t.
Distribution convert_uni_to_bi(const Distribution& dist, int t);

/// Per-step table driving the unidirectional walk so that, after
/// convert_uni_to_bi, it reproduces the bidirectional walk under `profile`.
/// Covers steps 1..t_max and the reachable positions [0, step-1].
CoinProfile map_profile_bi_to_uni(const CoinProfile& profile, int t_max);

}  // namespace qwalk
