#pragma once

// Qutrit-chain realization of the unidirectional walk.
//
// Qutrit Q_i holds walker position i: |g> means empty, |e> carries coin |1>
// and |f> carries coin |0>. Shift qubit SQ_i sits between Q_i and Q_{i+1}.
// A step is a coin layer of SU(2) gates in {e, f} followed by two SWAP
// sublayers Q_i -> SQ_i and SQ_i -> Q_{i+1}, which move |e> one site right
// and leave |f> in place.
//
// The circuit never creates more than one excitation and damping only removes
// excitations, so the density operator is kept on the basis
//   {vac} U {e_i, f_i : qutrits} U {sq_j : shift qubits}
// of dimension 1 + 2 n + (n - 1).

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "qwalk/distribution.hpp"
#include "qwalk/walk.hpp"

namespace qwalk::chain {

/// Nanoseconds per gate class. Placeholders, not calibrated hardware values.
struct GateDurations {
  double su2_ef = 40.0;
  double swap = 50.0;
  double pi_ge = 40.0;
  bool operator==(const GateDurations&) const = default;
};

struct ChainLayout {
  int n_qutrits = 10;
  GateDurations durations;

  int n_shift_qubits() const { return n_qutrits - 1; }
  int dim() const { return 1 + 2 * n_qutrits + n_shift_qubits(); }

  static constexpr int vacuum() { return 0; }
  int e(int qutrit) const { return 1 + 2 * qutrit; }
  int f(int qutrit) const { return 2 + 2 * qutrit; }
  int sq(int shift_qubit) const { return 1 + 2 * n_qutrits + shift_qubit; }

  /// "vac", "Q3.e", "Q3.f", "SQ2".
  std::string label(int element) const;

  void validate() const;
  bool operator==(const ChainLayout&) const = default;
};

enum class GateKind { PiGE, SU2ef, SwapIn, SwapOut };

const char* to_string(GateKind kind);

struct Gate {
  GateKind kind = GateKind::PiGE;
  /// PiGE/SU2ef/SwapIn: qutrit index. SwapOut: shift qubit index j
  /// (moves SQ_j -> Q_{j+1}).
  int target = 0;
  double theta = 0.0;  ///< SU2ef rotation angle (coin_matrix argument)
  double axis = 0.0;   ///< SU2ef equatorial axis

  bool operator==(const Gate&) const = default;
};

enum class LayerRole { Init, Coin, SwapIn, SwapOut };

const char* to_string(LayerRole role);

struct Layer {
  LayerRole role = LayerRole::Init;
  int step = 0;  ///< walk step the layer belongs to; 0 for initialization
  std::vector<Gate> gates;
  bool operator==(const Layer&) const = default;
};

struct Circuit {
  int steps = 0;
  std::vector<Layer> layers;

  std::size_t gate_count(GateKind kind) const;
  std::size_t layer_count(LayerRole role) const;
  bool operator==(const Circuit&) const = default;
};

/// Chain elements (basis indices) a gate touches.
std::vector<int> gate_elements(const Gate& gate, const ChainLayout& layout);

/// Throws if two gates of one layer share an element or a target is out of
/// range.
void check_layer_disjoint(const Layer& layer, const ChainLayout& layout);

/// Walk initial coin for the chain: the coin 2-vector placed on Q_0.
CoinVector initial_coin(NamedInitial name);

/// SU2ef (theta, axis) taking coin |1> to `coin` up to global phase.
std::pair<double, double> preparation_angles(const CoinVector& coin);

/// Initialization plus, for n = 1..t, a coin layer on Q_0..Q_{n-1} with the
/// unidirectional angles from `uni_profile` at step n, then the SwapIn and
/// SwapOut layers. `uni_profile` is read in unidirectional coordinates; use
/// map_profile_bi_to_uni for a profile given in bidirectional coordinates.
/// Throws "chain too short" when t > n_qutrits - 1.
Circuit compile_walk(int t, const CoinProfile& uni_profile,
                     const CoinVector& initial_coin, const ChainLayout& layout);

inline constexpr double kNoDecay = std::numeric_limits<double>::infinity();

struct NoiseModel {
  double t1_qutrit_e_us = kNoDecay;  ///< e -> g lifetime
  double t1_qutrit_f_us = kNoDecay;  ///< f -> e lifetime
  double t1_shift_qubit_us = kNoDecay;
  double over_rotation = 0.0;  ///< fractional angle error on SU2ef and SWAP
  double swap_error = 0.0;     ///< probability a SWAP leaves its source excited
  double readout_error = 0.0;  ///< probability an excited qutrit reads as |g>

  bool is_ideal() const;
  void validate() const;
  bool operator==(const NoiseModel&) const = default;
};

/// Density operator on the single-excitation basis of a layout.
class ChainState {
 public:
  explicit ChainState(const ChainLayout& layout);

  /// All elements in |g>.
  static ChainState ground(const ChainLayout& layout);

  const Eigen::MatrixXcd& rho() const { return rho_; }
  Eigen::MatrixXcd& rho() { return rho_; }
  int dim() const { return static_cast<int>(rho_.rows()); }

  double population(int element) const { return rho_(element, element).real(); }
  double trace() const { return rho_.trace().real(); }
  double excited_population() const { return trace() - population(0); }
  double hermiticity_error() const;
  double min_eigenvalue() const;

 private:
  Eigen::MatrixXcd rho_;
};

/// Ideal (over-rotated) unitary of `gate`, then amplitude damping of the
/// gate's elements for the gate's duration (ladder f -> e -> g).
void apply_gate(ChainState& state, const Gate& gate, const NoiseModel& noise,
                const ChainLayout& layout);

/// Amplitude damping of every element in `elements` for `duration_ns`. When
/// both levels of a qutrit are listed, the f -> e -> g cascade is solved
/// exactly over the interval.
void apply_idle(ChainState& state, const std::vector<int>& elements,
                double duration_ns, const NoiseModel& noise,
                const ChainLayout& layout);

/// Duration of the slowest gate of a layer.
double layer_duration(const Layer& layer, const ChainLayout& layout);

/// Applies one layer: every gate, then idle damping on untouched elements.
void apply_layer(ChainState& state, const Layer& layer, const NoiseModel& noise,
                 const ChainLayout& layout);

/// Callback after each layer, for invariant checks.
using LayerObserver =
    std::function<void(std::size_t layer_index, const ChainState&)>;

ChainState simulate(const Circuit& circuit, const NoiseModel& noise,
                    const ChainLayout& layout,
                    const LayerObserver& observer = {});

struct PositionReadout {
  Distribution positions;     ///< unidirectional coordinates x = i
  double loss = 0.0;          ///< vacuum plus shift-qubit plus missed reads
  std::vector<double> coin1;  ///< e populations (coin |1>)
  std::vector<double> coin0;  ///< f populations (coin |0>)
};

PositionReadout measure_positions(const ChainState& state,
                                  const ChainLayout& layout,
                                  const NoiseModel& noise = {}, int step = 0);

/// Empirical readout from `shots` samples of the final populations.
PositionReadout sample_positions(const PositionReadout& exact,
                                 std::uint64_t shots, std::uint64_t seed);

/// Per-step unidirectional readouts for t' = 0..t. The t'-step circuit is a
/// prefix of the t-step one, so each readout is a snapshot taken after the
/// last layer of step t'.
std::vector<PositionReadout> simulate_walk(int t, const CoinProfile& uni_profile,
                                           const CoinVector& initial_coin,
                                           const NoiseModel& noise,
                                           const ChainLayout& layout);

}  // namespace qwalk::chain
