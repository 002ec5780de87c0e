#include "qwalk/chain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <string>

namespace qwalk::chain {

namespace {

using Mat2 = std::array<std::array<Complex, 2>, 2>;

// rho -> U rho U^dagger with U = g on span{i, j}, identity elsewhere.
void rotate_pair(Eigen::MatrixXcd& rho, int i, int j, const Mat2& g) {
  const Eigen::Index n = rho.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex a = rho(i, k);
    const Complex b = rho(j, k);
    rho(i, k) = g[0][0] * a + g[0][1] * b;
    rho(j, k) = g[1][0] * a + g[1][1] * b;
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex a = rho(k, i);
    const Complex b = rho(k, j);
    rho(k, i) = a * std::conj(g[0][0]) + b * std::conj(g[0][1]);
    rho(k, j) = a * std::conj(g[1][0]) + b * std::conj(g[1][1]);
  }
}

// Amplitude damping of `element` into `target` with probability gamma.
void damp(Eigen::MatrixXcd& rho, int element, int target, double gamma) {
  if (gamma <= 0.0) return;
  const double keep = std::sqrt(1.0 - gamma);
  const Complex moved = gamma * rho(element, element);
  rho.row(element) *= keep;
  rho.col(element) *= keep;
  rho(target, target) += moved;
}

double decay_probability(double duration_ns, double t1_us) {
  if (!std::isfinite(t1_us)) return 0.0;
  return 1.0 - std::exp(-duration_ns / (1000.0 * t1_us));
}

// Decay rate in 1/ns.
double rate(double t1_us) { return std::isfinite(t1_us) ? 1.0 / (1000.0 * t1_us) : 0.0; }

double gate_duration(const Gate& gate, const ChainLayout& layout) {
  switch (gate.kind) {
    case GateKind::PiGE:
      return layout.durations.pi_ge;
    case GateKind::SU2ef:
      return layout.durations.su2_ef;
    case GateKind::SwapIn:
    case GateKind::SwapOut:
      return layout.durations.swap;
  }
  return 0.0;
}

void check_target(const Gate& gate, const ChainLayout& layout) {
  const int limit = (gate.kind == GateKind::PiGE || gate.kind == GateKind::SU2ef)
                        ? layout.n_qutrits
                        : layout.n_shift_qubits();
  if (gate.target < 0 || gate.target >= limit) {
    throw Error(std::string("malformed gate target: ") + to_string(gate.kind) +
                " " + std::to_string(gate.target));
  }
}

Mat2 swap_rotation(const NoiseModel& noise) {
  const double angle =
      (1.0 + noise.over_rotation) * std::acos(std::sqrt(noise.swap_error));
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  // (source, dest): source -> c source + s dest
  return {{{c, -s}, {s, c}}};
}

Mat2 to_mat2(const CoinMatrix& m) { return m.m; }

}  // namespace

std::string ChainLayout::label(int element) const {
  if (element == vacuum()) return "vac";
  if (element < 0 || element >= dim()) throw Error("element out of range");
  if (element <= 2 * n_qutrits) {
    const int q = (element - 1) / 2;
    return "Q" + std::to_string(q) + ((element - 1) % 2 == 0 ? ".e" : ".f");
  }
  return "SQ" + std::to_string(element - 1 - 2 * n_qutrits);
}

void ChainLayout::validate() const {
  if (n_qutrits < 1) throw Error("layout: n_qutrits must be at least 1");
  if (!(durations.su2_ef > 0.0 && durations.swap > 0.0 &&
        durations.pi_ge > 0.0)) {
    throw Error("layout: gate durations must be positive");
  }
}

const char* to_string(GateKind kind) {
  switch (kind) {
    case GateKind::PiGE:
      return "pi_ge";
    case GateKind::SU2ef:
      return "su2_ef";
    case GateKind::SwapIn:
      return "swap_in";
    case GateKind::SwapOut:
      return "swap_out";
  }
  return "?";
}

const char* to_string(LayerRole role) {
  switch (role) {
    case LayerRole::Init:
      return "init";
    case LayerRole::Coin:
      return "coin";
    case LayerRole::SwapIn:
      return "swap_in";
    case LayerRole::SwapOut:
      return "swap_out";
  }
  return "?";
}

std::size_t Circuit::gate_count(GateKind kind) const {
  std::size_t n = 0;
  for (const auto& layer : layers) {
    n += static_cast<std::size_t>(std::count_if(
        layer.gates.begin(), layer.gates.end(),
        [kind](const Gate& g) { return g.kind == kind; }));
  }
  return n;
}

std::size_t Circuit::layer_count(LayerRole role) const {
  return static_cast<std::size_t>(
      std::count_if(layers.begin(), layers.end(),
                    [role](const Layer& l) { return l.role == role; }));
}

std::vector<int> gate_elements(const Gate& gate, const ChainLayout& layout) {
  check_target(gate, layout);
  const int t = gate.target;
  switch (gate.kind) {
    case GateKind::PiGE:
    case GateKind::SU2ef:
      return {layout.e(t), layout.f(t)};
    case GateKind::SwapIn:
      return {layout.e(t), layout.f(t), layout.sq(t)};
    case GateKind::SwapOut:
      return {layout.sq(t), layout.e(t + 1), layout.f(t + 1)};
  }
  return {};
}

void check_layer_disjoint(const Layer& layer, const ChainLayout& layout) {
  std::set<int> seen;
  for (const Gate& g : layer.gates) {
    for (int el : gate_elements(g, layout)) {
      if (!seen.insert(el).second) {
        throw Error("layer addresses " + layout.label(el) + " twice");
      }
    }
  }
}

CoinVector initial_coin(NamedInitial name) {
  return initial_state(name).at(0);
}

std::pair<double, double> preparation_angles(const CoinVector& coin) {
  const double m0 = std::abs(coin[0]);
  const double m1 = std::abs(coin[1]);
  if (m0 == 0.0 && m1 == 0.0) throw Error("initial coin has zero norm");
  const double theta = 2.0 * std::atan2(m0, m1);
  if (m0 == 0.0) return {theta, 0.0};
  // coin_matrix(theta, a)|1> = (i sin(theta/2) e^{-ia}, cos(theta/2)); match
  // the phase of coin[0] relative to coin[1].
  const double global = m1 > 0.0 ? std::arg(coin[1]) : 0.0;
  const double axis = global + std::numbers::pi / 2.0 - std::arg(coin[0]);
  return {theta, std::remainder(axis, 2.0 * std::numbers::pi)};
}

Circuit compile_walk(int t, const CoinProfile& uni_profile,
                     const CoinVector& initial, const ChainLayout& layout) {
  layout.validate();
  if (t < 0) throw Error("compile_walk: negative step count");
  if (t > layout.n_qutrits - 1) throw Error("chain too short");

  Circuit c;
  c.steps = t;
  c.layers.push_back({LayerRole::Init, 0, {{GateKind::PiGE, 0, 0.0, 0.0}}});
  const auto [prep_theta, prep_axis] = preparation_angles(initial);
  c.layers.push_back(
      {LayerRole::Init, 0, {{GateKind::SU2ef, 0, prep_theta, prep_axis}}});

  for (int n = 1; n <= t; ++n) {
    Layer coin{LayerRole::Coin, n, {}};
    Layer swap_in{LayerRole::SwapIn, n, {}};
    Layer swap_out{LayerRole::SwapOut, n, {}};
    for (int q = 0; q < n; ++q) {
      const auto angle = uni_profile.angle(q, n);
      if (!angle) throw Error("profile incomplete");
      coin.gates.push_back({GateKind::SU2ef, q,
                            uni_profile.rotation_angle(*angle),
                            uni_profile.axis()});
      swap_in.gates.push_back({GateKind::SwapIn, q, 0.0, 0.0});
      swap_out.gates.push_back({GateKind::SwapOut, q, 0.0, 0.0});
    }
    c.layers.push_back(std::move(coin));
    c.layers.push_back(std::move(swap_in));
    c.layers.push_back(std::move(swap_out));
  }
  for (const Layer& layer : c.layers) check_layer_disjoint(layer, layout);
  return c;
}

bool NoiseModel::is_ideal() const {
  return !std::isfinite(t1_qutrit_e_us) && !std::isfinite(t1_qutrit_f_us) &&
         !std::isfinite(t1_shift_qubit_us) && over_rotation == 0.0 &&
         swap_error == 0.0 && readout_error == 0.0;
}

void NoiseModel::validate() const {
  for (double t1 : {t1_qutrit_e_us, t1_qutrit_f_us, t1_shift_qubit_us}) {
    if (!(t1 > 0.0)) throw Error("noise: lifetimes must be positive or infinite");
  }
  for (double p : {swap_error, readout_error}) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error("noise: probabilities must lie in [0, 1]");
  }
  if (!std::isfinite(over_rotation)) throw Error("noise: over_rotation must be finite");
}

ChainState::ChainState(const ChainLayout& layout)
    : rho_(Eigen::MatrixXcd::Zero(layout.dim(), layout.dim())) {
  layout.validate();
  rho_(0, 0) = 1.0;
}

ChainState ChainState::ground(const ChainLayout& layout) {
  return ChainState(layout);
}

double ChainState::hermiticity_error() const {
  return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
}

double ChainState::min_eigenvalue() const {
  const Eigen::MatrixXcd h = 0.5 * (rho_ + rho_.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

void apply_idle(ChainState& state, const std::vector<int>& elements,
                double duration_ns, const NoiseModel& noise,
                const ChainLayout& layout) {
  if (duration_ns <= 0.0) return;
  Eigen::MatrixXcd& rho = state.rho();
  const double ge = decay_probability(duration_ns, noise.t1_qutrit_e_us);
  const double fe = decay_probability(duration_ns, noise.t1_qutrit_f_us);
  const double sq = decay_probability(duration_ns, noise.t1_shift_qubit_us);
  std::vector<bool> listed(static_cast<std::size_t>(layout.dim()), false);
  for (int el : elements) listed[static_cast<std::size_t>(el)] = true;

  for (int el : elements) {
    if (el == ChainLayout::vacuum()) continue;
    if (el > 2 * layout.n_qutrits) {
      damp(rho, el, ChainLayout::vacuum(), sq);
      continue;
    }
    const int q = (el - 1) / 2;
    const int e = layout.e(q);
    const int f = layout.f(q);
    const bool both = listed[static_cast<std::size_t>(e)] && listed[static_cast<std::size_t>(f)];
    if (!both) {
      if (el == e) {
        damp(rho, e, ChainLayout::vacuum(), ge);
      } else {
        damp(rho, f, e, fe);
      }
      continue;
    }
    if (el == e) continue;  // the pair is handled once, from f

    // Exact f -> e -> g cascade over the slice.
    const double pf = rho(f, f).real();
    const double pe = rho(e, e).real();
    const double rate_e = rate(noise.t1_qutrit_e_us);
    const double rate_f = rate(noise.t1_qutrit_f_us);
    double via_e = 0.0;  // f population that ends the slice in e
    if (rate_f > 0.0) {
      const double diff = rate_e - rate_f;
      via_e = std::abs(diff * duration_ns) < 1e-9
                  ? rate_f * duration_ns * std::exp(-rate_f * duration_ns)
                  : rate_f * (std::exp(-rate_f * duration_ns) - std::exp(-rate_e * duration_ns)) / diff;
    }
    rho.row(f) *= std::sqrt(1.0 - fe);
    rho.col(f) *= std::sqrt(1.0 - fe);
    rho.row(e) *= std::sqrt(1.0 - ge);
    rho.col(e) *= std::sqrt(1.0 - ge);
    rho(e, e) += via_e * pf;
    rho(ChainLayout::vacuum(), ChainLayout::vacuum()) += ge * pe + (fe - via_e) * pf;
  }
}

void apply_gate(ChainState& state, const Gate& gate, const NoiseModel& noise,
                const ChainLayout& layout) {
  if (state.dim() != layout.dim()) throw Error("state does not match layout");
  check_target(gate, layout);
  Eigen::MatrixXcd& rho = state.rho();
  const int t = gate.target;
  switch (gate.kind) {
    case GateKind::PiGE:
      rotate_pair(rho, ChainLayout::vacuum(), layout.e(t), {{{0.0, 1.0}, {1.0, 0.0}}});
      break;
    case GateKind::SU2ef:
      // coin basis (|0>, |1>) = (f, e)
      rotate_pair(rho, layout.f(t), layout.e(t),
                  to_mat2(coin_matrix((1.0 + noise.over_rotation) * gate.theta,
                                      gate.axis)));
      break;
    case GateKind::SwapIn:
      rotate_pair(rho, layout.e(t), layout.sq(t), swap_rotation(noise));
      break;
    case GateKind::SwapOut:
      rotate_pair(rho, layout.sq(t), layout.e(t + 1), swap_rotation(noise));
      break;
  }
  apply_idle(state, gate_elements(gate, layout), gate_duration(gate, layout),
             noise, layout);
}

double layer_duration(const Layer& layer, const ChainLayout& layout) {
  double d = 0.0;
  for (const Gate& g : layer.gates) d = std::max(d, gate_duration(g, layout));
  return d;
}

void apply_layer(ChainState& state, const Layer& layer, const NoiseModel& noise,
                 const ChainLayout& layout) {
  const double total = layer_duration(layer, layout);
  std::vector<bool> busy(static_cast<std::size_t>(layout.dim()), false);
  for (const Gate& g : layer.gates) {
    apply_gate(state, g, noise, layout);
    const auto elements = gate_elements(g, layout);
    for (int el : elements) busy[static_cast<std::size_t>(el)] = true;
    apply_idle(state, elements, total - gate_duration(g, layout), noise, layout);
  }
  std::vector<int> idle;
  for (int el = 1; el < layout.dim(); ++el) {
    if (!busy[static_cast<std::size_t>(el)]) idle.push_back(el);
  }
  apply_idle(state, idle, total, noise, layout);
}

ChainState simulate(const Circuit& circuit, const NoiseModel& noise,
                    const ChainLayout& layout, const LayerObserver& observer) {
  noise.validate();
  ChainState state = ChainState::ground(layout);
  for (std::size_t i = 0; i < circuit.layers.size(); ++i) {
    apply_layer(state, circuit.layers[i], noise, layout);
    if (observer) observer(i, state);
  }
  return state;
}

PositionReadout measure_positions(const ChainState& state,
                                  const ChainLayout& layout,
                                  const NoiseModel& noise, int step) {
  PositionReadout out;
  const double detect = 1.0 - noise.readout_error;
  std::vector<double> probs;
  double detected = 0.0;
  for (int q = 0; q < layout.n_qutrits; ++q) {
    const double e = std::max(0.0, state.population(layout.e(q))) * detect;
    const double f = std::max(0.0, state.population(layout.f(q))) * detect;
    out.coin1.push_back(e);
    out.coin0.push_back(f);
    probs.push_back(e + f);
    detected += e + f;
  }
  out.positions = Distribution(0, std::move(probs), step);
  out.loss = std::max(0.0, state.trace() - detected);
  return out;
}

PositionReadout sample_positions(const PositionReadout& exact,
                                 std::uint64_t shots, std::uint64_t seed) {
  if (shots == 0) throw Error("sampling needs at least one shot");
  const std::size_t n = exact.coin1.size();
  // Categories: e_0..e_{n-1}, f_0..f_{n-1}, loss.
  std::vector<double> weights;
  weights.reserve(2 * n + 1);
  weights.insert(weights.end(), exact.coin1.begin(), exact.coin1.end());
  weights.insert(weights.end(), exact.coin0.begin(), exact.coin0.end());
  weights.push_back(exact.loss);

  std::mt19937_64 gen(seed);
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  std::vector<std::uint64_t> counts(weights.size(), 0);
  for (std::uint64_t s = 0; s < shots; ++s) ++counts[pick(gen)];

  const double scale = 1.0 / static_cast<double>(shots);
  PositionReadout out;
  std::vector<double> probs(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.coin1.push_back(static_cast<double>(counts[i]) * scale);
    out.coin0.push_back(static_cast<double>(counts[n + i]) * scale);
    probs[i] = out.coin1[i] + out.coin0[i];
  }
  out.loss = static_cast<double>(counts[2 * n]) * scale;
  out.positions = Distribution(0, std::move(probs), exact.positions.step());
  return out;
}

std::vector<PositionReadout> simulate_walk(int t, const CoinProfile& uni_profile,
                                           const CoinVector& initial,
                                           const NoiseModel& noise,
                                           const ChainLayout& layout) {
  const Circuit circuit = compile_walk(t, uni_profile, initial, layout);
  std::vector<PositionReadout> out;
  out.reserve(static_cast<std::size_t>(t) + 1);
  simulate(circuit, noise, layout, [&](std::size_t i, const ChainState& s) {
    const Layer& layer = circuit.layers[i];
    const bool init_done = layer.role == LayerRole::Init &&
                           (i + 1 == circuit.layers.size() ||
                            circuit.layers[i + 1].role != LayerRole::Init);
    if (init_done || layer.role == LayerRole::SwapOut) {
      out.push_back(measure_positions(s, layout, noise, layer.step));
    }
  });
  return out;
}

}  // namespace qwalk::chain
