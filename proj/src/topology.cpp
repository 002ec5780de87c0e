#include "qwalk/topology.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <string>
#include <thread>

namespace qwalk::topology {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr int kMaxWindow = 1 << 20;

void check_domains(double theta_plus, double theta_minus) {
  if (theta_plus == 0.0) throw Error("edge state undefined at theta_plus=0");
  if (!(theta_plus > 0.0 && theta_plus <= kHalfPi)) {
    throw Error("edge state needs 0 < theta_plus <= pi/2");
  }
  if (!(theta_minus < 0.0 && theta_minus > -kHalfPi)) {
    throw Error("edge state needs -pi/2 < theta_minus < 0");
  }
}

WalkState build_edge(EdgeBranch omega, double theta_plus, double theta_minus,
                     int window) {
  const double r_plus = decay_ratio(theta_plus);
  const double r_minus = decay_ratio(theta_minus);
  const double n = edge_normalization(theta_plus, theta_minus);
  std::vector<CoinVector> amps;
  amps.reserve(static_cast<std::size_t>(2 * window + 1));
  for (int x = -window; x <= window; ++x) {
    const double r = x < 0 ? r_minus : r_plus;
    const double a = std::pow(r, x);
    const double b = std::pow(r, x + 1);
    const double phase = (omega == EdgeBranch::Pi && (x % 2 != 0)) ? -1.0 : 1.0;
    amps.push_back({kI * (phase * b / n), Complex(phase * a / n)});
  }
  return WalkState(-window, std::move(amps));
}

}  // namespace

CoinProfile edge_profile(double theta_minus, double theta_plus) {
  return CoinProfile::two_domain(theta_minus, theta_plus, 0,
                                 AngleConvention::Full);
}

double decay_ratio(double theta) {
  return std::cos(theta) / (1.0 + std::sin(theta));
}

double edge_normalization(double theta_plus, double theta_minus) {
  return std::sqrt(1.0 / std::sin(theta_plus) - 1.0 / std::sin(theta_minus));
}

double edge_tail_mass(double theta_plus, double theta_minus, int window) {
  // Per-site weight r^{2x}(1 + r^2) sums geometrically on each side; the
  // full sums are 1/sin(theta_plus) and -1/sin(theta_minus).
  const double r_plus = decay_ratio(theta_plus);
  const double q_minus = 1.0 / decay_ratio(theta_minus);
  const double right = std::pow(r_plus, 2.0 * (window + 1)) / std::sin(theta_plus);
  const double left = std::pow(q_minus, 2.0 * window) / -std::sin(theta_minus);
  const double n = edge_normalization(theta_plus, theta_minus);
  return (right + left) / (n * n);
}

int required_window(double theta_plus, double theta_minus) {
  check_domains(theta_plus, theta_minus);
  int w = 1;
  while (edge_tail_mass(theta_plus, theta_minus, w) >= kTailTolerance) {
    if (w >= kMaxWindow) throw Error("edge state: decay too slow to truncate");
    w *= 2;
  }
  // Bisect down to the smallest sufficient window.
  int lo = w / 2;
  int hi = w;
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    if (edge_tail_mass(theta_plus, theta_minus, mid) < kTailTolerance) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

EdgeState edge_state(const EdgeStateSpec& spec) {
  check_domains(spec.theta_plus, spec.theta_minus);
  int window = kDefaultWindow;
  if (spec.window) {
    window = *spec.window;
    if (window < 0) throw Error("edge state: negative window");
    if (edge_tail_mass(spec.theta_plus, spec.theta_minus, window) >=
        kTailTolerance) {
      throw Error("edge state: window " + std::to_string(window) +
                  " leaves tail mass >= 1e-12; use W >= " +
                  std::to_string(required_window(spec.theta_plus,
                                                 spec.theta_minus)));
    }
  } else {
    window = std::max(window, required_window(spec.theta_plus, spec.theta_minus));
  }
  EdgeState out;
  out.window = window;
  out.truncation_deficit =
      edge_tail_mass(spec.theta_plus, spec.theta_minus, window);
  out.state =
      build_edge(spec.omega, spec.theta_plus, spec.theta_minus, window)
          .normalized();
  return out;
}

Stationarity stationarity(const WalkState& state, const CoinProfile& profile,
                          WalkKind kind) {
  const Complex o = inner(state, step(state, profile, kind, 1));
  return {1.0 - std::abs(o), std::arg(o)};
}

Stationarity stationarity(const EdgeStateSpec& spec) {
  const EdgeState e = edge_state(spec);
  return stationarity(e.state, edge_profile(spec.theta_minus, spec.theta_plus),
                      WalkKind::Bidirectional);
}

double stationarity_defect(const EdgeStateSpec& spec) {
  return stationarity(spec).defect;
}

double overlap_p0(double theta_plus) {
  if (!(theta_plus >= 0.0 && theta_plus < kHalfPi)) {
    throw Error("overlap_p0 needs 0 <= theta_plus < pi/2");
  }
  const double bracket = 2.0 * std::tan(theta_plus) * decay_ratio(theta_plus);
  return bracket * bracket;
}

WalkState interface_state(double theta_plus) {
  const double r = decay_ratio(theta_plus);
  return WalkState::localized(0, {kI * r, Complex(1.0)}).normalized();
}

std::array<Complex, 2> edge_pair_overlaps(const WalkState& psi,
                                          double theta_plus,
                                          double theta_minus) {
  std::array<Complex, 2> out;
  const EdgeBranch branches[] = {EdgeBranch::Zero, EdgeBranch::Pi};
  for (int k = 0; k < 2; ++k) {
    const EdgeState e = edge_state({branches[k], theta_plus, theta_minus, {}});
    out[static_cast<std::size_t>(k)] = inner(e.state, psi);
  }
  return out;
}

OverlapReadings overlap_readings(const WalkState& psi, double theta_plus,
                                 double theta_minus) {
  const EdgeState zero = edge_state({EdgeBranch::Zero, theta_plus, theta_minus, {}});
  const EdgeState pi = edge_state({EdgeBranch::Pi, theta_plus, theta_minus, {}});
  const Complex c0 = inner(zero.state, psi);
  const Complex cpi = inner(pi.state, psi);

  OverlapReadings r{};
  r.square_of_sum = std::norm(c0 + cpi);
  r.sum_of_squares = std::norm(c0) + std::norm(cpi);
  r.squared_sum_of_squares = r.sum_of_squares * r.sum_of_squares;
  const WalkState projection = c0 * zero.state + cpi * pi.state;
  for (int x : {-1, 0}) {
    const CoinVector v = projection.at(x);
    r.window_projection += std::norm(v[0]) + std::norm(v[1]);
  }
  return r;
}

double p_edge(const Distribution& dist, const std::vector<int>& window) {
  double p = 0.0;
  for (int x : window) p += dist.at(x);
  return p;
}

void SweepPlan::validate() const {
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const bool up = grid[1] > grid[0];
    if ((up && !(grid[i] > grid[i - 1])) || (!up && !(grid[i] < grid[i - 1]))) {
      throw Error("sweep grid must be strictly monotone");
    }
  }
  for (int t : steps) {
    if (t <= 0) throw Error("sweep steps must be positive");
  }
}

std::pair<double, double> sweep_angles(const SweepPlan& plan, double swept) {
  if (plan.mode == SweepMode::FixPlusVaryMinus) return {swept, plan.fixed};
  return {-swept, swept};
}

WalkState sweep_initial_state(const SweepPlan& plan, double theta_plus) {
  switch (plan.initial) {
    case SweepInitial::PhiCo:
      return initial_state(NamedInitial::PhiCo);
    case SweepInitial::PhiCe:
      return initial_state(NamedInitial::PhiCe);
    case SweepInitial::Interface:
      return interface_state(theta_plus);
  }
  throw Error("unknown sweep initial state");
}

Distribution ideal_evaluator(const CoinProfile& profile,
                             const WalkState& initial, int t) {
  WalkState s = initial;
  for (int n = 1; n <= t; ++n) s = step(s, profile, WalkKind::Bidirectional, n);
  return s.marginal(t);
}

std::vector<SweepRow> run_sweep(const SweepPlan& plan,
                                const SweepEvaluator& evaluate,
                                unsigned threads) {
  plan.validate();
  const std::size_t points = plan.grid.size();
  std::vector<std::vector<SweepRow>> per_point(points);

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(points);
  auto worker = [&] {
    for (std::size_t i = next++; i < points; i = next++) {
      try {
        const double swept = plan.grid[i];
        const auto [theta_minus, theta_plus] = sweep_angles(plan, swept);
        const CoinProfile profile = edge_profile(theta_minus, theta_plus);
        const WalkState initial = sweep_initial_state(plan, theta_plus);
        for (int t : plan.steps) {
          per_point[i].push_back(
              {swept, t, p_edge(evaluate(profile, initial, t))});
        }
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t n_workers = std::min<std::size_t>(threads, points);
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (std::size_t k = 0; k < n_workers; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<SweepRow> rows;
  rows.reserve(points * plan.steps.size());
  for (auto& point : per_point) rows.insert(rows.end(), point.begin(), point.end());
  return rows;
}

}  // namespace qwalk::topology
