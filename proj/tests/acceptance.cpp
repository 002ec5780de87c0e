// Acceptance checks A1-A10. One line per criterion; exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qwalk/io.hpp"

using namespace qwalk;
using oracle::kPi;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [FAILED: " << what << "]";
    }
  }
};

int failures = 0;
constexpr double kNoLimit = 1e300;

void criterion(const char* id, const char* title, double limit_s,
               const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.pass = false;
    out.detail << " [exception: " << e.what() << "]";
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs >= limit_s) {  // limits only where a budget is stated
    out.pass = false;
    out.detail << " [runtime " << secs << " s >= " << limit_s << " s]";
  }
  if (!out.pass) ++failures;
  std::printf("%s %s  %s:%s (%.3f s)\n", id, out.pass ? "PASS" : "FAIL", title,
              out.detail.str().c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

CoinProfile edge(double tm, double tp) { return topology::edge_profile(tm, tp); }

std::vector<double> p_edge_series(const WalkState& init, double tm, double tp, int t) {
  std::vector<double> out;
  for (const auto& d : evolve(init, edge(tm, tp), WalkKind::Bidirectional, t))
    out.push_back(topology::p_edge(d));
  return out;
}

}  // namespace

int main() {
  criterion("A1", "dual-engine equivalence", 1.0, [](Outcome& o) {
    const chain::ChainLayout layout;
    double worst = 0.0;
    for (auto name : {NamedInitial::PhiCo, NamedInitial::PhiCe}) {
      const int t = 8;
      const CoinProfile uni = map_profile_bi_to_uni(edge(-kPi / 4, kPi / 4), t);
      const auto walk = evolve(initial_state(name), uni, WalkKind::Unidirectional, t);
      const auto chain = chain::simulate_walk(t, uni, chain::initial_coin(name),
                                              chain::NoiseModel{}, layout);
      for (int s = 0; s <= t; ++s)
        for (int x = 0; x < layout.n_qutrits; ++x)
          worst = std::max(worst, std::abs(chain[s].positions.at(x) - walk[s].at(x)));
    }
    o.detail << " max |dp| = " << fmt(worst) << " (<= 1e-9)";
    o.require(worst <= 1e-9, "max |dp| <= 1e-9");
  });

  criterion("A2", "walk-type mapping", 1.0, [](Outcome& o) {
    std::mt19937_64 gen(20240611);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    std::uniform_int_distribution<int> boundary(-3, 3);
    std::normal_distribution<double> g;
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const auto conv = trial % 2 ? AngleConvention::Full : AngleConvention::Half;
      const auto profile =
          CoinProfile::two_domain(angle(gen), angle(gen), boundary(gen), conv, angle(gen));
      CoinVector c{Complex{g(gen), g(gen)}, Complex{g(gen), g(gen)}};
      const WalkState init = initial_state(WalkState::localized(0, c));
      const int t = 6;
      const auto bi = evolve(init, profile, WalkKind::Bidirectional, t);
      const auto uni =
          evolve(init, map_profile_bi_to_uni(profile, t), WalkKind::Unidirectional, t);
      for (int s = 0; s <= t; ++s) {
        const Distribution conv_d = convert_uni_to_bi(uni[s], s);
        for (int x = -t; x <= t; ++x)
          worst = std::max(worst, std::abs(conv_d.at(x) - bi[s].at(x)));
      }
    }
    o.detail << " 20 random profiles, max |dp| = " << fmt(worst) << " (<= 1e-12)";
    o.require(worst <= 1e-12, "max |dp| <= 1e-12");
  });

  criterion("A3", "ballistic spreading", 1.0, [](Outcome& o) {
    const auto d = metrics::series(
        evolve(initial_state(NamedInitial::PhiCo), edge(-kPi / 4, kPi / 4),
               WalkKind::Bidirectional, 9),
        metrics::diffusion_distance);
    std::vector<double> x, y;
    for (int t = 2; t <= 9; ++t) {
      x.push_back(t);
      y.push_back(d[t].value);
    }
    const auto fit = oracle::linear_fit(x, y);

    // Classical stay/right walk, read in two-way coordinates.
    std::vector<double> lx, ly;
    for (int t = 4; t <= 64; ++t) {
      std::vector<double> p(t + 1);
      double logc = 0.0;
      for (int k = 0; k <= t; ++k) {
        if (k > 0) logc += std::log(t - k + 1.0) - std::log(double(k));
        p[k] = std::exp(logc - t * std::log(2.0));
      }
      lx.push_back(std::log(double(t)));
      ly.push_back(std::log(metrics::diffusion_distance(convert_uni_to_bi(Distribution(0, p, t), t))));
    }
    const double exponent = oracle::linear_fit(lx, ly).b;
    o.detail << " quantum R^2 = " << fmt(fit.r2) << " (>= 0.99), slope " << fmt(fit.b)
             << "; classical exponent = " << fmt(exponent) << " (0.5 +- 0.05)";
    o.require(fit.r2 >= 0.99, "R^2 >= 0.99");
    o.require(std::abs(exponent - 0.5) <= 0.05, "classical exponent");
  });

  criterion("A4", "edge trapping and bounce", 1.0, [](Outcome& o) {
    const auto dists = evolve(initial_state(NamedInitial::PhiCe), edge(-kPi / 4, kPi / 4),
                              WalkKind::Bidirectional, 9);
    const double floor = topology::overlap_p0(kPi / 4) - 0.02;
    bool bounce = true;
    std::vector<int> low_steps;
    std::ostringstream values;
    for (int t = 0; t <= 9; ++t) {
      const Distribution& d = dists[t];
      int arg = d.begin_x();
      for (int x = d.begin_x(); x < d.end_x(); ++x)
        if (d.at(x) > d.at(arg)) arg = x;
      bounce = bounce && arg == (t % 2 == 0 ? 0 : -1);
      const double pe = topology::p_edge(d);
      values << (t ? "," : "") << fmt(pe);
      if (pe < floor) low_steps.push_back(t);
    }
    o.detail << " argmax alternates 0/-1: " << (bounce ? "yes" : "no") << "; P_edge(t=0..9) = ["
             << values.str() << "], floor P0-0.02 = " << fmt(floor);
    o.require(bounce, "argmax 0 at even t, -1 at odd t");
    std::string which;
    for (int t : low_steps) which += (which.empty() ? "" : ",") + std::to_string(t);
    o.require(low_steps.empty(), "P_edge below floor at t = " + which);
  });

  criterion("A5", "edge-state stationarity", 0.1, [](Outcome& o) {
    const auto z = topology::stationarity({topology::EdgeBranch::Zero, kPi / 4, -kPi / 4, 30});
    const auto p = topology::stationarity({topology::EdgeBranch::Pi, kPi / 4, -kPi / 4, 30});
    const double gap = std::abs(std::remainder(p.eigenphase - z.eigenphase - kPi, 2 * kPi));
    o.detail << " defects " << fmt(z.defect) << ", " << fmt(p.defect)
             << " (<= 1e-6); phase gap - pi = " << fmt(gap) << " (<= 1e-6)";
    o.require(z.defect <= 1e-6 && p.defect <= 1e-6, "defect <= 1e-6");
    o.require(gap <= 1e-6, "eigenphases differ by pi");
  });

  criterion("A6", "P0 closed form", 0.1, [](Outcome& o) {
    // Overlap of a state at x = 0 with the pair, from the edge amplitudes at
    // x = 0 (a_0 = 1, b_0 = r, same for both branches):
    //   <phi_e|psi> = (psi_1 - i r psi_0) / N.
    double worst = 0.0;
    for (double tp : {0.2, 0.4, kPi / 4, 1.0, 1.4}) {
      const WalkState psi = topology::interface_state(tp);
      const double r = std::cos(tp) / (1.0 + std::sin(tp));
      const double n2 = 2.0 / std::sin(tp);
      const CoinVector c = psi.at(0);
      const double each = std::norm(c[1] - Complex(0, 1) * r * c[0]) / n2;
      const double oracle_value = std::pow(2.0 * each, 2);
      const double library = topology::overlap_readings(psi, tp, -tp).squared_sum_of_squares;
      const double p0 = topology::overlap_p0(tp);
      worst = std::max({worst, std::abs(oracle_value - p0), std::abs(library - p0)});
    }
    const double at_pi4 =
        topology::overlap_readings(initial_state(NamedInitial::PhiCe), kPi / 4, -kPi / 4)
            .squared_sum_of_squares;
    worst = std::max(worst, std::abs(at_pi4 - topology::overlap_p0(kPi / 4)));
    o.detail << " reading (sum_w |<phi_e(w)|psi>|^2)^2 on the matched interface state, "
                "max |diff| = "
             << fmt(worst) << " (<= 1e-9)";
    o.require(worst <= 1e-9, "overlap matches closed form");
  });

  criterion("A7", "interface contrast, theta_plus = pi/4", kNoLimit, [](Outcome& o) {
    topology::SweepPlan plan;
    plan.fixed = kPi / 4;
    plan.grid = {-kPi / 4, kPi / 4};
    plan.steps = {5, 8};
    const auto rows = topology::run_sweep(plan);
    for (int k = 0; k < 2; ++k) {
      const double diff = rows[k].p_edge - rows[2 + k].p_edge;
      o.detail << " t=" << rows[k].steps << ": " << fmt(rows[k].p_edge) << " - "
               << fmt(rows[2 + k].p_edge) << " = " << fmt(diff) << ";";
      o.require(diff >= 0.3, "difference >= 0.3 at t=" + std::to_string(rows[k].steps));
    }
  });

  criterion("A8", "monotonic locality, antisymmetric", kNoLimit, [](Outcome& o) {
    topology::SweepPlan plan;
    plan.mode = topology::SweepMode::Antisymmetric;
    for (int i = 0; i < 10; ++i) plan.grid.push_back(0.1 + 1.4 * i / 9.0);
    plan.steps = {8};
    const auto rows = topology::run_sweep(plan);
    bool monotone = true;
    for (std::size_t i = 1; i < rows.size(); ++i)
      monotone = monotone && rows[i].p_edge >= rows[i - 1].p_edge;
    o.detail << " P_edge(t=8) from " << fmt(rows.front().p_edge) << " to "
             << fmt(rows.back().p_edge) << ", non-decreasing: " << (monotone ? "yes" : "no");
    o.require(monotone, "non-decreasing");
    o.require(rows.back().p_edge >= 0.9, "top of grid within 0.1 of 1");
  });

  criterion("A9", "channel sanity under T1", kNoLimit, [](Outcome& o) {
    const chain::ChainLayout layout;
    const int t = 9;
    const CoinProfile uni = map_profile_bi_to_uni(edge(-kPi / 4, kPi / 4), t);
    const CoinVector coin = chain::initial_coin(NamedInitial::PhiCe);
    const auto ideal = evolve(initial_state(NamedInitial::PhiCe), uni, WalkKind::Unidirectional, t);

    double trace_err = 0.0;
    bool loss_monotone = true, sim_monotone = true, t1_order = true;
    std::vector<double> previous_sim;
    for (double t1 : {60.0, 20.0, 5.0}) {
      chain::NoiseModel noise;
      noise.t1_qutrit_e_us = t1;
      noise.t1_qutrit_f_us = t1 / 2;
      noise.t1_shift_qubit_us = t1;

      chain::ChainState s = chain::ChainState::ground(layout);
      for (const auto& layer : chain::compile_walk(t, uni, coin, layout).layers) {
        for (const auto& g : layer.gates) {
          chain::apply_gate(s, g, noise, layout);
          trace_err = std::max(trace_err, std::abs(s.trace() - 1.0));
        }
      }

      const auto run = chain::simulate_walk(t, uni, coin, noise, layout);
      std::vector<double> sim;
      for (int k = 0; k <= t; ++k) {
        if (k > 0 && run[k].loss < run[k - 1].loss) loss_monotone = false;
        sim.push_back(metrics::similarity(run[k].positions, ideal[k]));
        if (k > 0 && sim[k] > sim[k - 1] + 1e-12) sim_monotone = false;
      }
      if (!previous_sim.empty()) {
        for (int k = 1; k <= t; ++k)
          if (sim[k] >= previous_sim[k]) t1_order = false;
      }
      o.detail << " T1=" << t1 << "us Sim(9)=" << fmt(sim[t]) << ";";
      previous_sim = sim;
    }
    o.detail << " max per-gate trace error " << fmt(trace_err);
    o.require(trace_err <= 1e-12, "trace preserved per gate");
    o.require(loss_monotone, "loss non-decreasing in depth");
    o.require(sim_monotone, "Sim(t) non-increasing");
    o.require(t1_order, "Sim decreases as T1 decreases");
  });

  criterion("A10", "determinism and round-trip", kNoLimit, [](Outcome& o) {
    const io::Json cfg = io::Json::parse(R"({
      "engine": "qutrit", "steps": 7,
      "profile": {"kind": "two-domain", "theta_minus": "-pi/4", "theta_plus": "pi/4",
                  "convention": "full"},
      "initial": "phi_ce",
      "noise": {"t1_qutrit_e_us": 20, "t1_qutrit_f_us": 10, "t1_shift_qubit_us": 20},
      "shots": 2000, "seed": 11
    })");
    const auto c = io::parse_config(cfg);
    const io::RunRecord a = io::cmd_walk(c);
    const io::RunRecord b = io::cmd_walk(c);
    const bool csv_same = io::distributions_csv(a) == io::distributions_csv(b);
    const bool json_same = io::to_json(a).dump() == io::to_json(b).dump();
    const bool svg_same = io::heatmap_svg(a) == io::heatmap_svg(b);

    io::RunRecord stripped = a;
    stripped.wall_clock_ms.reset();
    const bool round_trip =
        io::record_from_json(io::Json::parse(io::to_json(stripped).dump())) == stripped;
    const io::Json canon = io::to_json(c);
    const bool config_echo = io::to_json(io::parse_config(canon)).dump() == canon.dump();

    topology::SweepPlan plan;
    plan.mode = topology::SweepMode::Antisymmetric;
    for (int i = 0; i < 8; ++i) plan.grid.push_back(0.1 + 0.18 * i);
    plan.steps = {5, 8};
    const bool sweep_same = io::sweep_csv(topology::run_sweep(plan, topology::ideal_evaluator, 1)) ==
                            io::sweep_csv(topology::run_sweep(plan, topology::ideal_evaluator, 4));

    o.detail << " csv " << csv_same << ", json " << json_same << ", svg " << svg_same
             << ", sweep threads " << sweep_same << ", record round-trip " << round_trip
             << ", config echo " << config_echo;
    o.require(csv_same && json_same && svg_same && sweep_same, "byte-identical outputs");
    o.require(round_trip, "RunRecord round-trip");
    o.require(config_echo, "canonical config echo");
  });

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
