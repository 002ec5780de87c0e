#include <chrono>
#include <cmath>

#include "qwalk/io.hpp"

namespace qwalk::io {

namespace {

bool is_table(const CoinProfile& p) {
  return p.kind() == CoinProfile::Kind::PerStepTable;
}

CoinProfile uni_profile_for(const CoinProfile& profile, int t) {
  return is_table(profile) ? profile : map_profile_bi_to_uni(profile, t);
}

// Restricts a chain readout to the light cone [0, step].
Distribution light_cone(const Distribution& d, int step) {
  std::vector<double> probs(static_cast<std::size_t>(step) + 1);
  for (int x = 0; x <= step; ++x) probs[static_cast<std::size_t>(x)] = d.at(x);
  for (int x = step + 1; x < d.end_x(); ++x) {
    if (d.at(x) > 1e-12) throw Error("population outside the light cone");
  }
  return Distribution(0, std::move(probs), step);
}

double diffusion_or_postselected(const Distribution& d) {
  if (std::abs(d.total() - 1.0) <= 1e-6) return metrics::diffusion_distance(d);
  if (d.total() <= 0.0) return std::nan("");
  return metrics::diffusion_distance(d.renormalized());
}

std::vector<Distribution> ideal_uni(const ExperimentConfig& c, const WalkState& initial,
                                    bool to_bi) {
  auto dists = evolve(initial, uni_profile_for(c.profile, c.steps),
                      WalkKind::Unidirectional, c.steps);
  if (to_bi) {
    for (auto& d : dists) d = convert_uni_to_bi(d, d.step());
  }
  return dists;
}

}  // namespace

RunRecord cmd_walk(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  if (config.steps < 0) throw ConfigError("steps", "must be non-negative");
  const WalkState initial = initial_walk_state(config);

  RunRecord record;
  record.config = to_json(config);
  record.coordinates = config.raw_coordinates ? "unidirectional" : "bidirectional";

  switch (config.engine) {
    case Engine::IdealBi:
      record.distributions =
          evolve(initial, config.profile, WalkKind::Bidirectional, config.steps);
      record.loss.assign(record.distributions.size(), 0.0);
      break;
    case Engine::IdealUni:
      record.distributions = ideal_uni(config, initial, !config.raw_coordinates);
      record.loss.assign(record.distributions.size(), 0.0);
      break;
    case Engine::Qutrit: {
      config.noise.validate();
      const auto readouts = chain::simulate_walk(
          config.steps, uni_profile_for(config.profile, config.steps),
          initial.at(0), config.noise, config.layout);
      for (const auto& exact : readouts) {
        const int t = exact.positions.step();
        const chain::PositionReadout r =
            config.shots > 0
                ? chain::sample_positions(exact, config.shots,
                                          config.seed + static_cast<std::uint64_t>(t))
                : exact;
        Distribution d = light_cone(r.positions, t);
        record.distributions.push_back(config.raw_coordinates ? d : convert_uni_to_bi(d, t));
        record.loss.push_back(r.loss);
      }
      const auto reference = ideal_uni(config, initial, !config.raw_coordinates);
      record.similarity = metrics::similarity_series(record.distributions, reference);
      break;
    }
  }
  record.diffusion = metrics::series(record.distributions, diffusion_or_postselected);
  record.wall_clock_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
          .count();
  return record;
}

std::vector<topology::SweepRow> cmd_sweep(const SweepConfig& config, unsigned threads) {
  if (config.engine != Engine::Qutrit) {
    return topology::run_sweep(config.plan, topology::ideal_evaluator, threads);
  }
  config.noise.validate();
  config.layout.validate();
  const auto evaluate = [&config](const CoinProfile& profile, const WalkState& initial,
                                  int t) {
    const chain::Circuit circuit = chain::compile_walk(
        t, map_profile_bi_to_uni(profile, t), initial.at(0), config.layout);
    const chain::ChainState final_state =
        chain::simulate(circuit, config.noise, config.layout);
    const auto readout =
        chain::measure_positions(final_state, config.layout, config.noise, t);
    return convert_uni_to_bi(light_cone(readout.positions, t), t);
  };
  return topology::run_sweep(config.plan, evaluate, threads);
}

std::vector<metrics::SeriesPoint> cmd_compare(const RunRecord& a, const RunRecord& b) {
  if (a.coordinates != b.coordinates) {
    throw Error("compare: records use different coordinates (" + a.coordinates +
                " vs " + b.coordinates + ")");
  }
  bool same_steps = a.distributions.size() == b.distributions.size();
  for (std::size_t i = 0; same_steps && i < a.distributions.size(); ++i) {
    same_steps = a.distributions[i].step() == b.distributions[i].step();
  }
  if (!same_steps) throw Error("compare: mismatched step ranges");
  return metrics::similarity_series(a.distributions, b.distributions);
}

}  // namespace qwalk::io
