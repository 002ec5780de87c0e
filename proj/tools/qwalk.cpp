// qwalk: command-line front end.
//
//   qwalk walk    --config run.json [--out F] [--format csv|json|svg-heatmap]
//                 [--seed N] [--raw-coordinates] [--timing] [--dump-circuit F]
//   qwalk sweep   --config sweep.json [--out F] [--threads N]
//   qwalk compare A.json B.json [--out F]
//   qwalk heatmap RECORD.json [--out F]
//
// Output goes to stdout when no path is given. Exit status: 0 success,
// 1 run failure, 2 invalid configuration or arguments.

#include <CLI11.hpp>
#include <iostream>

#include "qwalk/io.hpp"

namespace {

using qwalk::io::Json;

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
  } else {
    qwalk::io::write_file(path, text);
  }
}

Json read_json(const std::string& path) {
  try {
    return Json::parse(qwalk::io::read_file(path));
  } catch (const Json::parse_error& e) {
    throw qwalk::Error(path + ": invalid JSON: " + e.what());
  }
}

struct WalkArgs {
  std::string config;
  std::string out;
  std::string format;
  std::optional<std::uint64_t> seed;
  bool raw = false;
  bool timing = false;
  std::string dump_circuit;
};

int run_walk(const WalkArgs& a) {
  Json json = read_json(a.config);
  // Command-line flags override the file before validation.
  if (json.is_object()) {
    if (!a.out.empty()) json["output"]["path"] = a.out;
    if (!a.format.empty()) json["output"]["format"] = a.format;
    if (a.seed) json["seed"] = *a.seed;
    if (a.raw) json["raw_coordinates"] = true;
  }
  const qwalk::io::ExperimentConfig config = qwalk::io::parse_config(json);

  if (!a.dump_circuit.empty()) {
    if (config.engine != qwalk::io::Engine::Qutrit) {
      throw qwalk::io::ConfigError("engine", "--dump-circuit needs the qutrit engine");
    }
    const auto profile = config.profile.kind() == qwalk::CoinProfile::Kind::PerStepTable
                             ? config.profile
                             : qwalk::map_profile_bi_to_uni(config.profile, config.steps);
    const auto circuit = qwalk::chain::compile_walk(
        config.steps, profile, qwalk::io::initial_walk_state(config).at(0), config.layout);
    qwalk::io::write_file(a.dump_circuit, qwalk::io::to_json(circuit).dump(2) + "\n");
  }

  const qwalk::io::RunRecord record = qwalk::io::cmd_walk(config);
  std::string text;
  switch (config.format) {
    case qwalk::io::OutputFormat::Csv:
      text = qwalk::io::distributions_csv(record);
      break;
    case qwalk::io::OutputFormat::Json:
      text = qwalk::io::to_json(record, a.timing).dump(2) + "\n";
      break;
    case qwalk::io::OutputFormat::SvgHeatmap:
      text = qwalk::io::heatmap_svg(record);
      break;
  }
  emit(config.output_path, text);
  if (a.timing && record.wall_clock_ms) {
    std::cerr << "wall_clock_ms " << qwalk::io::format_number(*record.wall_clock_ms) << '\n';
  }
  return 0;
}

int run_sweep(const std::string& config_path, const std::string& out, unsigned threads) {
  Json json = read_json(config_path);
  if (json.is_object() && !out.empty()) json["output"]["path"] = out;
  const auto config = qwalk::io::parse_sweep_config(json);
  emit(config.output_path, qwalk::io::sweep_csv(qwalk::io::cmd_sweep(config, threads)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coined quantum walks: ideal engines, qutrit-chain simulation, edge-state sweeps"};
  app.set_version_flag("--version", qwalk::io::kToolVersion);
  app.require_subcommand(1);

  WalkArgs walk;
  auto* walk_cmd = app.add_subcommand("walk", "Run one walk and write its distributions");
  walk_cmd->add_option("--config", walk.config, "Experiment config (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  walk_cmd->add_option("--out", walk.out, "Output path (default: config, else stdout)");
  walk_cmd->add_option("--format", walk.format, "csv, json or svg-heatmap")
      ->check(CLI::IsMember({"csv", "json", "svg-heatmap"}));
  walk_cmd->add_option("--seed", walk.seed, "Sampling seed (qutrit engine with shots)");
  walk_cmd->add_flag("--raw-coordinates", walk.raw,
                     "Keep unidirectional positions instead of converting");
  walk_cmd->add_flag("--timing", walk.timing, "Record wall-clock time");
  walk_cmd->add_option("--dump-circuit", walk.dump_circuit,
                       "Write the compiled qutrit circuit as JSON");

  std::string sweep_config;
  std::string sweep_out;
  unsigned threads = 0;
  auto* sweep_cmd = app.add_subcommand("sweep", "Edge-probability sweep over coin angles");
  sweep_cmd->add_option("--config", sweep_config, "Sweep config (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  sweep_cmd->add_option("--out", sweep_out, "Output CSV (default: config, else stdout)");
  sweep_cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");

  std::string record_a;
  std::string record_b;
  std::string compare_out;
  auto* compare_cmd = app.add_subcommand("compare", "Per-step similarity of two run records");
  compare_cmd->add_option("run_a", record_a)->required()->check(CLI::ExistingFile);
  compare_cmd->add_option("run_b", record_b)->required()->check(CLI::ExistingFile);
  compare_cmd->add_option("--out", compare_out, "Output CSV (default: stdout)");

  std::string heatmap_record;
  std::string heatmap_out;
  auto* heatmap_cmd = app.add_subcommand("heatmap", "Render a run record as an SVG heatmap");
  heatmap_cmd->add_option("record", heatmap_record)->required()->check(CLI::ExistingFile);
  heatmap_cmd->add_option("--out", heatmap_out, "Output SVG (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*walk_cmd) return run_walk(walk);
    if (*sweep_cmd) return run_sweep(sweep_config, sweep_out, threads);
    if (*compare_cmd) {
      const auto rows = qwalk::io::cmd_compare(qwalk::io::load_record(record_a),
                                               qwalk::io::load_record(record_b));
      emit(compare_out, qwalk::io::similarity_csv(rows));
      return 0;
    }
    if (*heatmap_cmd) {
      emit(heatmap_out, qwalk::io::heatmap_svg(qwalk::io::load_record(heatmap_record)));
      return 0;
    }
  } catch (const qwalk::io::ConfigError& e) {
    std::cerr << "qwalk: invalid config: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "qwalk: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
