#pragma once

// Experiment configuration, run records and their file formats.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qwalk/chain.hpp"
#include "qwalk/distribution.hpp"
#include "qwalk/metrics.hpp"
#include "qwalk/topology.hpp"
#include "qwalk/walk.hpp"

namespace qwalk::io {

using Json = nlohmann::json;

inline constexpr const char* kToolVersion = "qwalk 0.3.0";

/// Invalid configuration; `path()` names the offending field, e.g.
/// "profile.theta_plus".
class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& message);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Parses a radian value: a number, or a string such as "pi/4", "-3pi/4",
/// "3*pi/8", "0.5pi", "1.2". Throws Error on anything else.
double parse_angle(const std::string& text);
double parse_angle(const Json& value);
inline double parse_angle(const char* text) { return parse_angle(std::string(text)); }

enum class Engine { IdealUni, IdealBi, Qutrit };
enum class OutputFormat { Csv, Json, SvgHeatmap };

const char* to_string(Engine engine);
const char* to_string(OutputFormat format);
Engine parse_engine(const std::string& text);
OutputFormat parse_format(const std::string& text);

struct ExperimentConfig {
  Engine engine = Engine::IdealBi;
  int steps = 0;
  /// Two-domain and homogeneous profiles are in bidirectional coordinates and
  /// mapped for the unidirectional and qutrit engines. Per-step tables are
  /// used as given, in the engine's own coordinates.
  CoinProfile profile;
  /// "phi_co", "phi_ce" or "custom".
  std::string initial_name = "phi_co";
  WalkState custom;  ///< amplitudes as given when initial_name == "custom"
  chain::NoiseModel noise;
  chain::ChainLayout layout;
  std::string output_path;
  OutputFormat format = OutputFormat::Csv;
  std::uint64_t seed = 0;
  std::uint64_t shots = 0;  ///< qutrit engine: 0 = exact populations
  bool raw_coordinates = false;
};

/// Normalized initial state of a config.
WalkState initial_walk_state(const ExperimentConfig& config);

ExperimentConfig parse_config(const Json& json);
ExperimentConfig load_config(const std::string& path);

/// Canonical form: every field present, angles as numbers. Re-parsing gives
/// an equal config and the same canonical JSON.
Json to_json(const ExperimentConfig& config);

struct SweepConfig {
  topology::SweepPlan plan;
  Engine engine = Engine::IdealBi;
  chain::NoiseModel noise;
  chain::ChainLayout layout;
  std::string output_path;
};

SweepConfig parse_sweep_config(const Json& json);
Json to_json(const SweepConfig& config);

struct RunRecord {
  Json config;  ///< canonical config echo
  /// "bidirectional" or "unidirectional".
  std::string coordinates = "bidirectional";
  std::vector<Distribution> distributions;  ///< one per step, 0..t
  std::vector<double> loss;                 ///< one per step
  std::vector<metrics::SeriesPoint> diffusion;
  /// Against the ideal engine; qutrit engine only.
  std::vector<metrics::SeriesPoint> similarity;
  std::string tool_version = kToolVersion;
  /// Measured per run; serialized only on request so that files stay
  /// byte-identical across runs.
  std::optional<double> wall_clock_ms;

  bool operator==(const RunRecord& other) const;
};

Json to_json(const RunRecord& record, bool include_timing = false);
RunRecord record_from_json(const Json& json);
RunRecord load_record(const std::string& path);

/// Probabilities and metrics printed with 12 significant digits.
std::string format_number(double value);

/// Header "step,x=<lo>,...,x=<hi>,total,loss,diffusion_distance[,similarity]"
/// and one row per step; LF line endings.
std::string distributions_csv(const RunRecord& record);

/// Header "theta_swept_rad,steps,p_edge".
std::string sweep_csv(const std::vector<topology::SweepRow>& rows);

/// Header "step,similarity".
std::string similarity_csv(const std::vector<metrics::SeriesPoint>& rows);

/// RFC 4180 field quoting.
std::string csv_field(const std::string& text);

/// SVG heatmap: position on x, step on y (step 0 at the top), shade by
/// probability. Throws on an empty record.
std::string heatmap_svg(const RunRecord& record);

/// {"steps", "layers": [{"role", "step", "gates": [{"kind", "target",
/// "theta", "axis"}]}]}; angles only on SU2ef gates.
Json to_json(const chain::Circuit& circuit);

RunRecord cmd_walk(const ExperimentConfig& config);
std::vector<topology::SweepRow> cmd_sweep(const SweepConfig& config,
                                          unsigned threads = 0);
/// Throws when the records cover different steps.
std::vector<metrics::SeriesPoint> cmd_compare(const RunRecord& a,
                                              const RunRecord& b);
void emit_heatmap(const RunRecord& record, const std::string& path);

/// Writes `text` to `path`; throws Error on I/O failure.
void write_file(const std::string& path, const std::string& text);
std::string read_file(const std::string& path);

}  // namespace qwalk::io
