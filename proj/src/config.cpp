#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "qwalk/io.hpp"

namespace qwalk::io {

namespace {

// Fails on keys outside `allowed` so that typos do not silently fall back to
// defaults.
void check_keys(const Json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(path, "expected an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& item : obj.items()) {
    if (!keys.count(item.key())) {
      throw ConfigError(path.empty() ? item.key() : path + "." + item.key(),
                        "unknown field");
    }
  }
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

double angle_field(const Json& obj, const std::string& path,
                   const std::string& key) {
  if (!obj.contains(key)) throw ConfigError(join(path, key), "missing");
  try {
    return parse_angle(obj.at(key));
  } catch (const Error& e) {
    throw ConfigError(join(path, key), e.what());
  }
}

template <typename T>
T number_field(const Json& obj, const std::string& path, const std::string& key,
               T fallback) {
  if (!obj.contains(key)) return fallback;
  const Json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(join(path, key), "expected a number");
  if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) {
      throw ConfigError(join(path, key), "expected an integer");
    }
    if constexpr (std::is_unsigned_v<T>) {
      if (v.get<std::int64_t>() < 0) {
        throw ConfigError(join(path, key), "must be non-negative");
      }
    }
  }
  return v.get<T>();
}

std::string string_field(const Json& obj, const std::string& path,
                         const std::string& key, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_string()) {
    throw ConfigError(join(path, key), "expected a string");
  }
  return obj.at(key).get<std::string>();
}

// Lifetimes: number of microseconds, or null / "inf" for no decay.
double lifetime_field(const Json& obj, const std::string& path,
                      const std::string& key) {
  if (!obj.contains(key) || obj.at(key).is_null()) return chain::kNoDecay;
  const Json& v = obj.at(key);
  if (v.is_string() && (v == "inf" || v == "infinity")) return chain::kNoDecay;
  if (!v.is_number()) {
    throw ConfigError(join(path, key), "expected microseconds, null or \"inf\"");
  }
  const double t1 = v.get<double>();
  if (!(t1 > 0.0)) throw ConfigError(join(path, key), "lifetime must be positive");
  return t1;
}

Json lifetime_json(double t1) {
  return std::isfinite(t1) ? Json(t1) : Json(nullptr);
}

Complex complex_field(const Json& v, const std::string& path) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  throw ConfigError(path, "expected a number or [re, im]");
}

AngleConvention parse_convention(const Json& obj, const std::string& path) {
  const std::string c = string_field(obj, path, "convention", "half");
  if (c == "half") return AngleConvention::Half;
  if (c == "full") return AngleConvention::Full;
  throw ConfigError(join(path, "convention"), "expected \"half\" or \"full\"");
}

const char* to_string(AngleConvention c) {
  return c == AngleConvention::Full ? "full" : "half";
}

CoinProfile parse_profile(const Json& obj, const std::string& path) {
  check_keys(obj, path,
             {"kind", "theta", "theta_minus", "theta_plus", "boundary", "axis",
              "convention", "table"});
  const std::string kind = string_field(obj, path, "kind", "two-domain");
  const AngleConvention conv = parse_convention(obj, path);
  const double axis = obj.contains("axis") ? angle_field(obj, path, "axis") : 0.0;
  if (kind == "homogeneous") {
    return CoinProfile::homogeneous(angle_field(obj, path, "theta"), conv, axis);
  }
  if (kind == "two-domain") {
    return CoinProfile::two_domain(angle_field(obj, path, "theta_minus"),
                                   angle_field(obj, path, "theta_plus"),
                                   number_field<int>(obj, path, "boundary", 0),
                                   conv, axis);
  }
  if (kind == "per-step-table") {
    const std::string tpath = join(path, "table");
    if (!obj.contains("table") || !obj.at("table").is_array()) {
      throw ConfigError(tpath, "expected an array of {step, x, theta}");
    }
    CoinProfile::Table table;
    const Json& rows = obj.at("table");
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const std::string rpath = tpath + "[" + std::to_string(i) + "]";
      check_keys(rows[i], rpath, {"step", "x", "theta"});
      const int step = number_field<int>(rows[i], rpath, "step", 0);
      if (step < 1) throw ConfigError(join(rpath, "step"), "steps are 1-based");
      const int x = number_field<int>(rows[i], rpath, "x", 0);
      if (!table.emplace(std::pair{step, x}, angle_field(rows[i], rpath, "theta"))
               .second) {
        throw ConfigError(rpath, "duplicate (step, x) entry");
      }
    }
    return CoinProfile::per_step_table(std::move(table), conv, axis);
  }
  throw ConfigError(join(path, "kind"),
                    "expected homogeneous, two-domain or per-step-table");
}

Json profile_json(const CoinProfile& p) {
  Json j;
  j["convention"] = to_string(p.convention());
  j["axis"] = p.axis();
  switch (p.kind()) {
    case CoinProfile::Kind::Homogeneous:
      j["kind"] = "homogeneous";
      j["theta"] = p.theta_plus();
      break;
    case CoinProfile::Kind::TwoDomain:
      j["kind"] = "two-domain";
      j["theta_minus"] = p.theta_minus();
      j["theta_plus"] = p.theta_plus();
      j["boundary"] = p.boundary();
      break;
    case CoinProfile::Kind::PerStepTable: {
      j["kind"] = "per-step-table";
      Json rows = Json::array();
      for (const auto& [key, theta] : p.table()) {
        rows.push_back({{"step", key.first}, {"x", key.second}, {"theta", theta}});
      }
      j["table"] = std::move(rows);
      break;
    }
  }
  return j;
}

chain::NoiseModel parse_noise(const Json& obj, const std::string& path) {
  check_keys(obj, path,
             {"t1_qutrit_e_us", "t1_qutrit_f_us", "t1_shift_qubit_us",
              "over_rotation", "swap_error", "readout_error"});
  chain::NoiseModel n;
  n.t1_qutrit_e_us = lifetime_field(obj, path, "t1_qutrit_e_us");
  n.t1_qutrit_f_us = lifetime_field(obj, path, "t1_qutrit_f_us");
  n.t1_shift_qubit_us = lifetime_field(obj, path, "t1_shift_qubit_us");
  n.over_rotation = number_field<double>(obj, path, "over_rotation", 0.0);
  n.swap_error = number_field<double>(obj, path, "swap_error", 0.0);
  n.readout_error = number_field<double>(obj, path, "readout_error", 0.0);
  for (const char* key : {"swap_error", "readout_error"}) {
    const double p = key == std::string("swap_error") ? n.swap_error : n.readout_error;
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(join(path, key), "must lie in [0, 1]");
  }
  return n;
}

Json noise_json(const chain::NoiseModel& n) {
  return {{"t1_qutrit_e_us", lifetime_json(n.t1_qutrit_e_us)},
          {"t1_qutrit_f_us", lifetime_json(n.t1_qutrit_f_us)},
          {"t1_shift_qubit_us", lifetime_json(n.t1_shift_qubit_us)},
          {"over_rotation", n.over_rotation},
          {"swap_error", n.swap_error},
          {"readout_error", n.readout_error}};
}

chain::ChainLayout parse_layout(const Json& obj, const std::string& path) {
  check_keys(obj, path, {"n_qutrits", "durations_ns"});
  chain::ChainLayout layout;
  layout.n_qutrits = number_field<int>(obj, path, "n_qutrits", layout.n_qutrits);
  if (layout.n_qutrits < 1) {
    throw ConfigError(join(path, "n_qutrits"), "must be at least 1");
  }
  if (obj.contains("durations_ns")) {
    const std::string dpath = join(path, "durations_ns");
    const Json& d = obj.at("durations_ns");
    check_keys(d, dpath, {"su2_ef", "swap", "pi_ge"});
    auto& dur = layout.durations;
    dur.su2_ef = number_field<double>(d, dpath, "su2_ef", dur.su2_ef);
    dur.swap = number_field<double>(d, dpath, "swap", dur.swap);
    dur.pi_ge = number_field<double>(d, dpath, "pi_ge", dur.pi_ge);
    for (const auto& [key, value] :
         {std::pair{"su2_ef", dur.su2_ef}, {"swap", dur.swap}, {"pi_ge", dur.pi_ge}}) {
      if (!(value > 0.0)) throw ConfigError(join(dpath, key), "must be positive");
    }
  }
  return layout;
}

Json layout_json(const chain::ChainLayout& l) {
  return {{"n_qutrits", l.n_qutrits},
          {"durations_ns",
           {{"su2_ef", l.durations.su2_ef},
            {"swap", l.durations.swap},
            {"pi_ge", l.durations.pi_ge}}}};
}

void parse_initial(const Json& v, ExperimentConfig& cfg) {
  if (v.is_string()) {
    const std::string name = v.get<std::string>();
    if (name != "phi_co" && name != "phi_ce") {
      throw ConfigError("initial", "expected \"phi_co\", \"phi_ce\" or {\"custom\": [...]}");
    }
    cfg.initial_name = name;
    return;
  }
  check_keys(v, "initial", {"custom"});
  const Json& rows = v.at("custom");
  if (!rows.is_array() || rows.empty()) {
    throw ConfigError("initial.custom", "expected a non-empty array");
  }
  std::map<int, CoinVector> amps;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string rpath = "initial.custom[" + std::to_string(i) + "]";
    check_keys(rows[i], rpath, {"x", "coin0", "coin1"});
    const int x = number_field<int>(rows[i], rpath, "x", 0);
    const Complex c0 =
        rows[i].contains("coin0") ? complex_field(rows[i].at("coin0"), join(rpath, "coin0")) : Complex{};
    const Complex c1 =
        rows[i].contains("coin1") ? complex_field(rows[i].at("coin1"), join(rpath, "coin1")) : Complex{};
    if (!amps.emplace(x, CoinVector{c0, c1}).second) {
      throw ConfigError(rpath, "duplicate position");
    }
  }
  const int lo = amps.begin()->first;
  const int hi = amps.rbegin()->first + 1;
  std::vector<CoinVector> window(static_cast<std::size_t>(hi - lo));
  for (const auto& [x, v2] : amps) window[static_cast<std::size_t>(x - lo)] = v2;
  cfg.initial_name = "custom";
  cfg.custom = WalkState(lo, std::move(window));
  if (!(cfg.custom.norm_squared() > 0.0)) {
    throw ConfigError("initial.custom", "initial state has zero norm");
  }
}

Json initial_json(const ExperimentConfig& cfg) {
  if (cfg.initial_name != "custom") return cfg.initial_name;
  Json rows = Json::array();
  for (int x = cfg.custom.begin_x(); x < cfg.custom.end_x(); ++x) {
    const CoinVector v = cfg.custom.at(x);
    if (v[0] == Complex{} && v[1] == Complex{}) continue;
    rows.push_back({{"x", x},
                    {"coin0", {v[0].real(), v[0].imag()}},
                    {"coin1", {v[1].real(), v[1].imag()}}});
  }
  return {{"custom", rows}};
}

void parse_output(const Json& obj, std::string& path_out, OutputFormat* format) {
  if (format) {
    check_keys(obj, "output", {"path", "format"});
  } else {
    check_keys(obj, "output", {"path"});
  }
  path_out = string_field(obj, "output", "path", "");
  if (format && obj.contains("format")) {
    try {
      *format = parse_format(string_field(obj, "output", "format", "csv"));
    } catch (const Error& e) {
      throw ConfigError("output.format", e.what());
    }
  }
}

Engine engine_field(const Json& json) {
  try {
    return parse_engine(string_field(json, "", "engine", "ideal-bi"));
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("engine", e.what());
  }
}

std::vector<double> parse_grid(const Json& v, const std::string& path) {
  std::vector<double> grid;
  if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      try {
        grid.push_back(parse_angle(v[i]));
      } catch (const Error& e) {
        throw ConfigError(path + "[" + std::to_string(i) + "]", e.what());
      }
    }
    return grid;
  }
  check_keys(v, path, {"from", "to", "count"});
  const double from = angle_field(v, path, "from");
  const double to = angle_field(v, path, "to");
  const int count = number_field<int>(v, path, "count", 0);
  if (count < 0) throw ConfigError(join(path, "count"), "must be non-negative");
  for (int i = 0; i < count; ++i) {
    grid.push_back(count == 1 ? from
                              : from + (to - from) * i / static_cast<double>(count - 1));
  }
  return grid;
}

}  // namespace

ConfigError::ConfigError(std::string path, const std::string& message)
    : Error(path + ": " + message), path_(std::move(path)) {}

double parse_angle(const std::string& text) {
  // [sign] [number] ['*'] ['pi'] ['/' number], whitespace ignored.
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) {
      s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  const auto fail = [&]() -> double {
    throw Error("cannot parse angle \"" + text + "\"");
  };
  if (s.empty()) return fail();

  std::size_t pos = 0;
  double sign = 1.0;
  if (s[pos] == '+' || s[pos] == '-') {
    sign = s[pos] == '-' ? -1.0 : 1.0;
    ++pos;
  }
  double coefficient = 1.0;
  bool have_number = false;
  if (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.')) {
    std::size_t used = 0;
    try {
      coefficient = std::stod(s.substr(pos), &used);
    } catch (const std::exception&) {
      return fail();
    }
    pos += used;
    have_number = true;
  }
  bool have_pi = false;
  if (pos < s.size() && s[pos] == '*') {
    if (!have_number) return fail();
    ++pos;
  }
  if (s.compare(pos, 2, "pi") == 0) {
    have_pi = true;
    pos += 2;
  } else if (have_number && pos > 0 && s[pos - 1] == '*') {
    return fail();
  }
  if (!have_number && !have_pi) return fail();
  double denominator = 1.0;
  if (pos < s.size() && s[pos] == '/') {
    ++pos;
    std::size_t used = 0;
    try {
      denominator = std::stod(s.substr(pos), &used);
    } catch (const std::exception&) {
      return fail();
    }
    pos += used;
    if (denominator == 0.0) return fail();
  }
  if (pos != s.size()) return fail();
  const double value =
      sign * coefficient * (have_pi ? std::numbers::pi : 1.0) / denominator;
  if (!std::isfinite(value)) return fail();
  return value;
}

double parse_angle(const Json& value) {
  if (value.is_number()) return value.get<double>();
  if (value.is_string()) return parse_angle(value.get<std::string>());
  throw Error("expected an angle (number or string such as \"pi/4\")");
}

const char* to_string(Engine engine) {
  switch (engine) {
    case Engine::IdealUni:
      return "ideal-uni";
    case Engine::IdealBi:
      return "ideal-bi";
    case Engine::Qutrit:
      return "qutrit";
  }
  return "?";
}

const char* to_string(OutputFormat format) {
  switch (format) {
    case OutputFormat::Csv:
      return "csv";
    case OutputFormat::Json:
      return "json";
    case OutputFormat::SvgHeatmap:
      return "svg-heatmap";
  }
  return "?";
}

Engine parse_engine(const std::string& text) {
  if (text == "ideal-uni") return Engine::IdealUni;
  if (text == "ideal-bi") return Engine::IdealBi;
  if (text == "qutrit") return Engine::Qutrit;
  throw Error("unknown engine \"" + text + "\" (ideal-uni, ideal-bi, qutrit)");
}

OutputFormat parse_format(const std::string& text) {
  if (text == "csv") return OutputFormat::Csv;
  if (text == "json") return OutputFormat::Json;
  if (text == "svg-heatmap") return OutputFormat::SvgHeatmap;
  throw Error("unknown format \"" + text + "\" (csv, json, svg-heatmap)");
}

WalkState initial_walk_state(const ExperimentConfig& config) {
  if (config.initial_name == "phi_co") return initial_state(NamedInitial::PhiCo);
  if (config.initial_name == "phi_ce") return initial_state(NamedInitial::PhiCe);
  return initial_state(config.custom);
}

ExperimentConfig parse_config(const Json& json) {
  check_keys(json, "",
             {"engine", "steps", "profile", "initial", "noise", "layout", "output",
              "seed", "shots", "raw_coordinates"});
  ExperimentConfig cfg;
  cfg.engine = engine_field(json);
  if (!json.contains("steps")) throw ConfigError("steps", "missing");
  cfg.steps = number_field<int>(json, "", "steps", 0);
  if (cfg.steps < 0) throw ConfigError("steps", "must be non-negative");
  if (!json.contains("profile")) throw ConfigError("profile", "missing");
  cfg.profile = parse_profile(json.at("profile"), "profile");
  if (json.contains("initial")) parse_initial(json.at("initial"), cfg);
  if (json.contains("noise")) cfg.noise = parse_noise(json.at("noise"), "noise");
  if (json.contains("layout")) cfg.layout = parse_layout(json.at("layout"), "layout");
  if (json.contains("output")) parse_output(json.at("output"), cfg.output_path, &cfg.format);
  cfg.seed = number_field<std::uint64_t>(json, "", "seed", 0);
  cfg.shots = number_field<std::uint64_t>(json, "", "shots", 0);
  if (json.contains("raw_coordinates")) {
    if (!json.at("raw_coordinates").is_boolean()) {
      throw ConfigError("raw_coordinates", "expected true or false");
    }
    cfg.raw_coordinates = json.at("raw_coordinates").get<bool>();
  }

  if (cfg.engine != Engine::Qutrit) {
    if (!cfg.noise.is_ideal()) throw ConfigError("noise", "only the qutrit engine models noise");
    if (cfg.shots != 0) throw ConfigError("shots", "only the qutrit engine samples shots");
  }
  if (cfg.engine == Engine::IdealBi && cfg.raw_coordinates) {
    throw ConfigError("raw_coordinates", "the ideal-bi engine has no unidirectional output");
  }
  if (cfg.engine == Engine::Qutrit && cfg.initial_name == "custom" &&
      !(cfg.custom.size() == 1 && cfg.custom.begin_x() == 0)) {
    throw ConfigError("initial.custom", "the qutrit engine needs a state at x=0 only");
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  Json json;
  try {
    json = Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw Error(path + ": invalid JSON: " + e.what());
  }
  return parse_config(json);
}

Json to_json(const ExperimentConfig& c) {
  return {{"engine", to_string(c.engine)},
          {"steps", c.steps},
          {"profile", profile_json(c.profile)},
          {"initial", initial_json(c)},
          {"noise", noise_json(c.noise)},
          {"layout", layout_json(c.layout)},
          {"output", {{"path", c.output_path}, {"format", to_string(c.format)}}},
          {"seed", c.seed},
          {"shots", c.shots},
          {"raw_coordinates", c.raw_coordinates}};
}

SweepConfig parse_sweep_config(const Json& json) {
  check_keys(json, "", {"sweep", "engine", "noise", "layout", "output"});
  SweepConfig cfg;
  cfg.engine = engine_field(json);
  if (!json.contains("sweep")) throw ConfigError("sweep", "missing");
  const Json& s = json.at("sweep");
  check_keys(s, "sweep", {"mode", "fixed", "grid", "steps", "initial"});

  const std::string mode = string_field(s, "sweep", "mode", "");
  if (mode == "fix-plus-vary-minus") {
    cfg.plan.mode = topology::SweepMode::FixPlusVaryMinus;
    cfg.plan.fixed = angle_field(s, "sweep", "fixed");
  } else if (mode == "antisymmetric") {
    cfg.plan.mode = topology::SweepMode::Antisymmetric;
    if (s.contains("fixed")) throw ConfigError("sweep.fixed", "not used by antisymmetric sweeps");
  } else {
    throw ConfigError("sweep.mode", "expected fix-plus-vary-minus or antisymmetric");
  }
  if (!s.contains("grid")) throw ConfigError("sweep.grid", "missing");
  cfg.plan.grid = parse_grid(s.at("grid"), "sweep.grid");

  if (!s.contains("steps") || !s.at("steps").is_array()) {
    throw ConfigError("sweep.steps", "expected an array of step counts");
  }
  for (std::size_t i = 0; i < s.at("steps").size(); ++i) {
    const Json& v = s.at("steps")[i];
    if (!v.is_number_integer()) {
      throw ConfigError("sweep.steps[" + std::to_string(i) + "]", "expected an integer");
    }
    cfg.plan.steps.push_back(v.get<int>());
  }
  const std::string initial = string_field(s, "sweep", "initial", "phi_ce");
  if (initial == "phi_ce") {
    cfg.plan.initial = topology::SweepInitial::PhiCe;
  } else if (initial == "phi_co") {
    cfg.plan.initial = topology::SweepInitial::PhiCo;
  } else if (initial == "interface") {
    cfg.plan.initial = topology::SweepInitial::Interface;
  } else {
    throw ConfigError("sweep.initial", "expected phi_ce, phi_co or interface");
  }
  try {
    cfg.plan.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    const std::string what = e.what();
    throw ConfigError(what.find("grid") != std::string::npos ? "sweep.grid" : "sweep.steps",
                      what);
  }

  if (json.contains("noise")) cfg.noise = parse_noise(json.at("noise"), "noise");
  if (json.contains("layout")) cfg.layout = parse_layout(json.at("layout"), "layout");
  if (json.contains("output")) parse_output(json.at("output"), cfg.output_path, nullptr);
  if (cfg.engine != Engine::Qutrit && !cfg.noise.is_ideal()) {
    throw ConfigError("noise", "only the qutrit engine models noise");
  }
  return cfg;
}

Json to_json(const SweepConfig& c) {
  const char* mode = c.plan.mode == topology::SweepMode::FixPlusVaryMinus
                         ? "fix-plus-vary-minus"
                         : "antisymmetric";
  const char* initial = c.plan.initial == topology::SweepInitial::PhiCe   ? "phi_ce"
                        : c.plan.initial == topology::SweepInitial::PhiCo ? "phi_co"
                                                                          : "interface";
  Json sweep = {{"mode", mode},
                {"grid", c.plan.grid},
                {"steps", c.plan.steps},
                {"initial", initial}};
  if (c.plan.mode == topology::SweepMode::FixPlusVaryMinus) sweep["fixed"] = c.plan.fixed;
  return {{"sweep", sweep},
          {"engine", to_string(c.engine)},
          {"noise", noise_json(c.noise)},
          {"layout", layout_json(c.layout)},
          {"output", {{"path", c.output_path}}}};
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << text;
  out.flush();
  if (!out) throw Error("failed writing " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace qwalk::io
