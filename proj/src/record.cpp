#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "qwalk/io.hpp"

namespace qwalk::io {

namespace {

Json series_json(const std::vector<metrics::SeriesPoint>& s) {
  Json out = Json::array();
  for (const auto& p : s) out.push_back({{"step", p.step}, {"value", p.value}});
  return out;
}

std::vector<metrics::SeriesPoint> series_from_json(const Json& j) {
  std::vector<metrics::SeriesPoint> out;
  for (const auto& p : j) out.push_back({p.at("step").get<int>(), p.at("value").get<double>()});
  return out;
}

bool same_series(const std::vector<metrics::SeriesPoint>& a,
                 const std::vector<metrics::SeriesPoint>& b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(),
                    [](const auto& x, const auto& y) {
                      return x.step == y.step && x.value == y.value;
                    });
}

bool same_distribution(const Distribution& a, const Distribution& b) {
  return a.offset() == b.offset() && a.step() == b.step() && a.probs() == b.probs();
}

std::string svg_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

bool RunRecord::operator==(const RunRecord& o) const {
  return config == o.config && coordinates == o.coordinates &&
         std::equal(distributions.begin(), distributions.end(),
                    o.distributions.begin(), o.distributions.end(),
                    same_distribution) &&
         loss == o.loss && same_series(diffusion, o.diffusion) &&
         same_series(similarity, o.similarity) && tool_version == o.tool_version &&
         wall_clock_ms == o.wall_clock_ms;
}

Json to_json(const RunRecord& r, bool include_timing) {
  Json steps = Json::array();
  for (std::size_t i = 0; i < r.distributions.size(); ++i) {
    const Distribution& d = r.distributions[i];
    steps.push_back({{"step", d.step()},
                     {"offset", d.offset()},
                     {"probs", d.probs()},
                     {"loss", i < r.loss.size() ? r.loss[i] : 0.0}});
  }
  Json j = {{"tool_version", r.tool_version},
            {"config", r.config},
            {"coordinates", r.coordinates},
            {"steps", steps},
            {"diffusion_distance", series_json(r.diffusion)},
            {"similarity", series_json(r.similarity)}};
  if (include_timing && r.wall_clock_ms) j["wall_clock_ms"] = *r.wall_clock_ms;
  return j;
}

RunRecord record_from_json(const Json& j) {
  try {
    RunRecord r;
    r.tool_version = j.at("tool_version").get<std::string>();
    r.config = j.at("config");
    r.coordinates = j.at("coordinates").get<std::string>();
    for (const auto& s : j.at("steps")) {
      r.distributions.emplace_back(s.at("offset").get<int>(),
                                   s.at("probs").get<std::vector<double>>(),
                                   s.at("step").get<int>());
      r.loss.push_back(s.at("loss").get<double>());
    }
    r.diffusion = series_from_json(j.at("diffusion_distance"));
    r.similarity = series_from_json(j.at("similarity"));
    if (j.contains("wall_clock_ms")) r.wall_clock_ms = j.at("wall_clock_ms").get<double>();
    return r;
  } catch (const Json::exception& e) {
    throw Error(std::string("malformed run record: ") + e.what());
  }
}

RunRecord load_record(const std::string& path) {
  try {
    return record_from_json(Json::parse(read_file(path)));
  } catch (const Json::parse_error& e) {
    throw Error(path + ": invalid JSON: " + e.what());
  }
}

std::string format_number(double value) {
  if (value == 0.0) return "0";  // no "-0"
  if (std::isnan(value)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\r\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string distributions_csv(const RunRecord& record) {
  if (record.distributions.empty()) return "step\n";
  int lo = std::numeric_limits<int>::max();
  int hi = std::numeric_limits<int>::min();
  for (const auto& d : record.distributions) {
    lo = std::min(lo, d.begin_x());
    hi = std::max(hi, d.end_x());
  }
  const bool with_similarity = !record.similarity.empty();

  std::ostringstream out;
  out << "step";
  for (int x = lo; x < hi; ++x) out << ',' << csv_field("x=" + std::to_string(x));
  out << ",total,loss,diffusion_distance";
  if (with_similarity) out << ",similarity";
  out << '\n';
  for (std::size_t i = 0; i < record.distributions.size(); ++i) {
    const Distribution& d = record.distributions[i];
    out << d.step();
    for (int x = lo; x < hi; ++x) out << ',' << format_number(d.at(x));
    out << ',' << format_number(d.total());
    out << ',' << format_number(i < record.loss.size() ? record.loss[i] : 0.0);
    out << ',' << (i < record.diffusion.size() ? format_number(record.diffusion[i].value) : "");
    if (with_similarity) {
      out << ',' << (i < record.similarity.size() ? format_number(record.similarity[i].value) : "");
    }
    out << '\n';
  }
  return out.str();
}

std::string sweep_csv(const std::vector<topology::SweepRow>& rows) {
  std::ostringstream out;
  out << "theta_swept_rad,steps,p_edge\n";
  for (const auto& r : rows) {
    out << format_number(r.theta_swept) << ',' << r.steps << ','
        << format_number(r.p_edge) << '\n';
  }
  return out.str();
}

std::string similarity_csv(const std::vector<metrics::SeriesPoint>& rows) {
  std::ostringstream out;
  out << "step,similarity\n";
  for (const auto& r : rows) out << r.step << ',' << format_number(r.value) << '\n';
  return out.str();
}

std::string heatmap_svg(const RunRecord& record) {
  if (record.distributions.empty()) throw Error("heatmap: record has no steps");
  int lo = std::numeric_limits<int>::max();
  int hi = std::numeric_limits<int>::min();
  double peak = 0.0;
  for (const auto& d : record.distributions) {
    lo = std::min(lo, d.begin_x());
    hi = std::max(hi, d.end_x());
    for (double p : d.probs()) peak = std::max(peak, p);
  }
  if (peak <= 0.0) peak = 1.0;

  constexpr double cell = 24.0;
  constexpr double left = 48.0;
  constexpr double top = 32.0;
  const int cols = hi - lo;
  const int rows = static_cast<int>(record.distributions.size());
  const double width = left + cols * cell + 16.0;
  const double height = top + rows * cell + 32.0;

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << svg_number(width)
      << "\" height=\"" << svg_number(height) << "\" viewBox=\"0 0 "
      << svg_number(width) << ' ' << svg_number(height) << "\">\n"
      << "<style>text{font-family:sans-serif;font-size:10px}</style>\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n"
      << "<text x=\"" << svg_number(left) << "\" y=\"14\">p(x, t), "
      << record.coordinates << " coordinates, peak " << format_number(peak)
      << "</text>\n";
  for (int r = 0; r < rows; ++r) {
    const Distribution& d = record.distributions[static_cast<std::size_t>(r)];
    const double y = top + r * cell;
    out << "<g class=\"row\" data-step=\"" << d.step() << "\">\n"
        << "<text x=\"4\" y=\"" << svg_number(y + cell * 0.65) << "\">t="
        << d.step() << "</text>\n";
    for (int x = lo; x < hi; ++x) {
      const double v = std::clamp(d.at(x) / peak, 0.0, 1.0);
      // White to dark blue.
      const int red = static_cast<int>(std::lround(255.0 * (1.0 - 0.9 * v)));
      const int green = static_cast<int>(std::lround(255.0 * (1.0 - 0.75 * v)));
      const int blue = static_cast<int>(std::lround(255.0 * (1.0 - 0.45 * v)));
      out << "<rect x=\"" << svg_number(left + (x - lo) * cell) << "\" y=\""
          << svg_number(y) << "\" width=\"" << svg_number(cell) << "\" height=\""
          << svg_number(cell) << "\" fill=\"rgb(" << red << ',' << green << ','
          << blue << ")\"><title>x=" << x << " p=" << format_number(d.at(x))
          << "</title></rect>\n";
    }
    out << "</g>\n";
  }
  for (int x = lo; x < hi; ++x) {
    out << "<text x=\"" << svg_number(left + (x - lo) * cell + 4.0) << "\" y=\""
        << svg_number(top + rows * cell + 14.0) << "\">" << x << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

Json to_json(const chain::Circuit& circuit) {
  Json layers = Json::array();
  for (const auto& layer : circuit.layers) {
    Json gates = Json::array();
    for (const auto& g : layer.gates) {
      Json gate = {{"kind", chain::to_string(g.kind)}, {"target", g.target}};
      if (g.kind == chain::GateKind::SU2ef) {
        gate["theta"] = g.theta;
        gate["axis"] = g.axis;
      }
      gates.push_back(std::move(gate));
    }
    layers.push_back({{"role", chain::to_string(layer.role)},
                      {"step", layer.step},
                      {"gates", std::move(gates)}});
  }
  return {{"steps", circuit.steps}, {"layers", std::move(layers)}};
}

void emit_heatmap(const RunRecord& record, const std::string& path) {
  write_file(path, heatmap_svg(record));
}

}  // namespace qwalk::io
