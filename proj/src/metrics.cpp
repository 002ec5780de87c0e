#include "qwalk/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace qwalk::metrics {

namespace {

constexpr double kNormalizationTolerance = 1e-6;

}  // namespace

double diffusion_distance(const Distribution& dist) {
  if (std::abs(dist.total() - 1.0) > kNormalizationTolerance) {
    throw Error("diffusion_distance: sub-normalized distribution");
  }
  double second_moment = 0.0;
  for (int x = dist.begin_x(); x < dist.end_x(); ++x) {
    second_moment += static_cast<double>(x) * x * dist.at(x);
  }
  return std::sqrt(second_moment);
}

double similarity(const Distribution& p, const Distribution& q) {
  // Only the overlap of the two windows contributes.
  const int lo = std::max(p.begin_x(), q.begin_x());
  const int hi = std::min(p.end_x(), q.end_x());
  double coefficient = 0.0;
  for (int x = lo; x < hi; ++x) coefficient += std::sqrt(p.at(x) * q.at(x));
  return coefficient * coefficient;
}

std::vector<SeriesPoint> series(const std::vector<Distribution>& dists,
                                const Metric& metric) {
  std::vector<SeriesPoint> out;
  out.reserve(dists.size());
  for (std::size_t i = 0; i < dists.size(); ++i) {
    if (i > 0 && dists[i].step() <= dists[i - 1].step()) {
      throw Error("series: steps must be strictly increasing");
    }
    out.push_back({dists[i].step(), metric(dists[i])});
  }
  return out;
}

std::vector<SeriesPoint> similarity_series(const std::vector<Distribution>& a,
                                           const std::vector<Distribution>& b) {
  if (a.size() != b.size()) throw Error("similarity: step ranges differ");
  std::vector<SeriesPoint> out;
  out.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].step() != b[i].step()) {
      throw Error("similarity: step ranges differ");
    }
    if (i > 0 && a[i].step() <= a[i - 1].step()) {
      throw Error("series: steps must be strictly increasing");
    }
    out.push_back({a[i].step(), similarity(a[i], b[i])});
  }
  return out;
}

}  // namespace qwalk::metrics
