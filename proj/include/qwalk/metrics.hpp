#pragma once

#include <functional>
#include <vector>

#include "qwalk/distribution.hpp"

namespace qwalk::metrics {

/// Root-mean-square displacement about the origin, sqrt(sum_x x^2 p(x)).
/// Requires a normalized distribution (|total - 1| <= 1e-6).
double diffusion_distance(const Distribution& dist);

/// Squared Bhattacharyya coefficient [sum_x sqrt(p(x) q(x))]^2 over the union
/// of supports. Sub-normalized inputs are accepted; the value then
/// underestimates the similarity of the underlying shapes.
double similarity(const Distribution& p, const Distribution& q);

struct SeriesPoint {
  int step;
  double value;
};

using Metric = std::function<double(const Distribution&)>;

/// Applies `metric` to each distribution; steps must be strictly increasing.
std::vector<SeriesPoint> series(const std::vector<Distribution>& dists,
                                const Metric& metric);

/// Per-step similarity between two equally long runs with matching steps.
std::vector<SeriesPoint> similarity_series(const std::vector<Distribution>& a,
                                           const std::vector<Distribution>& b);

}  // namespace qwalk::metrics
