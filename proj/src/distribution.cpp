#include "qwalk/distribution.hpp"

#include <numeric>

namespace qwalk {

namespace {

// Populations read off a density matrix can come out as -1e-17.
constexpr double kNegativeSlack = 1e-12;

}  // namespace

Distribution::Distribution(int offset, std::vector<double> probs, int step)
    : offset_(offset), probs_(std::move(probs)), step_(step) {
  for (double& p : probs_) {
    if (!(p >= -kNegativeSlack)) {
      throw Error("distribution: negative or non-finite probability");
    }
    if (p < 0.0) p = 0.0;
  }
  total_ = std::accumulate(probs_.begin(), probs_.end(), 0.0);
}

Distribution Distribution::delta(int x, int step) {
  return Distribution(x, {1.0}, step);
}

double Distribution::at(int x) const {
  if (x < begin_x() || x >= end_x()) return 0.0;
  return probs_[static_cast<std::size_t>(x - offset_)];
}

Distribution Distribution::renormalized() const {
  if (total_ <= 0.0) throw Error("distribution: cannot renormalize zero mass");
  std::vector<double> scaled(probs_);
  for (double& p : scaled) p /= total_;
  return Distribution(offset_, std::move(scaled), step_);
}

}  // namespace qwalk
