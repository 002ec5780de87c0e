#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace qwalk {

/// Error raised for invalid inputs anywhere in the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Position probabilities p(x) for x in [offset, offset + probs.size()) at one
/// walk step. Totals below one are allowed and represent detected loss.
class Distribution {
 public:
  Distribution() = default;
  Distribution(int offset, std::vector<double> probs, int step = 0);

  /// Point mass of weight one at `x`.
  static Distribution delta(int x, int step = 0);

  int offset() const { return offset_; }
  int step() const { return step_; }
  void set_step(int step) { step_ = step; }
  const std::vector<double>& probs() const { return probs_; }
  std::size_t size() const { return probs_.size(); }
  bool empty() const { return probs_.empty(); }

  /// First and one-past-last stored position.
  int begin_x() const { return offset_; }
  int end_x() const { return offset_ + static_cast<int>(probs_.size()); }

  /// Probability at `x`, zero outside the stored range.
  double at(int x) const;
  double total() const { return total_; }

  /// Copy rescaled to total one; throws on an all-zero distribution.
  Distribution renormalized() const;

 private:
  int offset_ = 0;
  std::vector<double> probs_;
  double total_ = 0.0;
  int step_ = 0;
};

}  // namespace qwalk
