#pragma once

#include "mdbench/core/point.hpp"

namespace mdbench {

/// Running x_hat = (sum gamma_k^-m)^-1 sum gamma_k^-m x^k.
///
/// Weights are kept relative to a log-scale anchor so large |m| cannot
/// overflow; for m = 0 every weight is exactly 1.
class WeightedAverager {
 public:
  explicit WeightedAverager(double m);

  void update(const Point& x, double gamma);

  bool empty() const noexcept { return count_ == 0; }
  std::size_t count() const noexcept { return count_; }
  double m() const noexcept { return m_; }

  /// Sum of weights relative to the anchor exp(-m ln gamma_first).
  double weight_total() const noexcept { return weight_total_; }
  /// Relative weight a point with step `gamma` would receive.
  double relative_weight(double gamma) const;

  Point average() const;
  void average_into(Point& out) const;

 private:
  double m_;
  double log_anchor_ = 0.0;
  double weight_total_ = 0.0;
  Point weighted_sum_;
  std::size_t count_ = 0;
};

}  // namespace mdbench
