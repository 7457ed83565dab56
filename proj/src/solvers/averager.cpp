#include "mdbench/solvers/averager.hpp"

#include <cmath>
#include <stdexcept>

namespace mdbench {

namespace {
// Rescale once relative weights exceed e^300; sums stay far from overflow.
constexpr double kRescaleLog = 300.0;
}  // namespace

WeightedAverager::WeightedAverager(double m) : m_(m) {
  if (!(m >= -1.0) || !std::isfinite(m)) {
    throw std::invalid_argument("WeightedAverager: m must be a finite value >= -1");
  }
}

double WeightedAverager::relative_weight(double gamma) const {
  if (m_ == 0.0) return 1.0;
  return std::exp(-m_ * std::log(gamma) - log_anchor_);
}

void WeightedAverager::update(const Point& x, double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("WeightedAverager: gamma must be positive and finite");
  }
  if (count_ == 0) {
    weighted_sum_ = Point::zeros(x.size());
    log_anchor_ = m_ == 0.0 ? 0.0 : -m_ * std::log(gamma);
  } else {
    require_same_size(x, weighted_sum_, "WeightedAverager::update");
  }
  const double log_w = m_ == 0.0 ? 0.0 : -m_ * std::log(gamma) - log_anchor_;
  if (log_w > kRescaleLog) {
    const double s = std::exp(-log_w);
    for (double& v : weighted_sum_.coords()) v *= s;
    weight_total_ *= s;
    log_anchor_ += log_w;
  }
  const double w = m_ == 0.0 ? 1.0 : std::exp(-m_ * std::log(gamma) - log_anchor_);
  axpy(w, x, weighted_sum_);
  weight_total_ += w;
  ++count_;
}

Point WeightedAverager::average() const {
  Point out;
  average_into(out);
  return out;
}

void WeightedAverager::average_into(Point& out) const {
  if (count_ == 0) throw std::logic_error("WeightedAverager: no points inserted");
  if (out.size() != weighted_sum_.size()) out = Point::zeros(weighted_sum_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = weighted_sum_[i] / weight_total_;
}

}  // namespace mdbench
