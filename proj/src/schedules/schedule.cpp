#include "mdbench/schedules/schedule.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mdbench {
namespace {

double positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string("schedule: ") + what + " must be positive and finite");
  }
  return v;
}

ScheduleKind with_c(ScheduleTag tag, double c) {
  ScheduleKind k;
  k.tag = tag;
  k.c = positive(c, "rule constant");
  return k;
}

}  // namespace

ScheduleKind ScheduleKind::constant_step(double c) { return with_c(ScheduleTag::ConstantStep, c); }
ScheduleKind ScheduleKind::fixed_length(double c) { return with_c(ScheduleTag::FixedLength, c); }
ScheduleKind ScheduleKind::nonsum(double c) { return with_c(ScheduleTag::NonSum, c); }
ScheduleKind ScheduleKind::sqrsum_nonsum(double c) { return with_c(ScheduleTag::SqrSumNonSum, c); }
ScheduleKind ScheduleKind::quad_grad(double c) { return with_c(ScheduleTag::QuadGrad, c); }

ScheduleKind ScheduleKind::adagrad(double theta0, double alpha) {
  ScheduleKind k;
  k.tag = ScheduleTag::AdaGrad;
  k.theta0 = positive(theta0, "theta0");
  k.alpha = positive(alpha, "alpha");
  return k;
}

ScheduleKind ScheduleKind::polyak() {
  ScheduleKind k;
  k.tag = ScheduleTag::Polyak;
  return k;
}

ScheduleKind ScheduleKind::time_varying(double lipschitz) {
  ScheduleKind k;
  k.tag = ScheduleTag::TimeVarying;
  k.lipschitz = positive(lipschitz, "Lipschitz bound M");
  return k;
}

ScheduleKind ScheduleKind::adaptive_time_varying() {
  ScheduleKind k;
  k.tag = ScheduleTag::AdaptiveTimeVarying;
  return k;
}

ScheduleKind ScheduleKind::defaults(ScheduleTag tag, double lipschitz) {
  switch (tag) {
    case ScheduleTag::ConstantStep: return constant_step();
    case ScheduleTag::FixedLength: return fixed_length();
    case ScheduleTag::NonSum: return nonsum();
    case ScheduleTag::SqrSumNonSum: return sqrsum_nonsum();
    case ScheduleTag::QuadGrad: return quad_grad();
    case ScheduleTag::AdaGrad: return adagrad();
    case ScheduleTag::Polyak: return polyak();
    case ScheduleTag::TimeVarying: return time_varying(lipschitz);
    case ScheduleTag::AdaptiveTimeVarying: return adaptive_time_varying();
  }
  throw std::invalid_argument("schedule: unknown tag");
}

std::string_view to_string(ScheduleTag tag) noexcept {
  switch (tag) {
    case ScheduleTag::ConstantStep: return "constant-step";
    case ScheduleTag::FixedLength: return "fixed-length";
    case ScheduleTag::NonSum: return "nonsum";
    case ScheduleTag::SqrSumNonSum: return "sqrsum-nonsum";
    case ScheduleTag::QuadGrad: return "quad-grad";
    case ScheduleTag::AdaGrad: return "adagrad";
    case ScheduleTag::Polyak: return "polyak";
    case ScheduleTag::TimeVarying: return "time-varying";
    case ScheduleTag::AdaptiveTimeVarying: return "adaptive-time-varying";
  }
  return "?";
}

std::optional<ScheduleTag> parse_schedule_tag(std::string_view name) noexcept {
  for (ScheduleTag t : kAllScheduleTags) {
    if (to_string(t) == name) return t;
  }
  return std::nullopt;
}

bool uses_gradient_norm(ScheduleTag tag) noexcept {
  switch (tag) {
    case ScheduleTag::FixedLength:
    case ScheduleTag::QuadGrad:
    case ScheduleTag::AdaGrad:
    case ScheduleTag::Polyak:
    case ScheduleTag::AdaptiveTimeVarying: return true;
    default: return false;
  }
}

bool is_nonincreasing_guaranteed(const ScheduleKind& kind) noexcept {
  switch (kind.tag) {
    case ScheduleTag::AdaptiveTimeVarying:
    case ScheduleTag::FixedLength:
    case ScheduleTag::QuadGrad:
    case ScheduleTag::Polyak: return false;
    default: return true;
  }
}

ScheduleState::ScheduleState(ScheduleKind kind, double sigma)
    : kind_(kind), sigma_(positive(sigma, "sigma")) {
  switch (kind_.tag) {
    case ScheduleTag::ConstantStep:
    case ScheduleTag::FixedLength:
    case ScheduleTag::NonSum:
    case ScheduleTag::SqrSumNonSum:
    case ScheduleTag::QuadGrad: positive(kind_.c, "rule constant"); break;
    case ScheduleTag::AdaGrad:
      positive(kind_.theta0, "theta0");
      positive(kind_.alpha, "alpha");
      break;
    case ScheduleTag::TimeVarying: positive(kind_.lipschitz, "Lipschitz bound M"); break;
    case ScheduleTag::Polyak:
    case ScheduleTag::AdaptiveTimeVarying: break;
  }
}

std::optional<double> ScheduleState::step_size(std::size_t k, double f_val, double grad_dual_norm,
                                               std::optional<double> f_star) {
  if (k == 0) throw std::invalid_argument("step_size: iteration index starts at 1");
  if (k <= k_last_) {
    throw std::invalid_argument("step_size: iteration index must increase (got " +
                                std::to_string(k) + " after " + std::to_string(k_last_) + ")");
  }
  if (!(grad_dual_norm >= 0.0) || !std::isfinite(grad_dual_norm)) {
    throw std::invalid_argument("step_size: gradient norm must be finite and nonnegative");
  }
  if (kind_.tag == ScheduleTag::Polyak && !f_star) {
    throw std::invalid_argument("Polyak requires known f*");
  }
  k_last_ = k;

  const double g = grad_dual_norm;
  const double sk = std::sqrt(static_cast<double>(k));
  if (uses_gradient_norm(kind_.tag) && g == 0.0) {
    return std::nullopt;
  }
  switch (kind_.tag) {
    case ScheduleTag::ConstantStep: return kind_.c;
    case ScheduleTag::FixedLength: return kind_.c / g;
    case ScheduleTag::NonSum: return kind_.c / sk;
    case ScheduleTag::SqrSumNonSum: return kind_.c / static_cast<double>(k);
    case ScheduleTag::QuadGrad: return kind_.c / (g * g);
    case ScheduleTag::AdaGrad:
      accum_sq_grad_ += g * g;
      return kind_.theta0 / std::sqrt(accum_sq_grad_ + kind_.alpha);
    case ScheduleTag::Polyak: {
      const double excess = f_val - *f_star;
      if (!(excess > 0.0)) return std::nullopt;
      return excess / (g * g);
    }
    case ScheduleTag::TimeVarying: return std::sqrt(2.0 * sigma_) / (kind_.lipschitz * sk);
    case ScheduleTag::AdaptiveTimeVarying: return std::sqrt(2.0 * sigma_) / (g * sk);
  }
  return std::nullopt;
}

}  // namespace mdbench
