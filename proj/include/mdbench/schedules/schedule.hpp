#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

namespace mdbench {

enum class ScheduleTag {
  ConstantStep,         // c
  FixedLength,          // c / ||g||_*
  NonSum,               // c / sqrt(k)
  SqrSumNonSum,         // c / k
  QuadGrad,             // c / ||g||_*^2
  AdaGrad,              // theta0 / sqrt(sum_j ||g_j||_*^2 + alpha)
  Polyak,               // (f(x^k) - f*) / ||g||_*^2
  TimeVarying,          // sqrt(2 sigma) / (M sqrt(k))
  AdaptiveTimeVarying,  // sqrt(2 sigma) / (||g||_* sqrt(k))
};

/// Step-size rule with its constants. Factories carry the comparison
/// defaults (0.1, 0.2, 0.1, 0.5, 0.2, theta0 = sqrt 2, alpha = 1e-8).
struct ScheduleKind {
  ScheduleTag tag = ScheduleTag::TimeVarying;
  double c = 0.0;         // rule constant for the Table rules
  double theta0 = 0.0;    // AdaGrad
  double alpha = 0.0;     // AdaGrad
  double lipschitz = 0.0; // TimeVarying M

  static ScheduleKind constant_step(double c = 0.1);
  static ScheduleKind fixed_length(double c = 0.2);
  static ScheduleKind nonsum(double c = 0.1);
  static ScheduleKind sqrsum_nonsum(double c = 0.5);
  static ScheduleKind quad_grad(double c = 0.2);
  static ScheduleKind adagrad(double theta0 = 1.4142135623730951, double alpha = 1e-8);
  static ScheduleKind polyak();
  static ScheduleKind time_varying(double lipschitz);
  static ScheduleKind adaptive_time_varying();

  /// Default-constant rule for `tag`; TimeVarying takes M from `lipschitz`.
  static ScheduleKind defaults(ScheduleTag tag, double lipschitz = 1.0);
};

/// CLI spellings: constant-step, fixed-length, nonsum, sqrsum-nonsum,
/// quad-grad, adagrad, polyak, time-varying, adaptive-time-varying.
std::string_view to_string(ScheduleTag tag) noexcept;
std::optional<ScheduleTag> parse_schedule_tag(std::string_view name) noexcept;

/// All nine rules in comparison-table order.
inline constexpr ScheduleTag kAllScheduleTags[] = {
    ScheduleTag::ConstantStep, ScheduleTag::FixedLength, ScheduleTag::NonSum,
    ScheduleTag::SqrSumNonSum, ScheduleTag::QuadGrad,    ScheduleTag::AdaGrad,
    ScheduleTag::Polyak,       ScheduleTag::TimeVarying, ScheduleTag::AdaptiveTimeVarying};

/// True when the rule produces a non-increasing sequence for every gradient
/// stream. Gradient-normalized rules cannot be certified.
bool is_nonincreasing_guaranteed(const ScheduleKind& kind) noexcept;

bool uses_gradient_norm(ScheduleTag tag) noexcept;

/// Per-run schedule state; owns the AdaGrad accumulator.
class ScheduleState {
 public:
  ScheduleState(ScheduleKind kind, double sigma);

  /// gamma_k, or nullopt for the "stationary" outcome (a gradient-dependent
  /// rule saw ||g||_* = 0, or Polyak saw f(x^k) <= f*). k must increase
  /// strictly across calls; Polyak requires f_star.
  std::optional<double> step_size(std::size_t k, double f_val, double grad_dual_norm,
                                  std::optional<double> f_star = std::nullopt);

  const ScheduleKind& kind() const noexcept { return kind_; }
  double sigma() const noexcept { return sigma_; }
  double accumulated_sq_grad() const noexcept { return accum_sq_grad_; }
  std::size_t last_k() const noexcept { return k_last_; }

 private:
  ScheduleKind kind_;
  double sigma_;
  double accum_sq_grad_ = 0.0;
  std::size_t k_last_ = 0;
};

}  // namespace mdbench
