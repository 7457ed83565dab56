#pragma once

#include <cstddef>
#include <span>

namespace mdbench {

/// Accuracy bound for the weighted average after N steps:
///   (sum gamma_k^-m)^-1 [ theta / gamma_N^(m+1) + (1/2 sigma) sum ||g_k||_*^2 / gamma_k^(m-1) ].
/// Requires a positive non-increasing gamma sequence; throws otherwise.
double bound_main(double m, std::span<const double> gammas, std::span<const double> grad_dual_norms,
                  double theta, double sigma);

/// bound_main with the extra h(x^1) / gamma_1^m numerator term; -1 <= m <= 0.
double bound_composite(double m, std::span<const double> gammas,
                       std::span<const double> grad_dual_norms, double h_at_x1, double theta,
                       double sigma);

enum class MCase { MinusOne, Zero, AtLeastOne };

/// Closed-form rates under gamma_k = sqrt(2 sigma) / (M_f sqrt k):
///   MinusOne:   M_f (theta + 1 + ln N) / (sqrt(sigma) sqrt(N))
///   Zero:       M_f (2 + theta) / sqrt(2 sigma N)
///   AtLeastOne: M_f (m + 2)(1 + theta) / (2 sqrt(2 sigma) sqrt(N))
double bound_corollary(MCase m_case, std::size_t n_iters, double lipschitz, double theta,
                       double sigma, double m = 1.0);

/// Composite m = -1 closed form:
///   M_f (sqrt(2 sigma) h(x^1) / M_f + theta + 1 + ln N) / (sqrt(sigma) sqrt(N)).
double bound_composite_corollary_minus_one(std::size_t n_iters, double lipschitz, double h_at_x1,
                                           double theta, double sigma);

/// Iterations that guarantee an eps-solution for the functionally constrained
/// method with time-varying steps: ceil(M^2 (1 + theta1)^2 / (2 sigma eps^2))
/// for m >= 1 and ceil(M^2 (2 + theta1)^2 / (2 sigma eps^2)) for m = 0.
std::size_t iteration_estimate(double lipschitz, double theta1, double sigma, double eps,
                               MCase m_case);

/// Both readings of the accuracy bound for the functionally constrained
/// method after N steps (N = total steps; the last step's gamma closes the
/// theta term). `without_eps_term` drops -eps sum_J gamma_j^-m.
struct ConstrainedBound {
  double with_eps_term;
  double without_eps_term;
};
ConstrainedBound bound_constrained(double m, std::span<const double> productive_gammas,
                                   std::span<const double> productive_grad_norms,
                                   std::span<const double> nonproductive_gammas,
                                   std::span<const double> nonproductive_grad_norms,
                                   double last_gamma, double theta, double sigma, double eps);

/// Two sides of the inequality used to argue at least one productive step:
///   lhs = (M / sqrt(2 sigma))^(m+1) [theta sqrt(N)^(m+1) + sum_k sqrt(k)^(m-1)]
///   rhs = eps (M / sqrt(2 sigma))^m sum_k sqrt(k)^m
/// Diagnostic only; `holds` is lhs < rhs.
struct ProductiveStepCheck {
  double lhs;
  double rhs;
  bool holds;
};
ProductiveStepCheck productive_step_inequality(double theta, double m, double lipschitz, double eps,
                                               double sigma, std::size_t n_iters);

}  // namespace mdbench
