#include "mdbench/solvers/bounds.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mdbench {
namespace {

void check_sequence(std::span<const double> gammas, std::span<const double> norms,
                    const char* where) {
  if (gammas.empty()) throw std::invalid_argument(std::string(where) + ": empty step sequence");
  if (gammas.size() != norms.size()) {
    throw std::invalid_argument(std::string(where) + ": step and gradient sequences differ in length");
  }
  for (std::size_t k = 0; k < gammas.size(); ++k) {
    if (!(gammas[k] > 0.0)) {
      throw std::invalid_argument(std::string(where) + ": step sizes must be positive");
    }
    if (k > 0 && gammas[k] > gammas[k - 1]) {
      throw std::invalid_argument(std::string(where) +
                                  ": the rate bound assumes a positive non-increasing sequence of "
                                  "step sizes; step " + std::to_string(k + 1) + " increases");
    }
  }
}

void check_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be positive and finite");
  }
}

// Numerator sum and weight sum shared by the unconstrained bounds.
struct Sums {
  double weights = 0.0;
  double grads = 0.0;
};

Sums accumulate(double m, std::span<const double> gammas, std::span<const double> norms) {
  Sums s;
  for (std::size_t k = 0; k < gammas.size(); ++k) {
    s.weights += std::pow(gammas[k], -m);
    s.grads += norms[k] * norms[k] * std::pow(gammas[k], 1.0 - m);
  }
  return s;
}

}  // namespace

double bound_main(double m, std::span<const double> gammas, std::span<const double> grad_dual_norms,
                  double theta, double sigma) {
  if (!(m >= -1.0)) throw std::invalid_argument("bound_main: m must be >= -1");
  check_positive(sigma, "bound_main: sigma");
  if (!(theta >= 0.0)) throw std::invalid_argument("bound_main: theta must be nonnegative");
  check_sequence(gammas, grad_dual_norms, "bound_main");
  const Sums s = accumulate(m, gammas, grad_dual_norms);
  const double last = gammas.back();
  return (theta / std::pow(last, m + 1.0) + s.grads / (2.0 * sigma)) / s.weights;
}

double bound_composite(double m, std::span<const double> gammas,
                       std::span<const double> grad_dual_norms, double h_at_x1, double theta,
                       double sigma) {
  if (!(m >= -1.0 && m <= 0.0)) {
    throw std::invalid_argument("bound_composite: the composite bound holds only for -1 <= m <= 0");
  }
  if (!(h_at_x1 >= 0.0)) throw std::invalid_argument("bound_composite: h(x1) must be nonnegative");
  check_positive(sigma, "bound_composite: sigma");
  check_sequence(gammas, grad_dual_norms, "bound_composite");
  const Sums s = accumulate(m, gammas, grad_dual_norms);
  const double num = h_at_x1 / std::pow(gammas.front(), m) +
                     theta / std::pow(gammas.back(), m + 1.0) + s.grads / (2.0 * sigma);
  return num / s.weights;
}

double bound_corollary(MCase m_case, std::size_t n_iters, double lipschitz, double theta,
                       double sigma, double m) {
  if (n_iters == 0) throw std::invalid_argument("bound_corollary: N must be at least 1");
  const double n = static_cast<double>(n_iters);
  switch (m_case) {
    case MCase::MinusOne:
      return lipschitz * (theta + 1.0 + std::log(n)) / (std::sqrt(sigma) * std::sqrt(n));
    case MCase::Zero: return lipschitz * (2.0 + theta) / std::sqrt(2.0 * sigma * n);
    case MCase::AtLeastOne:
      if (!(m >= 1.0)) throw std::invalid_argument("bound_corollary: AtLeastOne needs m >= 1");
      return lipschitz * (m + 2.0) * (1.0 + theta) / (2.0 * std::sqrt(2.0 * sigma) * std::sqrt(n));
  }
  return NAN;
}

double bound_composite_corollary_minus_one(std::size_t n_iters, double lipschitz, double h_at_x1,
                                           double theta, double sigma) {
  if (n_iters == 0) throw std::invalid_argument("bound_composite_corollary: N must be at least 1");
  const double n = static_cast<double>(n_iters);
  return lipschitz *
         (std::sqrt(2.0 * sigma) * h_at_x1 / lipschitz + theta + 1.0 + std::log(n)) /
         (std::sqrt(sigma) * std::sqrt(n));
}

std::size_t iteration_estimate(double lipschitz, double theta1, double sigma, double eps,
                               MCase m_case) {
  check_positive(lipschitz, "iteration_estimate: M");
  check_positive(sigma, "iteration_estimate: sigma");
  check_positive(eps, "iteration_estimate: eps");
  if (!(theta1 >= 0.0)) throw std::invalid_argument("iteration_estimate: theta1 must be nonnegative");
  double lead = 0.0;
  switch (m_case) {
    case MCase::AtLeastOne: lead = 1.0 + theta1; break;
    case MCase::Zero: lead = 2.0 + theta1; break;
    case MCase::MinusOne:
      throw std::invalid_argument("iteration_estimate: no closed form for m = -1");
  }
  const double n = lipschitz * lipschitz * lead * lead / (2.0 * sigma * eps * eps);
  return static_cast<std::size_t>(std::ceil(n));
}

ConstrainedBound bound_constrained(double m, std::span<const double> productive_gammas,
                                   std::span<const double> productive_grad_norms,
                                   std::span<const double> nonproductive_gammas,
                                   std::span<const double> nonproductive_grad_norms,
                                   double last_gamma, double theta, double sigma, double eps) {
  check_positive(sigma, "bound_constrained: sigma");
  check_positive(last_gamma, "bound_constrained: last gamma");
  if (productive_gammas.empty()) {
    throw std::invalid_argument("bound_constrained: no productive steps");
  }
  if (productive_gammas.size() != productive_grad_norms.size() ||
      nonproductive_gammas.size() != nonproductive_grad_norms.size()) {
    throw std::invalid_argument("bound_constrained: sequence lengths differ");
  }
  const Sums p = accumulate(m, productive_gammas, productive_grad_norms);
  const Sums j = accumulate(m, nonproductive_gammas, nonproductive_grad_norms);
  const double base = theta / std::pow(last_gamma, m + 1.0) + (p.grads + j.grads) / (2.0 * sigma);
  return {(base - eps * j.weights) / p.weights, base / p.weights};
}

ProductiveStepCheck productive_step_inequality(double theta, double m, double lipschitz, double eps,
                                               double sigma, std::size_t n_iters) {
  check_positive(lipschitz, "productive_step_inequality: M");
  check_positive(sigma, "productive_step_inequality: sigma");
  check_positive(eps, "productive_step_inequality: eps");
  if (n_iters == 0) throw std::invalid_argument("productive_step_inequality: N must be at least 1");
  const double scale = lipschitz / std::sqrt(2.0 * sigma);
  double sum_lo = 0.0;
  double sum_m = 0.0;
  for (std::size_t k = 1; k <= n_iters; ++k) {
    const double sk = std::sqrt(static_cast<double>(k));
    sum_lo += std::pow(sk, m - 1.0);
    sum_m += std::pow(sk, m);
  }
  const double sn = std::sqrt(static_cast<double>(n_iters));
  const double lhs = std::pow(scale, m + 1.0) * (theta * std::pow(sn, m + 1.0) + sum_lo);
  const double rhs = eps * std::pow(scale, m) * sum_m;
  return {lhs, rhs, lhs < rhs};
}

}  // namespace mdbench
