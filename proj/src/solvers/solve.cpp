#include "mdbench/solvers/solve.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "mdbench/solvers/averager.hpp"

namespace mdbench {

void RunConfig::validate() const {
  if (!(m >= -1.0) || !std::isfinite(m)) throw std::invalid_argument("RunConfig: m must be >= -1");
  if (!iters && !epsilon) {
    throw std::invalid_argument("RunConfig: set an iteration count, an epsilon, or both");
  }
  if (iters && *iters == 0) throw std::invalid_argument("RunConfig: iters must be at least 1");
  if (epsilon && !(*epsilon > 0.0 && std::isfinite(*epsilon))) {
    throw std::invalid_argument("RunConfig: epsilon must be positive");
  }
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw std::invalid_argument("RunConfig: theta must be positive");
  }
  if (max_iters_cap == 0) throw std::invalid_argument("RunConfig: max_iters_cap must be positive");
}

std::string_view to_string(StopReason r) noexcept {
  switch (r) {
    case StopReason::MaxIters: return "max-iters";
    case StopReason::EpsilonCriterion: return "epsilon-criterion";
    case StopReason::StationaryPoint: return "stationary-point";
  }
  return "?";
}

namespace {

void require_start(const FeasibleSet& set, const Point& x1, const char* where) {
  if (x1.size() != set.dimension()) {
    throw DimensionError(std::string(where) + ": start point has the wrong dimension");
  }
  if (!set.contains(x1)) throw std::invalid_argument(std::string(where) + ": infeasible start point");
}

std::size_t iteration_limit(const RunConfig& c) {
  if (c.iters) return *c.iters;
  return c.max_iters_cap;
}

// Running sums behind the accuracy bound: sum gamma^-m and sum ||g||^2 gamma^(1-m).
struct BoundSums {
  double m;
  double weights = 0.0;
  double grads = 0.0;
  double first_gamma = 0.0;
  double last_gamma = std::numeric_limits<double>::infinity();
  bool monotone = true;

  void add(double gamma, double gnorm) {
    if (gamma > last_gamma) monotone = false;
    if (weights == 0.0 && grads == 0.0 && first_gamma == 0.0) first_gamma = gamma;
    last_gamma = gamma;
    weights += std::pow(gamma, -m);
    grads += gnorm * gnorm * std::pow(gamma, 1.0 - m);
  }

  double bound(double h_term, double theta, double sigma) const {
    return (h_term + theta / std::pow(last_gamma, m + 1.0) + grads / (2.0 * sigma)) / weights;
  }
};

SolveResult run_unconstrained(const Objective& f, const CompositeRegularizer& h,
                              const ProxSetup& setup, const FeasibleSet& set,
                              const ScheduleKind& schedule, const RunConfig& cfg, const Point& x1,
                              const char* where) {
  cfg.validate();
  require_start(set, x1, where);
  if (f.dimension() != set.dimension()) {
    throw DimensionError(std::string(where) + ": objective and set dimensions differ");
  }
  const bool certified = is_nonincreasing_guaranteed(schedule);
  if (!cfg.iters && !certified) {
    throw std::invalid_argument(std::string(where) +
                                ": epsilon-only termination needs a schedule with a certified bound");
  }
  const std::optional<double> f_star = cfg.f_star ? cfg.f_star : f.known_fstar();
  const NormKind dual = setup.dual_norm();
  const double h1 = h.value(x1);
  const double h_term = h.is_zero() ? 0.0 : h1;  // divided by gamma_1^m below

  ScheduleState sched(schedule, setup.sigma());
  WeightedAverager avg(cfg.m);
  BoundSums sums{cfg.m};
  SolveResult res;
  res.stop_reason = StopReason::MaxIters;

  Point x = x1;
  Point grad;
  Point x_avg;
  const std::size_t limit = iteration_limit(cfg);
  for (std::size_t k = 1; k <= limit; ++k) {
    const double fx = f.evaluate(x, grad);
    const double gnorm = norm(grad, dual);
    std::optional<double> gamma;
    if (gnorm > 0.0) gamma = sched.step_size(k, fx, gnorm, f_star);
    if (!gamma) {
      res.stop_reason = StopReason::StationaryPoint;
      res.iterations = k - 1;
      break;
    }
    avg.update(x, *gamma);
    sums.add(*gamma, gnorm);

    std::optional<double> bound;
    if (certified && sums.monotone) {
      const double hb = h_term == 0.0 ? 0.0 : h_term / std::pow(sums.first_gamma, cfg.m);
      bound = sums.bound(hb, cfg.theta, setup.sigma());
    }
    if (cfg.record_trace) {
      avg.average_into(x_avg);
      TraceRecord rec;
      rec.k = k;
      rec.gamma = *gamma;
      rec.f_iterate = fx + h.value(x);
      rec.f_avg = f.value(x_avg) + h.value(x_avg);
      rec.bound = bound;
      res.trace.push_back(rec);
    }
    x = composite_mirror_step(setup, set, x, grad, *gamma, h);
    res.iterations = k;
    if (!cfg.iters && bound && *bound <= *cfg.epsilon) {
      res.stop_reason = StopReason::EpsilonCriterion;
      break;
    }
  }

  res.x_hat = avg.empty() ? x1 : avg.average();
  res.f_hat = f.value(res.x_hat) + h.value(res.x_hat);
  return res;
}

void require_constrained(const Objective& f, const ConstraintBlock& g, const FeasibleSet& set,
                         const RunConfig& cfg, const Point& x1, const char* where) {
  cfg.validate();
  if (!cfg.epsilon) throw std::invalid_argument(std::string(where) + ": epsilon is required");
  require_start(set, x1, where);
  if (f.dimension() != set.dimension() || g.dimension() != set.dimension()) {
    throw DimensionError(std::string(where) + ": objective, constraints and set dimensions differ");
  }
}

void finish_constrained(const Objective& f, const ConstraintBlock& g, WeightedAverager& avg,
                        const Point& x_last, SolveResult& res) {
  res.x_hat = avg.empty() ? x_last : avg.average();
  res.f_hat = f.value(res.x_hat);
  res.g_hat = g.value(res.x_hat);
}

NoProductiveSteps no_productive(const char* where, const std::string& why, std::size_t k) {
  return NoProductiveSteps(std::string(where) + ": no productive step (" + why + ")", k);
}

}  // namespace

SolveResult mirror_descent(const Objective& f, const ProxSetup& setup, const FeasibleSet& set,
                           const ScheduleKind& schedule, const RunConfig& config, const Point& x1) {
  return run_unconstrained(f, CompositeRegularizer::zero(), setup, set, schedule, config, x1,
                           "mirror_descent");
}

SolveResult mirror_c_descent(const Objective& f, const CompositeRegularizer& h,
                             const ProxSetup& setup, const FeasibleSet& set,
                             const ScheduleKind& schedule, const RunConfig& config,
                             const Point& x1) {
  if (!(config.m >= -1.0 && config.m <= 0.0)) {
    throw std::invalid_argument(
        "mirror_c_descent: m = " + std::to_string(config.m) +
        " is outside [-1, 0]; the composite convergence theorem holds only for -1 <= m <= 0");
  }
  return run_unconstrained(f, h, setup, set, schedule, config, x1, "mirror_c_descent");
}

SolveResult constrained_md(const Objective& f, const ConstraintBlock& g, const ProxSetup& setup,
                           const FeasibleSet& set, const ScheduleKind& sched_f,
                           const ScheduleKind& sched_g, const RunConfig& cfg, const Point& x1) {
  constexpr const char* where = "constrained_md";
  require_constrained(f, g, set, cfg, x1, where);
  const double eps = *cfg.epsilon;
  const double sigma = setup.sigma();
  const double m = cfg.m;
  const NormKind dual = setup.dual_norm();
  const std::optional<double> f_star = cfg.f_star ? cfg.f_star : f.known_fstar();
  const bool certified = is_nonincreasing_guaranteed(sched_f) && is_nonincreasing_guaranteed(sched_g);

  ScheduleState step_f(sched_f, sigma);
  ScheduleState step_g(sched_g, sigma);
  WeightedAverager avg(m);
  SolveResult res;

  double w_all = 0.0;   // sum over all steps of gamma^-m
  double w_prod = 0.0;  // productive steps only
  double w_nonprod = 0.0;
  double grads = 0.0;   // sum ||grad||^2 gamma^(1-m) over both kinds

  Point x = x1;
  Point grad;
  Point x_avg;
  const std::size_t limit = iteration_limit(cfg);
  for (std::size_t k = 1; k <= limit; ++k) {
    const double gx = g.evaluate(x, grad);
    res.constraint_evals += g.count();
    const bool productive = gx <= eps;
    double fx = NAN;
    double gamma = 0.0;
    double gnorm = 0.0;
    if (productive) {
      fx = f.evaluate(x, grad);
      gnorm = norm(grad, dual);
      std::optional<double> s;
      if (gnorm > 0.0) s = step_f.step_size(k, fx, gnorm, f_star);
      if (!s) {
        // x^k minimizes f and is eps-feasible.
        if (avg.empty()) avg.update(x, 1.0);
        res.stop_reason = StopReason::StationaryPoint;
        res.iterations = k - 1;
        finish_constrained(f, g, avg, x, res);
        return res;
      }
      gamma = *s;
      avg.update(x, gamma);
      ++res.productive_count;
      w_prod += std::pow(gamma, -m);
    } else {
      gnorm = norm(grad, dual);
      std::optional<double> s;
      if (gnorm > 0.0) s = step_g.step_size(k, gx, gnorm, 0.0);
      if (!s) {
        throw no_productive(where, "constraint subgradient vanished where g > eps", k);
      }
      gamma = *s;
      ++res.nonproductive_count;
      w_nonprod += std::pow(gamma, -m);
    }
    w_all += std::pow(gamma, -m);
    grads += gnorm * gnorm * std::pow(gamma, 1.0 - m);
    const double rhs = cfg.theta / std::pow(gamma, m + 1.0) + grads / (2.0 * sigma);
    const bool criterion = eps * w_all >= rhs;

    if (cfg.record_trace) {
      TraceRecord rec;
      rec.k = k;
      rec.gamma = gamma;
      rec.f_iterate = productive ? fx : f.value(x);
      rec.g_iterate = gx;
      rec.productive = productive;
      rec.constraint_evals = g.count();
      if (!avg.empty()) {
        avg.average_into(x_avg);
        rec.f_avg = f.value(x_avg);
        if (certified) rec.bound = (rhs - eps * w_nonprod) / w_prod;
      }
      res.trace.push_back(rec);
    }
    x = mirror_step(setup, set, x, grad, gamma);
    res.iterations = k;
    if (!std::isfinite(rhs) || !std::isfinite(w_all)) {
      throw std::overflow_error(std::string(where) + ": stopping-rule sums overflowed; lower m");
    }
    if (criterion && cfg.stop_on_criterion) {
      if (res.productive_count == 0) throw no_productive(where, "stopping rule met with |I| = 0", k);
      res.stop_reason = StopReason::EpsilonCriterion;
      res.constrained_bound = ConstrainedBound{(rhs - eps * w_nonprod) / w_prod, rhs / w_prod};
      finish_constrained(f, g, avg, x, res);
      return res;
    }
    if (k == limit) {
      res.constrained_bound =
          w_prod > 0.0 ? std::optional(ConstrainedBound{(rhs - eps * w_nonprod) / w_prod, rhs / w_prod})
                       : std::nullopt;
    }
  }
  if (res.productive_count == 0) {
    throw no_productive(where, "iterations exhausted", res.iterations);
  }
  res.stop_reason = StopReason::MaxIters;
  finish_constrained(f, g, avg, x, res);
  return res;
}

SolveResult constrained_md_multi(const Objective& f, const ConstraintBlock& g,
                                 const ProxSetup& setup, const FeasibleSet& set,
                                 const RunConfig& cfg, const Point& x1) {
  constexpr const char* where = "constrained_md_multi";
  require_constrained(f, g, set, cfg, x1, where);
  const double eps = *cfg.epsilon;
  const double sigma = setup.sigma();
  const double root2s = std::sqrt(2.0 * sigma);
  const double m = cfg.m;
  const NormKind dual = setup.dual_norm();
  const double big_m = std::max(f.lipschitz(dual), g.lipschitz(dual));

  WeightedAverager avg(m);
  SolveResult res;
  double lhs_sum = 0.0;   // sum (L_i sqrt(i) / sqrt(2 sigma))^m
  double grad_sum = 0.0;  // sum sqrt(i)^(m-1) L_i^(m+1)

  Point x = x1;
  Point grad;
  Point x_avg;
  const std::size_t limit = iteration_limit(cfg);
  for (std::size_t k = 1; k <= limit; ++k) {
    const auto scan = g.first_violator(x, eps);
    res.constraint_evals += scan.evaluations;
    const bool productive = !scan.violator.has_value();
    const double sk = std::sqrt(static_cast<double>(k));
    double fx = NAN;
    if (productive) {
      fx = f.evaluate(x, grad);
    } else {
      grad = g.alphas()[*scan.violator];
    }
    const double lk = norm(grad, dual);
    if (!(lk > 0.0)) {
      if (!productive) throw no_productive(where, "constraint subgradient vanished where g_i > eps", k);
      if (avg.empty()) avg.update(x, 1.0);
      res.stop_reason = StopReason::StationaryPoint;
      res.iterations = k - 1;
      finish_constrained(f, g, avg, x, res);
      return res;
    }
    const double gamma = root2s / (lk * sk);
    if (productive) {
      avg.update(x, gamma);
      ++res.productive_count;
    } else {
      ++res.nonproductive_count;
    }
    lhs_sum += std::pow(lk * sk / root2s, m);
    grad_sum += std::pow(sk, m - 1.0) * std::pow(lk, m + 1.0);
    const double rhs = cfg.theta * std::pow(big_m * sk / root2s, m + 1.0) +
                       grad_sum / std::pow(root2s, m + 1.0);
    const bool criterion = eps * lhs_sum >= rhs;

    if (cfg.record_trace) {
      TraceRecord rec;
      rec.k = k;
      rec.gamma = gamma;
      rec.f_iterate = productive ? fx : f.value(x);
      rec.g_iterate = scan.value;
      rec.productive = productive;
      rec.step_norm = lk;
      rec.constraint_evals = scan.evaluations;
      if (!avg.empty()) {
        avg.average_into(x_avg);
        rec.f_avg = f.value(x_avg);
      }
      res.trace.push_back(rec);
    }
    x = mirror_step(setup, set, x, grad, gamma);
    res.iterations = k;
    if (!std::isfinite(rhs) || !std::isfinite(lhs_sum)) {
      throw std::overflow_error(std::string(where) + ": stopping-rule sums overflowed; lower m");
    }
    if (criterion && cfg.stop_on_criterion) {
      if (res.productive_count == 0) throw no_productive(where, "stopping rule met with |I| = 0", k);
      res.stop_reason = StopReason::EpsilonCriterion;
      finish_constrained(f, g, avg, x, res);
      return res;
    }
  }
  if (res.productive_count == 0) {
    throw no_productive(where, "iterations exhausted", res.iterations);
  }
  res.stop_reason = StopReason::MaxIters;
  finish_constrained(f, g, avg, x, res);
  return res;
}

}  // namespace mdbench
