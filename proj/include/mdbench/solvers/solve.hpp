#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "mdbench/core/point.hpp"
#include "mdbench/problems/problems.hpp"
#include "mdbench/prox/geometry.hpp"
#include "mdbench/schedules/schedule.hpp"
#include "mdbench/solvers/bounds.hpp"

namespace mdbench {

struct RunConfig {
  double m = 0.0;                   // weighting exponent, >= -1
  std::optional<std::size_t> iters; // N
  std::optional<double> epsilon;    // accuracy target
  double theta = 2.0;               // V(x*, x1) <= theta
  bool record_trace = true;
  /// Constrained solvers only: stop as soon as the stopping rule holds.
  bool stop_on_criterion = true;
  /// Upper bound on iterations when only `epsilon` drives termination.
  std::size_t max_iters_cap = 10'000'000;
  /// Overrides the objective's known optimal value (Polyak).
  std::optional<double> f_star;

  void validate() const;
};

enum class StopReason { MaxIters, EpsilonCriterion, StationaryPoint };
std::string_view to_string(StopReason r) noexcept;

struct TraceRecord {
  std::size_t k = 0;
  double gamma = 0.0;
  double f_iterate = 0.0;            // f(x^k), or F = f + h for the composite method
  std::optional<double> f_avg;       // objective at the running weighted average
  std::optional<double> g_iterate;   // constrained runs
  std::optional<bool> productive;    // constrained runs
  std::optional<double> step_norm;   // L_k of the multi-constraint method
  std::optional<double> bound;       // accuracy bound, certified schedules only
  std::size_t constraint_evals = 0;  // evaluations spent in this iteration

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

using Trace = std::vector<TraceRecord>;

struct SolveResult {
  Point x_hat;
  double f_hat = 0.0;
  std::size_t iterations = 0;
  std::size_t productive_count = 0;
  std::size_t nonproductive_count = 0;
  StopReason stop_reason = StopReason::MaxIters;
  std::size_t constraint_evals = 0;
  std::optional<double> g_hat;
  /// Constrained accuracy bound after the last step, both readings.
  std::optional<ConstrainedBound> constrained_bound;
  Trace trace;
};

/// A constrained run ended without a single productive step.
class NoProductiveSteps : public std::runtime_error {
 public:
  NoProductiveSteps(const std::string& what, std::size_t iterations)
      : std::runtime_error(what), iterations_(iterations) {}
  std::size_t iterations() const noexcept { return iterations_; }

 private:
  std::size_t iterations_;
};

/// Subgradient, step size, mirror step, weighted average. Exits with
/// StationaryPoint on a zero subgradient (or a stationary schedule outcome);
/// x_hat is then the average of the completed iterations, or x1 at k = 1.
/// With only `epsilon` set, stops once the accuracy bound drops below it
/// (certified schedules only).
SolveResult mirror_descent(const Objective& f, const ProxSetup& setup, const FeasibleSet& set,
                           const ScheduleKind& schedule, const RunConfig& config, const Point& x1);

/// Composite variant for F = f + h. Requires -1 <= m <= 0. With h = zero the
/// trace is bit-identical to mirror_descent.
SolveResult mirror_c_descent(const Objective& f, const CompositeRegularizer& h,
                             const ProxSetup& setup, const FeasibleSet& set,
                             const ScheduleKind& schedule, const RunConfig& config,
                             const Point& x1);

/// Productive / non-productive switching with separate step rules for the
/// objective and constraint steps. Every iteration evaluates all p
/// constraints. The average covers productive iterates only.
SolveResult constrained_md(const Objective& f, const ConstraintBlock& g, const ProxSetup& setup,
                           const FeasibleSet& set, const ScheduleKind& sched_f,
                           const ScheduleKind& sched_g, const RunConfig& config, const Point& x1);

/// Many-constraint variant: scans g_1, g_2, ... and steps along the first
/// violator; steps are sqrt(2 sigma) / (L_k sqrt(k)).
SolveResult constrained_md_multi(const Objective& f, const ConstraintBlock& g,
                                 const ProxSetup& setup, const FeasibleSet& set,
                                 const RunConfig& config, const Point& x1);

}  // namespace mdbench
