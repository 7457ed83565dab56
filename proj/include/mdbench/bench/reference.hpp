#pragma once

#include <cstddef>
#include <limits>
#include <string_view>
#include <vector>

#include "mdbench/problems/problems.hpp"
#include "mdbench/prox/geometry.hpp"

namespace mdbench {

enum class ReferenceMethod { Analytic, GridRefine, LongRun };
std::string_view to_string(ReferenceMethod m) noexcept;

/// Best known optimal value with the error it may carry: f* lies in
/// [f_min - tolerance, f_min].
struct ReferenceSolution {
  double f_min = 0.0;
  ReferenceMethod method = ReferenceMethod::LongRun;
  double tolerance = 0.0;
};

/// Tolerance GridRefine refines down to.
inline constexpr double kGridTolerance = 1e-6;

/// Default theta for a set and setup: 2 r^2 on a ball, ln n for entropy on
/// the simplex, 1 for the Euclidean setup on the simplex.
double default_theta(const FeasibleSet& set, const ProxSetup& setup);

/// Start point convention: (1/sqrt n, ...) on the unit ball (the center of any
/// other ball), the barycenter of the simplex.
Point default_start(const FeasibleSet& set);

/// Analytic for best-approx on a ball and single-piece max-linear on a ball,
/// GridRefine for n <= 3, LongRun otherwise (m = 5, time-varying steps,
/// 50 * budget iterations, tolerance = rate bound at that length).
ReferenceSolution reference_solution(const Objective& f, const FeasibleSet& set,
                                     const ProxSetup& setup = ProxSetup::euclidean(),
                                     std::size_t budget = 10'000);

/// Nested grid search; n <= 3.
ReferenceSolution grid_refine(const Objective& f, const FeasibleSet& set);

/// Constrained optimum of f over {x in ball : g(x) <= 0}, Euclidean setup.
/// f_min is f at an exactly feasible point obtained from a long constrained
/// run; for max-linear objectives the tolerance is the gap to a Lagrangian
/// dual lower bound, otherwise the run's accuracy bound.
/// Throws std::runtime_error when no strictly feasible point is found.
ReferenceSolution reference_solution_constrained(const Objective& f, const ConstraintBlock& g,
                                                 const FeasibleSet& set,
                                                 std::size_t budget = 10'000);

/// Lagrangian dual of min max_i(<a_i,x> + b_i) s.t. <alpha_j,x> <= beta_j over
/// a ball, maximized over the multipliers by smoothed accelerated ascent.
/// `lower` is a valid lower bound on the constrained optimum; `primal` is the
/// ball point recovered from the final multipliers (not necessarily feasible).
struct MaxLinearDual {
  double lower;
  Point primal;
  std::vector<double> multipliers;  // T objective pieces, then p constraints
};
MaxLinearDual max_linear_dual(const Objective& f, const ConstraintBlock* g, const Ball& ball,
                              std::size_t max_iters = 80'000);

}  // namespace mdbench
