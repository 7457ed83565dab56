#include "mdbench/bench/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "mdbench/solvers/bounds.hpp"
#include "mdbench/solvers/solve.hpp"

namespace mdbench {

std::string_view to_string(ReferenceMethod m) noexcept {
  switch (m) {
    case ReferenceMethod::Analytic: return "analytic";
    case ReferenceMethod::GridRefine: return "grid-refine";
    case ReferenceMethod::LongRun: return "long-run";
  }
  return "?";
}

double default_theta(const FeasibleSet& set, const ProxSetup& setup) {
  if (set.is_ball()) {
    const double r = set.as_ball().radius;
    return 2.0 * r * r;
  }
  if (setup.kind() == PsiKind::NegEntropy) {
    return std::max(std::log(static_cast<double>(set.dimension())), 1e-12);
  }
  return 1.0;
}

Point default_start(const FeasibleSet& set) {
  const std::size_t n = set.dimension();
  if (set.is_simplex()) return Point(n, 1.0 / static_cast<double>(n));
  const Ball& b = set.as_ball();
  if (b.radius == 1.0 && norm(b.center, NormKind::Linf) == 0.0) {
    return Point(n, 1.0 / std::sqrt(static_cast<double>(n)));
  }
  return b.center;
}

namespace {

ReferenceSolution long_run(const Objective& f, const FeasibleSet& set, const ProxSetup& setup,
                           std::size_t budget) {
  const double lip = f.lipschitz(setup.dual_norm());
  const double theta = default_theta(set, setup);
  RunConfig cfg;
  cfg.m = 5.0;
  cfg.iters = 50 * budget;
  cfg.theta = theta;
  cfg.record_trace = true;
  const SolveResult r =
      mirror_descent(f, setup, set, ScheduleKind::time_varying(lip), cfg, default_start(set));
  double best = r.f_hat;
  for (const auto& rec : r.trace) best = std::min(best, rec.f_iterate);
  const double tol =
      bound_corollary(MCase::AtLeastOne, std::max<std::size_t>(r.iterations, 1), lip, theta,
                      setup.sigma(), cfg.m);
  return {best, ReferenceMethod::LongRun, tol};
}

// Closest (x, t) to (x0, t0) on the affine set where every piece with a
// positive multiplier is tight: <a_i, x> + b_i = t and <alpha_j, x> = beta_j.
// Returns nullopt when the active rows are rank deficient.
std::optional<Point> active_set_point(const Objective& f, const ConstraintBlock& g,
                                      const std::vector<double>& y, const Point& x0) {
  const std::size_t n = f.dimension();
  const std::size_t t = f.terms();
  double ymax = 0.0;
  for (double v : y) ymax = std::max(ymax, v);
  std::vector<std::vector<double>> rows;  // over (x, t)
  std::vector<double> rhs;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!(y[i] > 1e-7 * ymax)) continue;
    std::vector<double> r(n + 1, 0.0);
    if (i < t) {
      for (std::size_t k = 0; k < n; ++k) r[k] = f.points()[i][k];
      r[n] = -1.0;
      rhs.push_back(-f.offsets()[i]);
    } else {
      for (std::size_t k = 0; k < n; ++k) r[k] = g.alphas()[i - t][k];
      rhs.push_back(g.betas()[i - t]);
    }
    rows.push_back(std::move(r));
  }
  const std::size_t m = rows.size();
  if (m == 0 || m > n + 1) return std::nullopt;
  std::vector<double> z(n + 1);
  for (std::size_t k = 0; k < n; ++k) z[k] = x0[k];
  z[n] = f.value(x0);
  // Solve (R R^T) u = R z - rhs, then z -= R^T u.
  std::vector<std::vector<double>> a(m, std::vector<double>(m + 1, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t k = 0; k <= n; ++k) a[i][j] += rows[i][k] * rows[j][k];
    }
    double rz = 0.0;
    for (std::size_t k = 0; k <= n; ++k) rz += rows[i][k] * z[k];
    a[i][m] = rz - rhs[i];
  }
  for (std::size_t c = 0; c < m; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < m; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    }
    if (std::abs(a[piv][c]) < 1e-12) return std::nullopt;
    std::swap(a[c], a[piv]);
    for (std::size_t r = 0; r < m; ++r) {
      if (r == c) continue;
      const double fac = a[r][c] / a[c][c];
      for (std::size_t k = c; k <= m; ++k) a[r][k] -= fac * a[c][k];
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    const double u = a[i][m] / a[i][i];
    for (std::size_t k = 0; k <= n; ++k) z[k] -= u * rows[i][k];
  }
  Point x(n);
  for (std::size_t k = 0; k < n; ++k) x[k] = z[k];
  if (!x.all_finite()) return std::nullopt;
  return x;
}

}  // namespace

ReferenceSolution grid_refine(const Objective& f, const FeasibleSet& set) {
  const std::size_t n = set.dimension();
  if (n > 3) throw std::invalid_argument("grid_refine: dimension must be at most 3");
  if (f.dimension() != n) throw DimensionError("grid_refine: objective and set dimensions differ");
  constexpr std::size_t kMaxCells = 1u << 21;

  // Branch and bound over axis-aligned cells of half-width h. A cell's lower
  // bound comes from the subgradient inequality at the projected centre q:
  // f(x) >= f(q) - sum_i |s_i| (|c_i - q_i| + h) for every x in cell and Q.
  Point root(n, 0.5);
  double h = 0.5;
  if (set.is_ball()) {
    root = set.as_ball().center;
    h = set.as_ball().radius;
  }
  auto touches_set = [&](const Point& c, double half) {
    if (set.is_ball()) {
      const Ball& b = set.as_ball();
      double d2 = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double gap = std::max(std::abs(c[i] - b.center[i]) - half, 0.0);
        d2 += gap * gap;
      }
      return d2 <= b.radius * b.radius * (1.0 + 1e-12);
    }
    double lo = 0.0, hi = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      lo += std::max(c[i] - half, 0.0);
      hi += std::min(c[i] + half, 1.0);
    }
    return lo <= 1.0 + 1e-12 && hi >= 1.0 - 1e-12;
  };

  std::vector<Point> cells{root};
  std::vector<double> lower;
  double best = std::numeric_limits<double>::infinity();
  double gap = std::numeric_limits<double>::infinity();
  Point grad;
  for (int level = 0; level < 64 && !cells.empty(); ++level) {
    lower.assign(cells.size(), 0.0);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const Point q = project(set, cells[c]);
      const double fq = f.evaluate(q, grad);
      best = std::min(best, fq);
      double slack = 0.0;
      for (std::size_t i = 0; i < n; ++i) slack += std::abs(grad[i]) * (std::abs(cells[c][i] - q[i]) + h);
      lower[c] = fq - slack;
    }
    const double global_lower = *std::min_element(lower.begin(), lower.end());
    gap = std::max(best - global_lower, 0.0);
    if (gap <= kGridTolerance) break;

    std::vector<Point> next;
    const double child = h / 2.0;
    const std::size_t fan = std::size_t{1} << n;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (lower[c] > best) continue;
      for (std::size_t mask = 0; mask < fan; ++mask) {
        Point p = cells[c];
        for (std::size_t i = 0; i < n; ++i) p[i] += (mask >> i & 1u) ? child : -child;
        if (touches_set(p, child)) next.push_back(std::move(p));
      }
    }
    if (next.size() > kMaxCells) break;  // report the gap reached so far
    cells = std::move(next);
    h = child;
  }
  return {best, ReferenceMethod::GridRefine, gap};
}

ReferenceSolution reference_solution(const Objective& f, const FeasibleSet& set,
                                     const ProxSetup& setup, std::size_t budget) {
  if (f.dimension() != set.dimension()) {
    throw DimensionError("reference_solution: objective and set dimensions differ");
  }
  if (set.is_ball()) {
    const Ball& b = set.as_ball();
    if (f.kind() == ProblemKind::BestApprox) {
      if (f.known_fstar() && b.radius == 1.0 && norm(b.center, NormKind::Linf) == 0.0) {
        return {*f.known_fstar(), ReferenceMethod::Analytic, 0.0};
      }
      const double d = distance(f.points().front(), b.center, NormKind::L2);
      return {std::max(d - b.radius, 0.0), ReferenceMethod::Analytic, 0.0};
    }
    if (f.kind() == ProblemKind::MaxLinear && f.terms() == 1) {
      const Point& a = f.points().front();
      const double v = inner(a, b.center) + f.offsets().front() - b.radius * norm(a, NormKind::L2);
      return {v, ReferenceMethod::Analytic, 0.0};
    }
  }
  if (set.dimension() <= 3) return grid_refine(f, set);
  return long_run(f, set, setup, budget);
}

MaxLinearDual max_linear_dual(const Objective& f, const ConstraintBlock* g, const Ball& ball,
                              std::size_t max_iters) {
  if (f.kind() != ProblemKind::MaxLinear) {
    throw std::invalid_argument("max_linear_dual: objective must be max-linear");
  }
  const std::size_t n = f.dimension();
  const std::size_t t = f.terms();
  const std::size_t p = g != nullptr ? g->count() : 0;
  const std::size_t dim = t + p;
  // Rows of the stacked multiplier map and their constant terms.
  std::vector<const Point*> rows;
  std::vector<double> consts;
  for (std::size_t i = 0; i < t; ++i) {
    rows.push_back(&f.points()[i]);
    consts.push_back(f.offsets()[i] + inner(f.points()[i], ball.center));
  }
  for (std::size_t j = 0; j < p; ++j) {
    rows.push_back(&g->alphas()[j]);
    consts.push_back(inner(g->alphas()[j], ball.center) - g->betas()[j]);
  }
  const FeasibleSet simplex = FeasibleSet::simplex(t);

  auto project_dual = [&](std::vector<double>& v) {
    std::vector<double> lam(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(t));
    const Point pl = project(simplex, Point(std::move(lam)));
    for (std::size_t i = 0; i < t; ++i) v[i] = pl[i];
    for (std::size_t j = t; j < dim; ++j) v[j] = std::max(v[j], 0.0);
  };
  auto stacked = [&](const std::vector<double>& y) {
    Point w = Point::zeros(n);
    for (std::size_t i = 0; i < dim; ++i) {
      if (y[i] != 0.0) axpy(y[i], *rows[i], w);
    }
    return w;
  };
  auto linear = [&](const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < dim; ++i) s += y[i] * consts[i];
    return s;
  };
  // d(y) = <y, consts> - r ||w(y)||. The smoothed d_delta replaces ||w|| by
  // sqrt(||w||^2 + delta^2), so d_delta <= d everywhere: any value of d_delta
  // (or of d) is a valid lower bound.
  auto smoothed = [&](const std::vector<double>& y, double delta, std::vector<double>* grad) {
    const Point w = stacked(y);
    const double wn = std::hypot(norm(w, NormKind::L2), delta);
    if (grad != nullptr) {
      grad->assign(dim, 0.0);
      for (std::size_t i = 0; i < dim; ++i) (*grad)[i] = consts[i] - ball.radius * inner(*rows[i], w) / wn;
    }
    return linear(y) - ball.radius * wn;
  };

  std::vector<double> y(dim, 0.0);
  for (std::size_t i = 0; i < t; ++i) y[i] = 1.0 / static_cast<double>(t);
  MaxLinearDual out{-std::numeric_limits<double>::infinity(), ball.center, {}};
  auto record = [&](const std::vector<double>& v, double delta) {
    const Point w = stacked(v);
    const double d = linear(v) - ball.radius * norm(w, NormKind::L2);
    if (d > out.lower) out.lower = d;
    // Minimizer of the smoothed Lagrangian over the ball.
    Point x = ball.center;
    axpy(-ball.radius / std::hypot(norm(w, NormKind::L2), delta), w, x);
    return x;
  };
  record(y, 1.0);

  std::vector<double> grad, cand(dim), z = y, y_prev = y;
  const std::size_t per_stage = std::max<std::size_t>(max_iters / 8, 1);
  for (double delta = 1e-1; delta >= 1e-8; delta /= 10.0) {
    double lip = 1.0;
    double tk = 1.0;
    z = y;
    double prev_val = smoothed(y, delta, nullptr);
    for (std::size_t it = 0; it < per_stage; ++it) {
      const double dz = smoothed(z, delta, &grad);
      double dc = 0.0;
      for (int bt = 0; bt < 80; ++bt) {
        for (std::size_t i = 0; i < dim; ++i) cand[i] = z[i] + grad[i] / lip;
        project_dual(cand);
        dc = smoothed(cand, delta, nullptr);
        double lin = 0.0;
        double sq = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
          lin += grad[i] * (cand[i] - z[i]);
          sq += (cand[i] - z[i]) * (cand[i] - z[i]);
        }
        if (dc >= dz + lin - 0.5 * lip * sq) break;
        lip *= 2.0;
      }
      y_prev = y;
      y = cand;
      if (dc < prev_val) {
        tk = 1.0;  // restart the momentum when the value drops
        z = y;
      } else {
        const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
        for (std::size_t i = 0; i < dim; ++i) z[i] = y[i] + (tk - 1.0) / tn * (y[i] - y_prev[i]);
        project_dual(z);
        tk = tn;
      }
      prev_val = dc;
      out.lower = std::max(out.lower, dc);
      lip *= 0.9;
    }
    out.primal = record(y, delta);
  }
  out.multipliers = y;
  return out;
}

ReferenceSolution reference_solution_constrained(const Objective& f, const ConstraintBlock& g,
                                                 const FeasibleSet& set, std::size_t budget) {
  if (!set.is_ball()) {
    throw std::invalid_argument("reference_solution_constrained: the set must be a ball");
  }
  const ProxSetup setup = ProxSetup::euclidean();
  const Ball& ball = set.as_ball();
  const double theta = default_theta(set, setup);

  // Strictly feasible anchor: minimize g itself over the ball.
  std::vector<double> neg_beta;
  for (double b : g.betas()) neg_beta.push_back(-b);
  const Objective g_obj = Objective::max_linear(g.alphas(), neg_beta);
  Point anchor = ball.center;
  if (!(g.value(anchor) < 0.0)) {
    RunConfig cfg;
    cfg.m = 5.0;
    cfg.iters = 10 * budget;
    cfg.theta = theta;
    cfg.record_trace = false;
    anchor = mirror_descent(g_obj, setup, set, ScheduleKind::time_varying(g.lipschitz(NormKind::L2)),
                            cfg, ball.center)
                 .x_hat;
    if (!(g.value(anchor) < 0.0)) {
      throw std::runtime_error(
          "reference_solution_constrained: no strictly feasible point found (g_min >= 0)");
    }
  }

  RunConfig cfg;
  cfg.m = 5.0;
  cfg.iters = 50 * budget;
  cfg.epsilon = 1e-9;
  cfg.theta = theta;
  cfg.record_trace = false;
  cfg.stop_on_criterion = false;
  const SolveResult run = constrained_md(
      f, g, setup, set, ScheduleKind::time_varying(f.lipschitz(NormKind::L2)),
      ScheduleKind::time_varying(g.lipschitz(NormKind::L2)), cfg, ball.center);

  // Pull a candidate toward the anchor until every constraint holds exactly.
  auto make_feasible = [&](const Point& cand) {
    const Point dir = cand - anchor;
    double s = 1.0;
    for (std::size_t j = 0; j < g.count(); ++j) {
      const double at_anchor = g.value_at(j, anchor);
      const double slope = inner(g.alphas()[j], dir);
      if (at_anchor + slope > 0.0 && slope > 0.0) s = std::min(s, -at_anchor / slope);
    }
    Point x = anchor;
    axpy(s, dir, x);
    while ((g.value(x) > 0.0 || !set.contains(x, 0.0)) && s > 0.0) {
      s *= 1.0 - 1e-12;
      x = anchor;
      axpy(s, dir, x);
    }
    return x;
  };
  double primal = f.value(make_feasible(run.x_hat));

  double tol;
  if (f.kind() == ProblemKind::MaxLinear) {
    const MaxLinearDual dual = max_linear_dual(f, &g, ball, 80'000);
    const Point recovered = project(set, dual.primal);
    primal = std::min(primal, f.value(make_feasible(recovered)));
    if (const auto polished = active_set_point(f, g, dual.multipliers, recovered)) {
      primal = std::min(primal, f.value(make_feasible(project(set, *polished))));
    }
    tol = std::max(primal - dual.lower, 0.0);
  } else {
    tol = run.constrained_bound ? std::max(run.constrained_bound->without_eps_term, 0.0) : INFINITY;
  }
  return {primal, ReferenceMethod::LongRun, tol};
}

}  // namespace mdbench
