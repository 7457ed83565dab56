#include "mdbench/prox/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "mdbench/kernels/kernels.hpp"

namespace mdbench {
namespace {

void require_dimension(const FeasibleSet& set, const Point& x, std::string_view where) {
  if (set.dimension() != x.size()) {
    throw DimensionError(std::string(where) + ": point has dimension " + std::to_string(x.size()) +
                         ", set has dimension " + std::to_string(set.dimension()));
  }
}

void require_step(double gamma, std::string_view where) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument(std::string(where) + ": step size must be positive and finite");
  }
}

void require_positive(const Point& x, std::string_view where) {
  for (double v : x.coords()) {
    if (!(v > 0.0)) {
      throw DomainError(std::string(where) +
                        ": negative entropy needs strictly positive coordinates");
    }
  }
}

Point project_ball(const Ball& b, const Point& x) {
  const double dist = distance(x, b.center, NormKind::L2);
  if (dist <= b.radius) return x;
  Point out = b.center;
  // center + (x - center) * radius / dist
  const double s = b.radius / dist;
  axpby(s, x, 1.0 - s, out);
  // The blend above can land a rounding error outside; pull back radially.
  if (distance(out, b.center, NormKind::L2) > b.radius) {
    Point d = out - b.center;
    const double shrink = b.radius / norm(d, NormKind::L2);
    out = b.center;
    axpy(shrink, d, out);
  }
  return out;
}

Point project_simplex(const Point& x) {
  std::vector<double> u(x.coords().begin(), x.coords().end());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0;
  double tau = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cumsum += u[j];
    const double t = (cumsum - 1.0) / static_cast<double>(j + 1);
    if (u[j] - t >= 0.0) tau = t;
  }
  Point out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::max(x[i] - tau, 0.0);
  return out;
}

Point entropy_step(const Point& x, const Point& g, double gamma) {
  std::vector<double> w(x.size());
  double wmax = -INFINITY;
  for (std::size_t i = 0; i < x.size(); ++i) {
    w[i] = std::log(std::max(x[i], kEntropyFloor)) - gamma * g[i];
    wmax = std::max(wmax, w[i]);
  }
  double total = 0.0;
  for (double& v : w) {
    v = std::exp(v - wmax);
    total += v;
  }
  Point out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = w[i] / total;
  return out;
}

double soft(double v, double thr) {
  if (v > thr) return v - thr;
  if (v < -thr) return v + thr;
  return 0.0;
}

// argmin gamma*lambda*||x||_1 + 1/2||x - z||^2 over the ball. Without the
// ball the answer is soft(z, gamma*lambda). When that is exterior the ball
// multiplier mu > 0 solves ||x(mu) - c|| = r with
// x(mu) = soft((z + mu c) / (1 + mu), gamma*lambda / (1 + mu)).
Point l1_ball_step(const Ball& b, const Point& z, double thr) {
  const std::size_t n = z.size();
  auto solve = [&](double mu) {
    Point out(n);
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = soft((z[i] + mu * b.center[i]) / (1.0 + mu), thr / (1.0 + mu));
    }
    return out;
  };
  Point x0 = solve(0.0);
  if (distance(x0, b.center, NormKind::L2) <= b.radius) return x0;

  if (norm(b.center, NormKind::Linf) == 0.0) return project_ball(b, x0);

  double lo = 0.0;
  double hi = 1.0;
  while (distance(solve(hi), b.center, NormKind::L2) > b.radius) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw std::runtime_error("composite_mirror_step: multiplier bracket failed");
  }
  for (int it = 0; it < 4000 && hi - lo > 1e-12 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (distance(solve(mid), b.center, NormKind::L2) > b.radius) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return solve(hi);
}

}  // namespace

FeasibleSet FeasibleSet::ball(Point center, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw std::invalid_argument("FeasibleSet::ball: radius must be positive and finite");
  }
  return FeasibleSet(Ball{std::move(center), radius});
}

FeasibleSet FeasibleSet::unit_ball(std::size_t n) { return ball(Point::zeros(n), 1.0); }

FeasibleSet FeasibleSet::simplex(std::size_t n) {
  if (n == 0) throw DimensionError("FeasibleSet::simplex: dimension must be at least 1");
  return FeasibleSet(Simplex{n});
}

std::size_t FeasibleSet::dimension() const noexcept {
  if (const auto* b = std::get_if<Ball>(&set_)) return b->center.size();
  return std::get<Simplex>(set_).dim;
}

bool FeasibleSet::contains(const Point& x, double slack) const {
  if (x.size() != dimension() || !x.all_finite()) return false;
  if (const auto* b = std::get_if<Ball>(&set_)) {
    return distance(x, b->center, NormKind::L2) <= b->radius + slack;
  }
  double sum = 0.0;
  for (double v : x.coords()) {
    if (v < -slack) return false;
    sum += v;
  }
  return std::fabs(sum - 1.0) <= slack;
}

CompositeRegularizer CompositeRegularizer::l1(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("CompositeRegularizer::l1: lambda must be nonnegative and finite");
  }
  return CompositeRegularizer(lambda, true);
}

double CompositeRegularizer::value(const Point& x) const {
  if (!l1_) return 0.0;
  return lambda_ * norm(x, NormKind::L1);
}

double psi(const ProxSetup& setup, const Point& x) {
  if (setup.kind() == PsiKind::EuclideanHalfSq) {
    return 0.5 * kernels::active().sum_sq(x.data(), x.size());
  }
  require_positive(x, "psi");
  double s = 0.0;
  for (double v : x.coords()) s += v * std::log(v);
  return s;
}

Point grad_psi(const ProxSetup& setup, const Point& x) {
  if (setup.kind() == PsiKind::EuclideanHalfSq) return x;
  require_positive(x, "grad_psi");
  Point out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = 1.0 + std::log(x[i]);
  return out;
}

double bregman(const ProxSetup& setup, const Point& x, const Point& y) {
  require_same_size(x, y, "bregman");
  if (setup.kind() == PsiKind::EuclideanHalfSq) {
    return 0.5 * kernels::active().dist_sq(x.data(), y.data(), x.size());
  }
  require_positive(x, "bregman");
  require_positive(y, "bregman");
  // Generalized KL; equals sum x ln(x/y) on the simplex.
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * std::log(x[i] / y[i]) - x[i] + y[i];
  return std::max(s, 0.0);
}

Point project(const FeasibleSet& set, const Point& x) {
  require_dimension(set, x, "project");
  if (set.is_ball()) return project_ball(set.as_ball(), x);
  return project_simplex(x);
}

Point mirror_step(const ProxSetup& setup, const FeasibleSet& set, const Point& x, const Point& g,
                  double gamma) {
  require_step(gamma, "mirror_step");
  require_dimension(set, x, "mirror_step");
  require_same_size(x, g, "mirror_step");
  if (!set.contains(x)) throw std::invalid_argument("mirror_step: current point is not feasible");

  if (setup.kind() == PsiKind::EuclideanHalfSq) {
    Point z = x;
    axpy(-gamma, g, z);
    return project(set, z);
  }
  if (!set.is_simplex()) {
    throw std::invalid_argument("mirror_step: negative entropy is only supported on the simplex");
  }
  return entropy_step(x, g, gamma);
}

Point composite_mirror_step(const ProxSetup& setup, const FeasibleSet& set, const Point& x,
                            const Point& g, double gamma, const CompositeRegularizer& h) {
  if (h.is_zero()) return mirror_step(setup, set, x, g, gamma);
  require_step(gamma, "composite_mirror_step");
  require_dimension(set, x, "composite_mirror_step");
  require_same_size(x, g, "composite_mirror_step");
  if (setup.kind() != PsiKind::EuclideanHalfSq || !set.is_ball()) {
    throw std::invalid_argument(
        "composite_mirror_step: the L1 regularizer is supported only with the Euclidean setup on a ball");
  }
  if (!set.contains(x)) {
    throw std::invalid_argument("composite_mirror_step: current point is not feasible");
  }
  Point z = x;
  axpy(-gamma, g, z);
  return l1_ball_step(set.as_ball(), z, gamma * h.lambda());
}

}  // namespace mdbench
