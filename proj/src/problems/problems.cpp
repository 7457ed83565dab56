#include "mdbench/problems/problems.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mdbench/kernels/kernels.hpp"
#include "random.hpp"

namespace mdbench {
namespace {

void require_dim(std::size_t expected, const Point& x, std::string_view where) {
  if (x.size() != expected) {
    throw DimensionError(std::string(where) + ": expected dimension " + std::to_string(expected) +
                         ", got " + std::to_string(x.size()));
  }
}

double dist2(const Point& a, const Point& b) {
  return std::sqrt(kernels::active().dist_sq(a.data(), b.data(), a.size()));
}

void reset(Point& grad, std::size_t n) {
  if (grad.size() != n) {
    grad = Point::zeros(n);
  } else {
    for (double& v : grad.coords()) v = 0.0;
  }
}

// grad = (x - a) / r, or zero when r == 0.
void unit_radial(const Point& x, const Point& a, double r, Point& grad) {
  reset(grad, x.size());
  if (r == 0.0) return;
  axpy(1.0 / r, x, grad);
  axpy(-1.0 / r, a, grad);
}

std::size_t check_points(const std::vector<Point>& pts, std::string_view where) {
  if (pts.empty()) throw std::invalid_argument(std::string(where) + ": need at least one point");
  const std::size_t n = pts.front().size();
  for (const auto& p : pts) require_dim(n, p, where);
  return n;
}

}  // namespace

std::string_view to_string(ProblemKind kind) noexcept {
  switch (kind) {
    case ProblemKind::BestApprox: return "best-approx";
    case ProblemKind::FTS: return "fts";
    case ProblemKind::CoveringBall: return "covering-ball";
    case ProblemKind::MaxLinear: return "max-linear";
  }
  return "?";
}

std::optional<ProblemKind> parse_problem_kind(std::string_view name) noexcept {
  for (auto k : {ProblemKind::BestApprox, ProblemKind::FTS, ProblemKind::CoveringBall,
                 ProblemKind::MaxLinear}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

std::string_view to_string(Distribution d) noexcept {
  return d == Distribution::Uniform01 ? "uniform" : "normal";
}

std::optional<Distribution> parse_distribution(std::string_view name) noexcept {
  if (name == "uniform") return Distribution::Uniform01;
  if (name == "normal") return Distribution::StandardNormal;
  return std::nullopt;
}

Objective::Objective(ProblemKind kind, std::vector<Point> points, std::vector<double> offsets,
                     std::optional<double> known_fstar)
    : kind_(kind),
      dim_(check_points(points, to_string(kind))),
      points_(std::move(points)),
      offsets_(std::move(offsets)),
      known_fstar_(known_fstar) {}

Objective Objective::best_approx(Point target, std::optional<double> known_fstar) {
  return Objective(ProblemKind::BestApprox, {std::move(target)}, {}, known_fstar);
}

Objective Objective::fts(std::vector<Point> points) {
  return Objective(ProblemKind::FTS, std::move(points), {}, std::nullopt);
}

Objective Objective::covering_ball(std::vector<Point> points) {
  return Objective(ProblemKind::CoveringBall, std::move(points), {}, std::nullopt);
}

Objective Objective::max_linear(std::vector<Point> slopes, std::vector<double> offsets) {
  if (slopes.size() != offsets.size()) {
    throw std::invalid_argument("max-linear: slopes and offsets differ in count");
  }
  for (double b : offsets) {
    if (!std::isfinite(b)) throw std::invalid_argument("max-linear: offsets must be finite");
  }
  return Objective(ProblemKind::MaxLinear, std::move(slopes), std::move(offsets), std::nullopt);
}

double Objective::value(const Point& x) const {
  require_dim(dim_, x, "Objective::value");
  const auto& k = kernels::active();
  switch (kind_) {
    case ProblemKind::BestApprox: return dist2(x, points_.front());
    case ProblemKind::FTS: {
      double s = 0.0;
      for (const auto& a : points_) s += dist2(x, a);
      return s / static_cast<double>(points_.size());
    }
    case ProblemKind::CoveringBall: {
      double best = -INFINITY;
      for (const auto& a : points_) best = std::max(best, dist2(x, a));
      return best;
    }
    case ProblemKind::MaxLinear: {
      double best = -INFINITY;
      for (std::size_t i = 0; i < points_.size(); ++i) {
        best = std::max(best, k.dot(points_[i].data(), x.data(), dim_) + offsets_[i]);
      }
      return best;
    }
  }
  return NAN;
}

double Objective::evaluate(const Point& x, Point& grad) const {
  require_dim(dim_, x, "Objective::evaluate");
  const auto& k = kernels::active();
  switch (kind_) {
    case ProblemKind::BestApprox: {
      const double r = dist2(x, points_.front());
      unit_radial(x, points_.front(), r, grad);
      return r;
    }
    case ProblemKind::FTS: {
      reset(grad, dim_);
      const double inv_t = 1.0 / static_cast<double>(points_.size());
      double sum = 0.0;
      double x_coeff = 0.0;
      for (const auto& a : points_) {
        const double r = dist2(x, a);
        sum += r;
        if (r > 0.0) {
          const double c = inv_t / r;
          x_coeff += c;
          axpy(-c, a, grad);
        }
      }
      axpy(x_coeff, x, grad);
      return sum * inv_t;
    }
    case ProblemKind::CoveringBall: {
      std::size_t arg = 0;
      double best = -INFINITY;
      for (std::size_t j = 0; j < points_.size(); ++j) {
        const double r = dist2(x, points_[j]);
        if (r > best) {
          best = r;
          arg = j;
        }
      }
      unit_radial(x, points_[arg], best, grad);
      return best;
    }
    case ProblemKind::MaxLinear: {
      std::size_t arg = 0;
      double best = -INFINITY;
      for (std::size_t i = 0; i < points_.size(); ++i) {
        const double v = k.dot(points_[i].data(), x.data(), dim_) + offsets_[i];
        if (v > best) {
          best = v;
          arg = i;
        }
      }
      grad = points_[arg];
      return best;
    }
  }
  return NAN;
}

double Objective::lipschitz(NormKind dual) const {
  if (kind_ == ProblemKind::MaxLinear) {
    double m = 0.0;
    for (const auto& a : points_) m = std::max(m, norm(a, dual));
    return m;
  }
  // Subgradients are (averages of) vectors of unit Euclidean length.
  if (dual == NormKind::L1) return std::sqrt(static_cast<double>(dim_));
  return 1.0;
}

ConstraintBlock::ConstraintBlock(std::vector<Point> alphas, std::vector<double> betas)
    : alphas_(std::move(alphas)), betas_(std::move(betas)) {
  check_points(alphas_, "ConstraintBlock");
  if (alphas_.size() != betas_.size()) {
    throw std::invalid_argument("ConstraintBlock: alphas and betas differ in count");
  }
  for (double b : betas_) {
    if (!std::isfinite(b)) throw std::invalid_argument("ConstraintBlock: betas must be finite");
  }
}

double ConstraintBlock::value_at(std::size_t i, const Point& x) const {
  require_dim(dimension(), x, "ConstraintBlock::value_at");
  return kernels::active().dot(alphas_[i].data(), x.data(), x.size()) - betas_[i];
}

double ConstraintBlock::value(const Point& x, std::size_t* argmax) const {
  double best = -INFINITY;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < alphas_.size(); ++i) {
    const double v = value_at(i, x);
    if (v > best) {
      best = v;
      arg = i;
    }
  }
  if (argmax != nullptr) *argmax = arg;
  return best;
}

double ConstraintBlock::evaluate(const Point& x, Point& grad) const {
  std::size_t arg = 0;
  const double v = value(x, &arg);
  grad = alphas_[arg];
  return v;
}

ConstraintBlock::Scan ConstraintBlock::first_violator(const Point& x, double eps) const {
  double best = -INFINITY;
  for (std::size_t i = 0; i < alphas_.size(); ++i) {
    const double v = value_at(i, x);
    if (v > eps) return {i, i + 1, v};
    best = std::max(best, v);
  }
  return {std::nullopt, alphas_.size(), best};
}

double ConstraintBlock::lipschitz(NormKind dual) const {
  double m = 0.0;
  for (const auto& a : alphas_) m = std::max(m, norm(a, dual));
  return m;
}

namespace {

Point uniform_point(detail::Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (double& c : v) c = rng.uniform01();
  return Point(std::move(v));
}

std::vector<Point> uniform_points(detail::Rng& rng, std::size_t count, std::size_t n) {
  std::vector<Point> out;
  out.reserve(count);
  for (std::size_t j = 0; j < count; ++j) out.push_back(uniform_point(rng, n));
  return out;
}

void require_sizes(const InstanceSpec& spec, bool needs_terms) {
  if (spec.n == 0) throw std::invalid_argument("instance: n must be at least 1");
  if (needs_terms && spec.terms == 0) throw std::invalid_argument("instance: T must be at least 1");
}

}  // namespace

Objective make_best_approx(const InstanceSpec& spec) {
  require_sizes(spec, false);
  detail::Rng rng(spec.seed, detail::kObjectiveStream);
  Point a = uniform_point(rng, spec.n);
  const double len = norm(a, NormKind::L2);
  if (len == 0.0) throw std::runtime_error("best-approx: drew the zero vector");
  for (double& c : a.coords()) c *= 10.0 / len;
  return Objective::best_approx(std::move(a), 9.0);
}

Objective make_fts(const InstanceSpec& spec) {
  require_sizes(spec, true);
  detail::Rng rng(spec.seed, detail::kObjectiveStream);
  return Objective::fts(uniform_points(rng, spec.terms, spec.n));
}

Objective make_covering_ball(const InstanceSpec& spec) {
  require_sizes(spec, true);
  detail::Rng rng(spec.seed, detail::kObjectiveStream);
  return Objective::covering_ball(uniform_points(rng, spec.terms, spec.n));
}

Objective make_max_linear(const InstanceSpec& spec) {
  require_sizes(spec, true);
  detail::Rng rng(spec.seed, detail::kObjectiveStream);
  std::vector<Point> a;
  std::vector<double> b;
  a.reserve(spec.terms);
  b.reserve(spec.terms);
  for (std::size_t i = 0; i < spec.terms; ++i) {
    a.push_back(uniform_point(rng, spec.n));
    b.push_back(rng.uniform01());
  }
  return Objective::max_linear(std::move(a), std::move(b));
}

Objective make_objective(const InstanceSpec& spec) {
  switch (spec.kind) {
    case ProblemKind::BestApprox: return make_best_approx(spec);
    case ProblemKind::FTS: return make_fts(spec);
    case ProblemKind::CoveringBall: return make_covering_ball(spec);
    case ProblemKind::MaxLinear: return make_max_linear(spec);
  }
  throw std::invalid_argument("instance: unknown problem kind");
}

ConstraintBlock make_constraints(const InstanceSpec& spec) {
  if (spec.n == 0) throw std::invalid_argument("instance: n must be at least 1");
  if (spec.constraints == 0) throw std::invalid_argument("instance: p must be at least 1");
  detail::Rng rng(spec.seed, detail::kConstraintStream);
  auto draw = [&] {
    return spec.distribution == Distribution::Uniform01 ? rng.uniform01() : rng.normal();
  };
  std::vector<Point> alphas;
  std::vector<double> betas;
  alphas.reserve(spec.constraints);
  betas.reserve(spec.constraints);
  for (std::size_t i = 0; i < spec.constraints; ++i) {
    std::vector<double> a(spec.n);
    for (double& c : a) c = draw();
    alphas.emplace_back(std::move(a));
    betas.push_back(draw());
  }
  return ConstraintBlock(std::move(alphas), std::move(betas));
}

Instance make_instance(const InstanceSpec& spec) {
  Instance inst{spec, make_objective(spec), std::nullopt};
  if (spec.constraints > 0) inst.constraints = make_constraints(spec);
  return inst;
}

}  // namespace mdbench
