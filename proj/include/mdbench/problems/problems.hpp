#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "mdbench/core/point.hpp"

namespace mdbench {

enum class ProblemKind { BestApprox, FTS, CoveringBall, MaxLinear };

std::string_view to_string(ProblemKind kind) noexcept;
/// CLI spellings: best-approx, fts, covering-ball, max-linear.
std::optional<ProblemKind> parse_problem_kind(std::string_view name) noexcept;

/// Convex Lipschitz objective f with a deterministic subgradient selection.
///
/// Subgradient conventions: the radial term of ||x - A|| contributes zero at
/// x = A; max-type objectives use the lowest maximizing index.
class Objective {
 public:
  /// f(x) = ||x - target||_2.
  static Objective best_approx(Point target, std::optional<double> known_fstar = std::nullopt);
  /// f(x) = (1/T) sum_j ||x - A_j||_2.
  static Objective fts(std::vector<Point> points);
  /// f(x) = max_j ||x - A_j||_2.
  static Objective covering_ball(std::vector<Point> points);
  /// f(x) = max_i <a_i, x> + b_i.
  static Objective max_linear(std::vector<Point> slopes, std::vector<double> offsets);

  ProblemKind kind() const noexcept { return kind_; }
  std::size_t dimension() const noexcept { return dim_; }
  std::size_t terms() const noexcept { return points_.size(); }

  double value(const Point& x) const;
  /// Returns f(x) and writes a subgradient into `grad` (resized as needed).
  double evaluate(const Point& x, Point& grad) const;

  /// Bound on ||subgradient||_* under the given dual norm.
  double lipschitz(NormKind dual) const;

  std::optional<double> known_fstar() const noexcept { return known_fstar_; }

  const std::vector<Point>& points() const noexcept { return points_; }
  const std::vector<double>& offsets() const noexcept { return offsets_; }

 private:
  Objective(ProblemKind kind, std::vector<Point> points, std::vector<double> offsets,
            std::optional<double> known_fstar);

  ProblemKind kind_;
  std::size_t dim_;
  // BestApprox: {A}; FTS/CoveringBall: A_j; MaxLinear: a_i.
  std::vector<Point> points_;
  // MaxLinear: b_i.
  std::vector<double> offsets_;
  std::optional<double> known_fstar_;
};

/// g(x) = max_i <alpha_i, x> - beta_i.
class ConstraintBlock {
 public:
  ConstraintBlock(std::vector<Point> alphas, std::vector<double> betas);

  std::size_t count() const noexcept { return alphas_.size(); }
  std::size_t dimension() const noexcept { return alphas_.front().size(); }

  double value_at(std::size_t i, const Point& x) const;
  /// max-aggregated value; `argmax` receives the lowest maximizing index.
  double value(const Point& x, std::size_t* argmax = nullptr) const;
  /// Writes alpha_{argmax} into `grad` and returns g(x).
  double evaluate(const Point& x, Point& grad) const;

  struct Scan {
    std::optional<std::size_t> violator;  // first i with g_i(x) > eps
    std::size_t evaluations;
    double value;  // g_violator(x), or max_i g_i(x) when there is none
  };
  /// Evaluates g_1, g_2, ... in order and stops at the first g_i(x) > eps.
  Scan first_violator(const Point& x, double eps) const;

  /// M_g = max_i ||alpha_i||_*.
  double lipschitz(NormKind dual) const;

  const std::vector<Point>& alphas() const noexcept { return alphas_; }
  const std::vector<double>& betas() const noexcept { return betas_; }

 private:
  std::vector<Point> alphas_;
  std::vector<double> betas_;
};

enum class Distribution { Uniform01, StandardNormal };

std::string_view to_string(Distribution d) noexcept;
std::optional<Distribution> parse_distribution(std::string_view name) noexcept;

/// Seeded description of a random instance. Objective data is always drawn
/// uniform over [0, 1); `distribution` governs the constraint data.
struct InstanceSpec {
  ProblemKind kind = ProblemKind::BestApprox;
  std::size_t n = 2;
  std::size_t terms = 1;        // T
  std::size_t constraints = 0;  // p
  std::uint64_t seed = 0;
  Distribution distribution = Distribution::Uniform01;

  friend bool operator==(const InstanceSpec&, const InstanceSpec&) = default;
};

/// A uniform in [0,1)^n rescaled to ||A||_2 = 10; known f* = 9 on the unit ball.
Objective make_best_approx(const InstanceSpec& spec);
Objective make_fts(const InstanceSpec& spec);
Objective make_covering_ball(const InstanceSpec& spec);
Objective make_max_linear(const InstanceSpec& spec);
Objective make_objective(const InstanceSpec& spec);
ConstraintBlock make_constraints(const InstanceSpec& spec);

struct Instance {
  InstanceSpec spec;
  Objective objective;
  std::optional<ConstraintBlock> constraints;
};

/// Objective plus (when spec.constraints > 0) the constraint block.
Instance make_instance(const InstanceSpec& spec);

}  // namespace mdbench
