#pragma once

#include <cstddef>
#include <variant>

#include "mdbench/core/point.hpp"

namespace mdbench {

/// Slack used by every feasibility test in the library.
inline constexpr double kMembershipSlack = 1e-12;

/// Coordinates of entropy iterates are clamped to this floor before logs.
inline constexpr double kEntropyFloor = 1e-300;

/// Euclidean ball {x : ||x - center||_2 <= radius}.
struct Ball {
  Point center;
  double radius;
};

/// Probability simplex {x >= 0 : sum x = 1} in dimension `dim`.
struct Simplex {
  std::size_t dim;
};

/// Compact convex feasible set Q.
class FeasibleSet {
 public:
  static FeasibleSet ball(Point center, double radius);
  static FeasibleSet unit_ball(std::size_t n);
  static FeasibleSet simplex(std::size_t n);

  std::size_t dimension() const noexcept;
  bool contains(const Point& x, double slack = kMembershipSlack) const;

  bool is_ball() const noexcept { return std::holds_alternative<Ball>(set_); }
  bool is_simplex() const noexcept { return std::holds_alternative<Simplex>(set_); }
  const Ball& as_ball() const { return std::get<Ball>(set_); }

 private:
  explicit FeasibleSet(std::variant<Ball, Simplex> set) : set_(std::move(set)) {}
  std::variant<Ball, Simplex> set_;
};

enum class PsiKind { EuclideanHalfSq, NegEntropy };

/// Prox-function psi with its strong-convexity modulus and primal norm.
///
/// Only the two closed-form setups exist: 1/2||x||_2^2 (sigma 1, L2) and the
/// negative entropy sum x_i ln x_i (sigma 1 w.r.t. L1 on the simplex).
class ProxSetup {
 public:
  static ProxSetup euclidean() noexcept { return {PsiKind::EuclideanHalfSq, 1.0, NormKind::L2}; }
  static ProxSetup entropy() noexcept { return {PsiKind::NegEntropy, 1.0, NormKind::L1}; }

  PsiKind kind() const noexcept { return kind_; }
  double sigma() const noexcept { return sigma_; }
  NormKind norm() const noexcept { return norm_; }
  NormKind dual_norm() const noexcept { return dual_norm_kind(norm_); }

 private:
  ProxSetup(PsiKind kind, double sigma, NormKind norm) : kind_(kind), sigma_(sigma), norm_(norm) {}
  PsiKind kind_;
  double sigma_;
  NormKind norm_;
};

/// Simple nonnegative regularizer h of the composite model F = f + h.
class CompositeRegularizer {
 public:
  static CompositeRegularizer zero() noexcept { return CompositeRegularizer(0.0, false); }
  /// lambda * ||x||_1, lambda >= 0.
  static CompositeRegularizer l1(double lambda);

  bool is_zero() const noexcept { return !l1_; }
  double lambda() const noexcept { return lambda_; }
  double value(const Point& x) const;

 private:
  CompositeRegularizer(double lambda, bool l1) : lambda_(lambda), l1_(l1) {}
  double lambda_;
  bool l1_;
};

double psi(const ProxSetup& setup, const Point& x);
Point grad_psi(const ProxSetup& setup, const Point& x);

/// V_psi(x, y) = psi(x) - psi(y) - <grad psi(y), x - y>.
double bregman(const ProxSetup& setup, const Point& x, const Point& y);

/// Euclidean projection onto `set`.
Point project(const FeasibleSet& set, const Point& x);

/// argmin_{x' in Q} <x', g> + V_psi(x', x) / gamma.
Point mirror_step(const ProxSetup& setup, const FeasibleSet& set, const Point& x, const Point& g,
                  double gamma);

/// argmin_{x' in Q} gamma <x', g> + gamma h(x') + V_psi(x', x).
Point composite_mirror_step(const ProxSetup& setup, const FeasibleSet& set, const Point& x,
                            const Point& g, double gamma, const CompositeRegularizer& h);

}  // namespace mdbench
