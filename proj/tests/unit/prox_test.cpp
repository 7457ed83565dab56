#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mdbench/prox/geometry.hpp"
#include "oracles.hpp"

using namespace mdbench;
using oracle::Vec;

namespace {

double max_dev(const Point& a, const Vec& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

// Direct Euclidean ball projection.
Vec ball_projection(const Vec& x, double r) {
  const double n = static_cast<double>(oracle::norm2(x));
  if (n <= r) return x;
  Vec out = x;
  for (auto& v : out) v *= r / n;
  return out;
}

// <y, g> + V(y, x) / gamma with V computed by the oracle for either setup.
long double step_objective(PsiKind kind, const Vec& y, const Vec& x, const Vec& g, double gamma) {
  long double v;
  if (kind == PsiKind::EuclideanHalfSq) {
    long double s = 0.0L;
    for (std::size_t i = 0; i < y.size(); ++i) s += (static_cast<long double>(y[i]) - x[i]) * (y[i] - x[i]);
    v = s / 2;
  } else {
    v = oracle::kl(y, x);
  }
  return oracle::dot(y, g) + v / gamma;
}

long double l1_of(const Vec& v) {
  long double s = 0.0L;
  for (double x : v) s += std::abs(x);
  return s;
}

}  // namespace

TEST_CASE("bregman examples") {
  const auto eu = ProxSetup::euclidean();
  const auto en = ProxSetup::entropy();
  CHECK(bregman(eu, Point{1, 0}, Point{0, 0}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(bregman(eu, Point{0.3, -2}, Point{0.3, -2}) == 0.0);
  CHECK(bregman(en, Point{0.2, 0.8}, Point{0.2, 0.8}) == doctest::Approx(0.0).epsilon(1e-15));
  const double want = static_cast<double>(oracle::kl({0.5, 0.5}, {0.25, 0.75}));
  CHECK(want == doctest::Approx(0.14384103622589045).epsilon(1e-12));
  CHECK(bregman(en, Point{0.5, 0.5}, Point{0.25, 0.75}) == doctest::Approx(want).epsilon(1e-13));
}

TEST_CASE("grad_psi examples") {
  CHECK(grad_psi(ProxSetup::euclidean(), Point{2, -1}) == Point{2, -1});
  CHECK(grad_psi(ProxSetup::entropy(), Point{1, 1}) == Point{1, 1});
  const Point g = grad_psi(ProxSetup::entropy(), Point{std::numbers::e, std::numbers::e});
  CHECK(g[0] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(g[1] == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("entropy domain errors") {
  CHECK_THROWS_AS(psi(ProxSetup::entropy(), Point{-0.1, 1.1}), DomainError);
  CHECK_THROWS(mirror_step(ProxSetup::entropy(), FeasibleSet::unit_ball(2), Point{0.5, 0.5},
                           Point{1, 0}, 1.0));
}

TEST_CASE("projection examples") {
  const auto ball = FeasibleSet::unit_ball(2);
  const Point p = project(ball, Point{3, 4});
  CHECK(p[0] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(p[1] == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(project(ball, Point{0.1, 0.2}) == Point{0.1, 0.2});

  // Brute-force grid over the 2-simplex segment.
  const double t = oracle::argmin_1d(
      [](double s) {
        const long double a = s - 0.8L, b = (1 - s) - 0.8L;
        return a * a + b * b;
      },
      0.0, 1.0);
  const Point q = project(FeasibleSet::simplex(2), Point{0.8, 0.8});
  CHECK(q[0] == doctest::Approx(t).epsilon(1e-9));
  CHECK(q[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(q[1] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("simplex projection against bisection") {
  oracle::Random rng(31);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng.index(30);
    const Vec v = rng.vec(n, -3, 3);
    const Vec want = oracle::simplex_projection_bisect(v);
    const Point got = project(FeasibleSet::simplex(n), Point(v));
    CHECK(max_dev(got, want) <= 1e-10);
    CHECK(FeasibleSet::simplex(n).contains(got));
  }
}

TEST_CASE("mirror_step examples") {
  const auto eu = ProxSetup::euclidean();
  const auto ball = FeasibleSet::unit_ball(2);
  const Point s = mirror_step(eu, ball, Point{0, 0}, Point{3, 4}, 1.0);
  const Vec grid = oracle::argmin_disc(
      [](const Vec& y) { return step_objective(PsiKind::EuclideanHalfSq, y, {0, 0}, {3, 4}, 1.0); },
      {0, 0}, 1.0);
  CHECK(max_dev(s, grid) <= 1e-6);
  CHECK(max_dev(s, {-0.6, -0.8}) <= 1e-15);
  CHECK(mirror_step(eu, ball, Point{0.1, 0}, Point{0, 0}, 1.0) == Point{0.1, 0});

  const Point e = mirror_step(ProxSetup::entropy(), FeasibleSet::simplex(2), Point{0.5, 0.5},
                              Point{std::numbers::ln2, 0}, 1.0);
  CHECK(max_dev(e, {1.0 / 3.0, 2.0 / 3.0}) <= 1e-15);
  const double t = oracle::argmin_1d(
      [](double u) {
        return step_objective(PsiKind::NegEntropy, {u, 1 - u}, {0.5, 0.5}, {std::numbers::ln2, 0}, 1.0);
      },
      0.0, 1.0);
  CHECK(e[0] == doctest::Approx(t).epsilon(1e-7));
}

TEST_CASE("Euclidean mirror step equals the projected subgradient step") {
  const auto eu = ProxSetup::euclidean();
  oracle::Random rng(32);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.index(20);
    const double r = rng.uniform(0.5, 5.0);
    const auto set = FeasibleSet::ball(Point::zeros(n), r);
    const Vec x = rng.in_ball(n, r);
    const Vec g = rng.vec(n, -10, 10);
    const double gamma = rng.uniform(1e-3, 3.0);
    Vec z = x;
    for (std::size_t i = 0; i < n; ++i) z[i] -= gamma * g[i];
    const Point got = mirror_step(eu, set, Point(x), Point(g), gamma);
    worst = std::max(worst, max_dev(got, ball_projection(z, r)));
    worst = std::max(worst, max_dev(got, project(set, Point(z)).vector()));
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("entropy mirror step against a grid argmin") {
  const auto en = ProxSetup::entropy();
  const auto simplex = FeasibleSet::simplex(2);
  oracle::Random rng(33);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Vec x = rng.in_simplex(2, 0.01);
    const Vec g = rng.vec(2, -3, 3);
    const double gamma = rng.uniform(0.05, 2.0);
    const Point got = mirror_step(en, simplex, Point(x), Point(g), gamma);
    const double t = oracle::argmin_1d(
        [&](double u) { return step_objective(PsiKind::NegEntropy, {u, 1 - u}, x, g, gamma); }, 0.0,
        1.0);
    worst = std::max(worst, max_dev(got, {t, 1 - t}));
  }
  CHECK(worst <= 1e-5);
}

TEST_CASE("three-points identity") {
  oracle::Random rng(34);
  for (auto setup : {ProxSetup::euclidean(), ProxSetup::entropy()}) {
    for (int trial = 0; trial < 1000; ++trial) {
      const std::size_t n = 2 + rng.index(10);
      const bool ent = setup.kind() == PsiKind::NegEntropy;
      const Point a(ent ? rng.in_simplex(n) : rng.vec(n, -3, 3));
      const Point b(ent ? rng.in_simplex(n) : rng.vec(n, -3, 3));
      const Point c(ent ? rng.in_simplex(n) : rng.vec(n, -3, 3));
      const double lhs = inner(grad_psi(setup, b) - grad_psi(setup, a), c - a);
      const double rhs = bregman(setup, c, a) + bregman(setup, a, b) - bregman(setup, c, b);
      CHECK(std::abs(lhs - rhs) <= 1e-9);
    }
  }
}

TEST_CASE("Bregman lower bound under the paired norm") {
  oracle::Random rng(35);
  for (auto setup : {ProxSetup::euclidean(), ProxSetup::entropy()}) {
    for (int trial = 0; trial < 1000; ++trial) {
      const std::size_t n = 2 + rng.index(10);
      const bool ent = setup.kind() == PsiKind::NegEntropy;
      const Point x(ent ? rng.in_simplex(n, 1e-6) : rng.vec(n, -3, 3));
      const Point y(ent ? rng.in_simplex(n, 1e-6) : rng.vec(n, -3, 3));
      const double d = norm(x - y, setup.norm());
      CHECK(bregman(setup, x, y) >= setup.sigma() / 2 * d * d - 1e-12);
    }
  }
}

TEST_CASE("Fenchel-Young inequality") {
  oracle::Random rng(36);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.index(15);
    const Point a(rng.vec(n, -5, 5));
    const Point b(rng.vec(n, -5, 5));
    const double lam = std::exp(rng.uniform(-5, 5));
    for (NormKind k : {NormKind::L1, NormKind::L2, NormKind::Linf}) {
      const double na = norm(a, k);
      const double nb = norm(b, dual_norm_kind(k));
      const double rhs = na * na / (2 * lam) + lam * nb * nb / 2;
      CHECK(inner(a, b) <= rhs + 1e-12 * std::max(1.0, rhs));
    }
  }
}

TEST_CASE("mirror step is feasible and optimal against random feasible points") {
  oracle::Random rng(37);
  for (auto setup : {ProxSetup::euclidean(), ProxSetup::entropy()}) {
    const bool ent = setup.kind() == PsiKind::NegEntropy;
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t n = 2 + rng.index(8);
      const auto set = ent ? FeasibleSet::simplex(n) : FeasibleSet::unit_ball(n);
      const Vec x = ent ? rng.in_simplex(n) : rng.in_ball(n);
      const Vec g = rng.vec(n, -5, 5);
      const double gamma = rng.uniform(0.01, 2.0);
      const Point out = mirror_step(setup, set, Point(x), Point(g), gamma);
      REQUIRE(set.contains(out));
      const long double best = step_objective(setup.kind(), out.vector(), x, g, gamma);
      for (int k = 0; k < 100; ++k) {
        const Vec y = ent ? rng.in_simplex(n, 0.0) : rng.in_ball(n);
        CHECK(best <= step_objective(setup.kind(), y, x, g, gamma) + 1e-12L);
      }
    }
  }
}

TEST_CASE("Euclidean mirror step on the simplex") {
  oracle::Random rng(38);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.index(8);
    const Vec x = rng.in_simplex(n);
    const Vec g = rng.vec(n, -5, 5);
    const double gamma = rng.uniform(0.01, 2.0);
    Vec z = x;
    for (std::size_t i = 0; i < n; ++i) z[i] -= gamma * g[i];
    const Point out = mirror_step(ProxSetup::euclidean(), FeasibleSet::simplex(n), Point(x), Point(g), gamma);
    CHECK(max_dev(out, oracle::simplex_projection_bisect(z)) <= 1e-10);
  }
}

TEST_CASE("composite step examples") {
  const auto eu = ProxSetup::euclidean();
  const auto ball = FeasibleSet::ball(Point::zeros(2), 10.0);
  const auto h = CompositeRegularizer::l1(0.5);
  const Point a = composite_mirror_step(eu, ball, Point{1, 0}, Point{0, 0}, 1.0, h);
  CHECK(max_dev(a, {0.5, 0.0}) <= 1e-15);
  const double t = oracle::argmin_1d(
      [](double u) { return 0.5L * std::abs(u) + 0.5L * (u - 1.0L) * (u - 1.0L); }, -2.0, 2.0);
  CHECK(a[0] == doctest::Approx(t).epsilon(1e-9));
  CHECK(composite_mirror_step(eu, ball, Point{0.2, 0}, Point{0, 0}, 1.0, h) == Point{0, 0});

  oracle::Random rng(39);
  for (int trial = 0; trial < 50; ++trial) {
    const Point x(rng.in_ball(2, 10.0));
    const Point g(rng.vec(2, -3, 3));
    const double gamma = rng.uniform(0.1, 2.0);
    CHECK(composite_mirror_step(eu, ball, x, g, gamma, CompositeRegularizer::zero()) ==
          mirror_step(eu, ball, x, g, gamma));
  }
  CHECK_THROWS(composite_mirror_step(ProxSetup::entropy(), FeasibleSet::simplex(2), Point{0.5, 0.5},
                                     Point{1, 0}, 1.0, h));
  CHECK_THROWS(CompositeRegularizer::l1(-1.0));
}

TEST_CASE("composite step with an active ball constraint against a grid argmin") {
  const auto eu = ProxSetup::euclidean();
  oracle::Random rng(40);
  double worst = 0.0;
  for (int trial = 0; trial < 60; ++trial) {
    const double r = rng.uniform(0.5, 2.0);
    const Vec c{0.0, 0.0};
    const auto set = FeasibleSet::ball(Point(c), r);
    const Vec x = rng.in_ball(2, r);
    const Vec g = rng.vec(2, -6, 6);
    const double gamma = rng.uniform(0.2, 2.0);
    const double lam = rng.uniform(0.0, 2.0);
    const auto h = CompositeRegularizer::l1(lam);
    const Point got = composite_mirror_step(eu, set, Point(x), Point(g), gamma, h);
    CHECK(set.contains(got));
    auto obj = [&](const Vec& y) {
      long double s = 0.0L;
      for (std::size_t i = 0; i < 2; ++i) s += (static_cast<long double>(y[i]) - x[i]) * (y[i] - x[i]);
      return gamma * oracle::dot(y, g) + gamma * lam * l1_of(y) + s / 2;
    };
    const Vec want = oracle::argmin_disc(obj, c, r);
    worst = std::max(worst, max_dev(got, want));
    CHECK(obj(got.vector()) <= obj(want) + 1e-12L);
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("feasible set membership") {
  const auto ball = FeasibleSet::ball(Point{1, 1}, 2.0);
  CHECK(ball.contains(Point{1, 3}));
  CHECK_FALSE(ball.contains(Point{1, 3.01}));
  CHECK_FALSE(ball.contains(Point{1, 1, 1}));
  const auto s = FeasibleSet::simplex(3);
  CHECK(s.contains(Point{0.2, 0.3, 0.5}));
  CHECK_FALSE(s.contains(Point{-0.1, 0.6, 0.5}));
  CHECK_FALSE(s.contains(Point{0.2, 0.3, 0.6}));
  CHECK_THROWS(FeasibleSet::ball(Point{0}, 0.0));
  CHECK_THROWS(FeasibleSet::simplex(0));
}
