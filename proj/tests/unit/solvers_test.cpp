#include <doctest.h>

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "mdbench/solvers/averager.hpp"
#include "mdbench/solvers/bounds.hpp"
#include "mdbench/solvers/solve.hpp"
#include "oracles.hpp"

using namespace mdbench;
using oracle::Vec;

namespace {

RunConfig iters_config(std::size_t n, double m, double theta = 2.0) {
  RunConfig cfg;
  cfg.iters = n;
  cfg.m = m;
  cfg.theta = theta;
  return cfg;
}

// Long double mirror descent for ||x - A|| on the unit ball with
// gamma_k = sqrt 2 / sqrt k; returns f at the weighted average after n steps.
long double hand_run(const Vec& a, const Vec& x1, std::size_t n, double m) {
  const std::size_t d = a.size();
  std::vector<long double> x(x1.begin(), x1.end()), sum(d, 0.0L);
  long double wsum = 0.0L;
  for (std::size_t k = 1; k <= n; ++k) {
    const long double gamma = std::sqrt(2.0L) / std::sqrt(static_cast<long double>(k));
    const long double w = std::pow(gamma, -static_cast<long double>(m));
    for (std::size_t i = 0; i < d; ++i) sum[i] += w * x[i];
    wsum += w;
    long double r = 0.0L;
    for (std::size_t i = 0; i < d; ++i) r += (x[i] - a[i]) * (x[i] - a[i]);
    r = std::sqrt(r);
    long double nz = 0.0L;
    for (std::size_t i = 0; i < d; ++i) {
      x[i] -= gamma * (x[i] - a[i]) / r;
      nz += x[i] * x[i];
    }
    nz = std::sqrt(nz);
    if (nz > 1.0L) {
      for (auto& v : x) v /= nz;
    }
  }
  long double r = 0.0L;
  for (std::size_t i = 0; i < d; ++i) {
    const long double v = sum[i] / wsum - a[i];
    r += v * v;
  }
  return std::sqrt(r);
}

// (sum gamma^-m)^-1 [theta / gamma_N^(m+1) + (1/2 sigma) sum g^2 gamma^(1-m)]
long double bound_formula(double m, const std::vector<double>& gammas, const std::vector<double>& g,
                          double theta, double sigma, double h = 0.0) {
  long double w = 0.0L, s = 0.0L;
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    w += std::pow(static_cast<long double>(gammas[i]), -static_cast<long double>(m));
    s += static_cast<long double>(g[i]) * g[i] * std::pow(static_cast<long double>(gammas[i]), 1.0L - m);
  }
  const long double top = h / std::pow(static_cast<long double>(gammas.front()), static_cast<long double>(m)) +
                          theta / std::pow(static_cast<long double>(gammas.back()), m + 1.0L) + s / (2 * sigma);
  return top / w;
}

Instance constrained_instance(std::size_t n, std::size_t t, std::size_t p, std::uint64_t seed,
                              Distribution d) {
  InstanceSpec s;
  s.kind = ProblemKind::MaxLinear;
  s.n = n;
  s.terms = t;
  s.constraints = p;
  s.seed = seed;
  s.distribution = d;
  return make_instance(s);
}

}  // namespace

TEST_CASE("averager examples") {
  WeightedAverager a(0.0);
  a.update(Point{0, 0}, 0.3);
  a.update(Point{2, 0}, 0.7);
  CHECK(a.average() == Point{1, 0});

  WeightedAverager b(-1.0);
  b.update(Point{0, 0}, 1.0);
  b.update(Point{1, 0}, 1.0 / std::sqrt(2.0));
  const double want_b = (1 / std::sqrt(2.0)) / (1 + 1 / std::sqrt(2.0));
  CHECK(b.average()[0] == doctest::Approx(want_b).epsilon(1e-15));
  CHECK(want_b == doctest::Approx(0.41421).epsilon(1e-5));

  WeightedAverager c(5.0);
  c.update(Point{1, 0}, 1.0);
  c.update(Point{0, 0}, 1.0 / std::sqrt(2.0));
  const double w2 = std::pow(2.0, 2.5);
  CHECK(c.average()[0] == doctest::Approx(1.0 / (1.0 + w2)).epsilon(1e-14));
  CHECK(c.average()[1] == 0.0);
}

TEST_CASE("m = 0 averager is the arithmetic mean") {
  oracle::Random rng(61);
  WeightedAverager a(0.0);
  std::vector<long double> sum(4, 0.0L);
  for (int k = 1; k <= 2000; ++k) {
    const Vec x = rng.vec(4, -3, 3);
    a.update(Point(x), rng.uniform(0.01, 2.0));
    for (std::size_t i = 0; i < 4; ++i) sum[i] += x[i];
    const Point avg = a.average();
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(avg[i] - static_cast<double>(sum[i] / k)) <= 1e-12);
  }
}

TEST_CASE("averager weights and feasibility") {
  oracle::Random rng(62);
  for (double m : {0.5, 1.0, 2.0, 5.0}) {
    WeightedAverager a(m);
    double gamma = 1.0;
    double prev_w = 0.0;
    const auto ball = FeasibleSet::unit_ball(3);
    for (int k = 1; k <= 500; ++k) {
      gamma *= rng.uniform(0.95, 1.0);
      a.update(Point(rng.in_ball(3)), gamma);
      const double w = a.relative_weight(gamma);
      CHECK(w >= prev_w);
      prev_w = w;
      CHECK(ball.contains(a.average()));
    }
  }
  // Large m must not overflow.
  WeightedAverager big(40.0);
  for (int k = 1; k <= 10000; ++k) big.update(Point{1.0}, 1.0 / std::sqrt(static_cast<double>(k)));
  CHECK(big.average()[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("averager rejects bad input") {
  CHECK_THROWS(WeightedAverager(-1.5));
  WeightedAverager a(0.0);
  CHECK_THROWS(a.update(Point{1}, 0.0));
  a.update(Point{1}, 1.0);
  CHECK_THROWS(a.update(Point{1, 2}, 1.0));
}

TEST_CASE("single iteration by hand") {
  const auto f = Objective::best_approx(Point{10, 0}, 9.0);
  const auto ball = FeasibleSet::unit_ball(2);
  const auto r = mirror_descent(f, ProxSetup::euclidean(), ball, ScheduleKind::time_varying(1.0),
                                iters_config(1, 0.0), Point{0, 0});
  CHECK(r.iterations == 1);
  CHECK(r.x_hat == Point{0, 0});
  CHECK(r.f_hat == 10.0);
  REQUIRE(r.trace.size() == 1);
  CHECK(r.trace[0].gamma == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(r.trace[0].f_iterate == 10.0);
  // x2 = project((sqrt 2, 0)) = (1, 0); the two-step average is (0.5, 0).
  const auto r2 = mirror_descent(f, ProxSetup::euclidean(), ball, ScheduleKind::time_varying(1.0),
                                 iters_config(2, 0.0), Point{0, 0});
  CHECK(r2.trace[1].f_iterate == doctest::Approx(9.0).epsilon(1e-15));
  CHECK(r2.f_hat == doctest::Approx(9.5).epsilon(1e-15));
}

TEST_CASE("mirror descent against a hand-rolled long double run") {
  InstanceSpec s;
  s.n = 7;
  s.seed = 4;
  const auto f = make_best_approx(s);
  const Vec x1(7, 1.0 / std::sqrt(7.0));
  for (double m : {-1.0, 0.0, 2.0, 5.0}) {
    const auto r = mirror_descent(f, ProxSetup::euclidean(), FeasibleSet::unit_ball(7),
                                  ScheduleKind::time_varying(1.0), iters_config(300, m), Point(x1));
    CHECK(r.f_hat == doctest::Approx(static_cast<double>(hand_run(f.points().front().vector(), x1, 300, m))).epsilon(1e-12));
  }
}

TEST_CASE("zero subgradient at the start is stationary") {
  const auto f = Objective::best_approx(Point{0.5, 0});
  const auto r = mirror_descent(f, ProxSetup::euclidean(), FeasibleSet::unit_ball(2),
                                ScheduleKind::time_varying(1.0), iters_config(100, 0.0), Point{0.5, 0});
  CHECK(r.stop_reason == StopReason::StationaryPoint);
  CHECK(r.iterations == 0);
  CHECK(r.trace.empty());
  CHECK(r.x_hat == Point{0.5, 0});
  CHECK(r.f_hat == 0.0);
}

TEST_CASE("Polyak reaching f* stops as stationary") {
  const auto f = Objective::best_approx(Point{10, 0}, 9.0);
  const auto r = mirror_descent(f, ProxSetup::euclidean(), FeasibleSet::unit_ball(2),
                                ScheduleKind::polyak(), iters_config(100, 0.0), Point{0, 0});
  CHECK(r.stop_reason == StopReason::StationaryPoint);
  CHECK(r.iterations == 1);
  CHECK(r.x_hat == Point{0, 0});
  CHECK_THROWS_WITH(mirror_descent(Objective::fts({Point{1, 0}, Point{0, 1}}), ProxSetup::euclidean(),
                                   FeasibleSet::unit_ball(2), ScheduleKind::polyak(),
                                   iters_config(10, 0.0), Point{0, 0}),
                    "Polyak requires known f*");
}

TEST_CASE("run configuration validation") {
  const auto f = Objective::best_approx(Point{10, 0}, 9.0);
  const auto ball = FeasibleSet::unit_ball(2);
  RunConfig none;
  CHECK_THROWS(mirror_descent(f, ProxSetup::euclidean(), ball, ScheduleKind::nonsum(), none, Point{0, 0}));
  CHECK_THROWS(mirror_descent(f, ProxSetup::euclidean(), ball, ScheduleKind::nonsum(),
                              iters_config(10, -1.5), Point{0, 0}));
  CHECK_THROWS(mirror_descent(f, ProxSetup::euclidean(), ball, ScheduleKind::nonsum(),
                              iters_config(10, 0.0), Point{2, 0}));
  RunConfig eps_only;
  eps_only.epsilon = 0.1;
  CHECK_THROWS(mirror_descent(f, ProxSetup::euclidean(), ball, ScheduleKind::fixed_length(), eps_only,
                              Point{0, 0}));
}

TEST_CASE("epsilon-only runs stop once the bound is below epsilon") {
  const auto f = Objective::best_approx(Point{10, 0}, 9.0);
  RunConfig cfg;
  cfg.epsilon = 0.05;
  const auto r = mirror_descent(f, ProxSetup::euclidean(), FeasibleSet::unit_ball(2),
                                ScheduleKind::time_varying(1.0), cfg, Point{0, 0});
  CHECK(r.stop_reason == StopReason::EpsilonCriterion);
  REQUIRE(r.trace.size() == r.iterations);
  CHECK(*r.trace.back().bound <= 0.05);
  CHECK(*r.trace[r.trace.size() - 2].bound > 0.05);
  CHECK(r.f_hat - 9.0 <= 0.05);
}

TEST_CASE("trajectory bound holds pointwise for certified schedules") {
  InstanceSpec s;
  s.n = 20;
  s.seed = 3;
  const auto f = make_best_approx(s);
  const Point x1(20, 1.0 / std::sqrt(20.0));
  for (auto kind : {ScheduleKind::constant_step(), ScheduleKind::nonsum(), ScheduleKind::sqrsum_nonsum(),
                    ScheduleKind::adagrad(), ScheduleKind::time_varying(1.0)}) {
    for (double m : {-1.0, 0.0, 1.0, 2.0, 5.0}) {
      CAPTURE(to_string(kind.tag));
      CAPTURE(m);
      const auto r = mirror_descent(f, ProxSetup::euclidean(), FeasibleSet::unit_ball(20), kind,
                                    iters_config(2000, m), x1);
      REQUIRE(r.trace.size() == 2000);
      std::vector<double> gammas;
      bool ok = true;
      bool matches = true;
      for (const auto& rec : r.trace) {
        gammas.push_back(rec.gamma);
        REQUIRE(rec.bound.has_value());
        ok = ok && *rec.f_avg - 9.0 <= *rec.bound + 1e-9;
        if (rec.k % 97 == 0 || rec.k == 2000) {
          const std::vector<double> ones(gammas.size(), 1.0);
          const double want = static_cast<double>(bound_formula(m, gammas, ones, 2.0, 1.0));
          matches = matches && std::abs(*rec.bound - want) <= 1e-9 * std::max(1.0, want);
        }
      }
      CHECK(ok);
      CHECK(matches);
    }
  }
}

TEST_CASE("uncertified schedules carry no bound") {
  const auto f = Objective::best_approx(Point{10, 0}, 9.0);
  const auto r = mirror_descent(f, ProxSetup::euclidean(), FeasibleSet::unit_ball(2),
                                ScheduleKind::adaptive_time_varying(), iters_config(50, 0.0), Point{0, 0});
  for (const auto& rec : r.trace) CHECK_FALSE(rec.bound.has_value());
}

TEST_CASE("entropy setup on the simplex") {
  const auto f = Objective::max_linear({Point{1, 0, 0}, Point{0, 1, 0}, Point{0, 0, 1}}, {0, 0, 0});
  const auto simplex = FeasibleSet::simplex(3);
  const auto r = mirror_descent(f, ProxSetup::entropy(), simplex,
                                ScheduleKind::time_varying(f.lipschitz(NormKind::Linf)),
                                iters_config(5000, 0.0, std::log(3.0)), Point{0.7, 0.2, 0.1});
  CHECK(simplex.contains(r.x_hat));
  CHECK(r.f_hat - 1.0 / 3.0 <= bound_corollary(MCase::Zero, 5000, 1.0, std::log(3.0), 1.0) + 1e-9);
}

TEST_CASE("bound_main examples") {
  const double one[] = {1.0};
  CHECK(bound_main(0.0, one, one, 2.0, 1.0) == doctest::Approx(2.5).epsilon(1e-15));
  for (std::size_t n : {1UL, 10UL, 1000UL, 10000UL}) {
    std::vector<double> g(n), gn(n, 1.0);
    for (std::size_t k = 1; k <= n; ++k) g[k - 1] = std::sqrt(2.0) / std::sqrt(static_cast<double>(k));
    CHECK(bound_main(0.0, g, gn, 2.0, 1.0) <= bound_corollary(MCase::Zero, n, 1.0, 2.0, 1.0) + 1e-15);
    CHECK(bound_main(-1.0, g, gn, 2.0, 1.0) <= bound_corollary(MCase::MinusOne, n, 1.0, 2.0, 1.0) + 1e-15);
    for (double m : {1.0, 2.0, 5.0}) {
      CHECK(bound_main(m, g, gn, 2.0, 1.0) <= bound_corollary(MCase::AtLeastOne, n, 1.0, 2.0, 1.0, m) + 1e-15);
    }
    const std::vector<double> zeros(n, 0.0);
    CHECK(bound_main(0.0, g, zeros, 0.0, 1.0) == 0.0);
  }
}

TEST_CASE("bound_main against the direct formula") {
  oracle::Random rng(63);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.index(300);
    std::vector<double> g(n), gn(n);
    double gamma = rng.uniform(0.1, 3.0);
    for (std::size_t i = 0; i < n; ++i) {
      gamma *= rng.uniform(0.9, 1.0);
      g[i] = gamma;
      gn[i] = rng.uniform(0.0, 5.0);
    }
    const double m = rng.uniform(-1.0, 6.0);
    const double theta = rng.uniform(0.0, 5.0);
    const double sigma = rng.uniform(0.5, 2.0);
    const double want = static_cast<double>(bound_formula(m, g, gn, theta, sigma));
    CHECK(bound_main(m, g, gn, theta, sigma) == doctest::Approx(want).epsilon(1e-11));
  }
}

TEST_CASE("bound_main rejects increasing steps and bad input") {
  const double g[] = {1.0, 0.5, 0.6};
  const double gn[] = {1.0, 1.0, 1.0};
  try {
    (void)bound_main(0.0, g, gn, 2.0, 1.0);
    FAIL("expected an exception");
  } catch (const std::invalid_argument& e) {
    const std::string what = e.what();
    CHECK(what.find("positive non-increasing sequence of step sizes") != std::string::npos);
    CHECK(what.find("step 3 increases") != std::string::npos);
  }
  const double two[] = {1.0, 1.0};
  CHECK_THROWS(bound_main(0.0, two, gn, 2.0, 1.0));
  CHECK_THROWS(bound_main(-2.0, two, two, 2.0, 1.0));
  CHECK_THROWS(bound_main(0.0, std::span<const double>{}, std::span<const double>{}, 2.0, 1.0));
}

TEST_CASE("closed-form rate examples") {
  CHECK(bound_corollary(MCase::Zero, 10000, 1.0, 2.0, 1.0) == doctest::Approx(4.0 / std::sqrt(2e4)).epsilon(1e-15));
  CHECK(bound_corollary(MCase::Zero, 10000, 1.0, 2.0, 1.0) == doctest::Approx(0.028284).epsilon(1e-5));
  CHECK(bound_corollary(MCase::MinusOne, 1, 1.0, 0.0, 1.0) == 1.0);
  CHECK(bound_corollary(MCase::AtLeastOne, 4, 1.0, 0.0, 1.0, 1.0) ==
        doctest::Approx(3.0 / (2.0 * std::sqrt(2.0) * 2.0)).epsilon(1e-15));
  CHECK(bound_corollary(MCase::AtLeastOne, 4, 1.0, 0.0, 1.0, 1.0) == doctest::Approx(0.53033).epsilon(1e-5));
}

TEST_CASE("composite bound") {
  const double one[] = {1.0};
  CHECK(bound_composite(-1.0, one, one, 3.0, 2.0, 1.0) ==
        doctest::Approx(bound_main(-1.0, one, one, 2.0, 1.0) + 3.0).epsilon(1e-15));
  oracle::Random rng(64);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.index(100);
    std::vector<double> g(n), gn(n);
    for (std::size_t i = 0; i < n; ++i) {
      g[i] = 1.0 / std::sqrt(static_cast<double>(i + 1));
      gn[i] = rng.uniform(0, 2);
    }
    const double m = rng.uniform(-1.0, 0.0);
    CHECK(bound_composite(m, g, gn, 0.0, 1.5, 1.0) == bound_main(m, g, gn, 1.5, 1.0));
    const double h = rng.uniform(0, 4);
    CHECK(bound_composite(m, g, gn, h, 1.5, 1.0) ==
          doctest::Approx(static_cast<double>(bound_formula(m, g, gn, 1.5, 1.0, h))).epsilon(1e-12));
  }
  CHECK_THROWS(bound_composite(0.5, one, one, 0.0, 2.0, 1.0));
  CHECK_THROWS(bound_composite(0.0, one, one, -1.0, 2.0, 1.0));
  // m = -1 closed form dominates the evaluated bound on time-varying steps.
  for (std::size_t n : {1UL, 10UL, 1000UL}) {
    const double lip = 2.0;
    std::vector<double> g(n), gn(n, lip);
    for (std::size_t k = 1; k <= n; ++k) g[k - 1] = std::sqrt(2.0) / (lip * std::sqrt(static_cast<double>(k)));
    CHECK(bound_composite(-1.0, g, gn, 1.5, 2.0, 1.0) <=
          bound_composite_corollary_minus_one(n, lip, 1.5, 2.0, 1.0) + 1e-15);
  }
}

TEST_CASE("iteration estimate") {
  CHECK(iteration_estimate(1.0, 1.0, 1.0, 1.0, MCase::AtLeastOne) == 2);
  CHECK(iteration_estimate(1.0, 0.0, 0.5, 1.0, MCase::Zero) == 4);
  for (double eps = 1.0; eps > 1e-3; eps /= 2) {
    const auto a = iteration_estimate(2.3, 2.0, 1.0, eps, MCase::AtLeastOne);
    const auto b = iteration_estimate(2.3, 2.0, 1.0, eps / 2, MCase::AtLeastOne);
    CHECK(b <= 4 * a);
    CHECK(b + 3 >= 4 * a);
  }
  CHECK(iteration_estimate(1.0, 1.0, 1.0, 0.25, MCase::AtLeastOne) == 32);
  CHECK_THROWS(iteration_estimate(1.0, 1.0, 1.0, 1.0, MCase::MinusOne));
}

TEST_CASE("constrained bound and productive-step diagnostic against direct formulas") {
  const std::vector<double> pg{1.0, 0.5}, pn{1.0, 2.0}, ng{0.7}, nn{3.0};
  const double m = 1.0, theta = 2.0, sigma = 1.0, eps = 0.1, last = 0.5;
  const double wi = 1.0 / 1.0 + 1.0 / 0.5;
  const double wj = 1.0 / 0.7;
  const double rhs = theta / (last * last) + 0.5 * (1.0 + 4.0 + 9.0);
  const auto b = bound_constrained(m, pg, pn, ng, nn, last, theta, sigma, eps);
  CHECK(b.without_eps_term == doctest::Approx(rhs / wi).epsilon(1e-15));
  CHECK(b.with_eps_term == doctest::Approx((rhs - eps * wj) / wi).epsilon(1e-15));

  const auto d = productive_step_inequality(2.0, 1.0, 1.5, 0.1, 1.0, 100);
  long double s1 = 0.0L, s2 = 0.0L;
  for (int k = 1; k <= 100; ++k) {
    s1 += 1.0L;  // sqrt(k)^(m-1) with m = 1
    s2 += std::sqrt(static_cast<long double>(k));
  }
  const long double c = 1.5L / std::sqrt(2.0L);
  CHECK(d.lhs == doctest::Approx(static_cast<double>(c * c * (2.0L * 100.0L + s1))).epsilon(1e-13));
  CHECK(d.rhs == doctest::Approx(static_cast<double>(0.1L * c * s2)).epsilon(1e-13));
  CHECK(d.holds == (d.lhs < d.rhs));
}

TEST_CASE("composite method: zero regularizer is bit-identical") {
  InstanceSpec s;
  s.kind = ProblemKind::FTS;
  s.n = 9;
  s.terms = 6;
  s.seed = 8;
  const auto f = make_objective(s);
  const auto ball = FeasibleSet::unit_ball(9);
  for (double m : {-1.0, -0.5, 0.0}) {
    const auto a = mirror_descent(f, ProxSetup::euclidean(), ball, ScheduleKind::nonsum(), iters_config(500, m),
                                  Point(9, 1.0 / 3.0));
    const auto b = mirror_c_descent(f, CompositeRegularizer::zero(), ProxSetup::euclidean(), ball,
                                    ScheduleKind::nonsum(), iters_config(500, m), Point(9, 1.0 / 3.0));
    CHECK(a.trace == b.trace);
    CHECK(a.x_hat == b.x_hat);
    CHECK(a.f_hat == b.f_hat);
  }
}

TEST_CASE("composite method rejects m outside [-1, 0]") {
  const auto f = Objective::best_approx(Point{10, 0});
  try {
    (void)mirror_c_descent(f, CompositeRegularizer::l1(0.1), ProxSetup::euclidean(), FeasibleSet::unit_ball(2),
                           ScheduleKind::nonsum(), iters_config(10, 1.0), Point{0, 0});
    FAIL("expected an exception");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("-1 <= m <= 0") != std::string::npos);
  }
}

TEST_CASE("composite bound holds along an L1 run") {
  // F = ||x - 20 e1|| + lam ||x||_1 on the radius-10 ball: F* = 10 + 10 lam at 10 e1.
  const double lam = 0.3;
  const auto f = Objective::best_approx(Point{20, 0, 0});
  const auto ball = FeasibleSet::ball(Point::zeros(3), 10.0);
  const auto h = CompositeRegularizer::l1(lam);
  CHECK(f.value(Point{10, 0, 0}) + h.value(Point{10, 0, 0}) == doctest::Approx(10 + 10 * lam));
  for (double m : {-1.0, 0.0}) {
    const auto r = mirror_c_descent(f, h, ProxSetup::euclidean(), ball, ScheduleKind::time_varying(1.0),
                                    iters_config(1000, m, 50.0), Point{0, 0, 0});
    bool ok = true;
    for (const auto& rec : r.trace) ok = ok && *rec.f_avg - (10 + 10 * lam) <= *rec.bound + 1e-9;
    CHECK(ok);
    CHECK(r.f_hat >= 10 + 10 * lam - 1e-12);
  }
  // Single step by hand: x1 = 0, gradient (-1, 0, 0), gamma = sqrt 2, threshold sqrt 2 * lam.
  const auto one = mirror_c_descent(f, h, ProxSetup::euclidean(), ball, ScheduleKind::time_varying(1.0),
                                    iters_config(2, 0.0, 50.0), Point{0, 0, 0});
  const double x2 = std::sqrt(2.0) - std::sqrt(2.0) * lam;
  CHECK(one.trace[1].f_iterate == doctest::Approx(20.0 - x2 + lam * x2).epsilon(1e-14));
}

TEST_CASE("switching method with every iterate feasible matches plain mirror descent") {
  InstanceSpec s;
  s.kind = ProblemKind::MaxLinear;
  s.n = 5;
  s.terms = 4;
  s.seed = 2;
  const auto f = make_objective(s);
  const ConstraintBlock g({Point{1, 0, 0, 0, 0}}, {5.0});
  const auto ball = FeasibleSet::unit_ball(5);
  const auto sched = ScheduleKind::time_varying(f.lipschitz(NormKind::L2));
  RunConfig cfg = iters_config(400, 1.0);
  cfg.epsilon = 0.01;
  cfg.stop_on_criterion = false;
  const auto a = constrained_md(f, g, ProxSetup::euclidean(), ball, sched, ScheduleKind::time_varying(1.0),
                                cfg, Point::zeros(5));
  const auto b = mirror_descent(f, ProxSetup::euclidean(), ball, sched, iters_config(400, 1.0), Point::zeros(5));
  CHECK(a.x_hat == b.x_hat);
  CHECK(a.iterations == b.iterations);
  CHECK(a.productive_count == 400);
  CHECK(a.nonproductive_count == 0);
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    CHECK(a.trace[i].gamma == b.trace[i].gamma);
    CHECK(a.trace[i].f_avg == b.trace[i].f_avg);
  }
}

TEST_CASE("infeasible epsilon region raises NoProductiveSteps") {
  const auto f = Objective::max_linear({Point{1, 1}}, {0.0});
  const ConstraintBlock g({Point{1, 0}}, {-2.0});
  RunConfig cfg;
  cfg.epsilon = 0.01;
  cfg.iters = 200;
  CHECK_THROWS_AS(constrained_md(f, g, ProxSetup::euclidean(), FeasibleSet::unit_ball(2),
                                 ScheduleKind::time_varying(1.0), ScheduleKind::time_varying(1.0), cfg,
                                 Point{0, 0}),
                  NoProductiveSteps);
  CHECK_THROWS_AS(constrained_md_multi(f, g, ProxSetup::euclidean(), FeasibleSet::unit_ball(2), cfg, Point{0, 0}),
                  NoProductiveSteps);
  RunConfig no_eps;
  no_eps.iters = 10;
  CHECK_THROWS(constrained_md_multi(f, g, ProxSetup::euclidean(), FeasibleSet::unit_ball(2), no_eps, Point{0, 0}));
}

TEST_CASE("switching method: eps-solution when stopping by its rule") {
  const auto inst = constrained_instance(6, 5, 4, 11, Distribution::StandardNormal);
  const auto& f = inst.objective;
  const auto& g = *inst.constraints;
  const auto ball = FeasibleSet::unit_ball(6);
  RunConfig cfg;
  cfg.epsilon = 0.1;
  cfg.m = 0.0;
  const auto r = constrained_md(f, g, ProxSetup::euclidean(), ball, ScheduleKind::time_varying(f.lipschitz(NormKind::L2)),
                                ScheduleKind::time_varying(g.lipschitz(NormKind::L2)), cfg, Point::zeros(6));
  REQUIRE(r.stop_reason == StopReason::EpsilonCriterion);
  CHECK(r.productive_count + r.nonproductive_count == r.iterations);
  CHECK(r.constraint_evals == 4 * r.iterations);
  CHECK(*r.g_hat <= 0.1);
  CHECK(ball.contains(r.x_hat));
  CHECK(r.nonproductive_count > 0);
  REQUIRE(r.trace.size() == r.iterations);
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    CHECK(r.trace[i].k == i + 1);
    CHECK(*r.trace[i].productive == (*r.trace[i].g_iterate <= 0.1));
  }
  // The stopping rule certifies the reading that keeps the -eps sum_J term.
  CHECK(r.constrained_bound->with_eps_term <= 0.1 * (1 + 1e-12));
  CHECK(r.constrained_bound->with_eps_term <= r.constrained_bound->without_eps_term);
  const auto again = constrained_md(f, g, ProxSetup::euclidean(), ball, ScheduleKind::time_varying(f.lipschitz(NormKind::L2)),
                                    ScheduleKind::time_varying(g.lipschitz(NormKind::L2)), cfg, Point::zeros(6));
  CHECK(again.trace == r.trace);
  CHECK(again.x_hat == r.x_hat);
}

TEST_CASE("first-violator method with one constraint follows the adaptive switching method") {
  const auto inst = constrained_instance(5, 5, 0, 21, Distribution::Uniform01);
  const auto& f = inst.objective;
  // f decreases toward the negative orthant; the constraint pushes back.
  const ConstraintBlock g({Point(5, -1.0)}, {0.5});
  const auto ball = FeasibleSet::unit_ball(5);
  RunConfig cfg;
  cfg.epsilon = 0.05;
  cfg.iters = 3000;
  cfg.m = 1.0;
  cfg.stop_on_criterion = false;
  const auto a = constrained_md(f, g, ProxSetup::euclidean(), ball, ScheduleKind::adaptive_time_varying(),
                                ScheduleKind::adaptive_time_varying(), cfg, Point::zeros(5));
  const auto b = constrained_md_multi(f, g, ProxSetup::euclidean(), ball, cfg, Point::zeros(5));
  CHECK(a.productive_count == b.productive_count);
  CHECK(b.nonproductive_count > 0);
  CHECK(b.constraint_evals == 3000);
  for (std::size_t i = 0; i < 3000; ++i) {
    CHECK(a.trace[i].productive == b.trace[i].productive);
    CHECK(a.trace[i].gamma == doctest::Approx(b.trace[i].gamma).epsilon(1e-13));
  }
  for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(a.x_hat[i] - b.x_hat[i]) <= 1e-10);
}

TEST_CASE("first-violator method: evaluation counts and per-constraint feasibility") {
  const auto inst = constrained_instance(6, 5, 8, 11, Distribution::StandardNormal);
  const auto& f = inst.objective;
  const auto& g = *inst.constraints;
  const auto ball = FeasibleSet::unit_ball(6);
  RunConfig cfg;
  cfg.epsilon = 0.1;
  cfg.m = 1.0;
  const auto r = constrained_md_multi(f, g, ProxSetup::euclidean(), ball, cfg, Point::zeros(6));
  REQUIRE(r.stop_reason == StopReason::EpsilonCriterion);
  CHECK(r.productive_count + r.nonproductive_count == r.iterations);
  std::size_t total = 0;
  bool early = false;
  for (const auto& rec : r.trace) {
    total += rec.constraint_evals;
    if (*rec.productive) {
      CHECK(rec.constraint_evals == 8);
    } else {
      CHECK(rec.constraint_evals <= 8);
      early = early || rec.constraint_evals < 8;
      CHECK(*rec.step_norm > 0.0);
    }
  }
  CHECK(total == r.constraint_evals);
  if (early) CHECK(r.constraint_evals < 8 * r.iterations);
  for (std::size_t s = 0; s < 8; ++s) CHECK(g.value_at(s, r.x_hat) <= 0.1);
  CHECK(ball.contains(r.x_hat));
}
