#include <doctest.h>

#include <cmath>

#include "gl_lab/experiments.hpp"

using namespace gl_lab;

namespace {

SweepSpec small_sweep() {
  SweepSpec spec;
  spec.ensemble.p = 32;
  spec.ensemble.s = 4;
  spec.ensemble.family = Family::identical;
  spec.ensemble.sigma = 0.1;
  spec.theta_grid = {0.25, 1.0, 2.5};
  spec.trials = 10;
  spec.base_seed = 42;
  return spec;
}

SweepResult fake_result(const std::vector<double>& thetas,
                        const std::vector<double>& rates) {
  SweepResult r;
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    SweepPoint pt;
    pt.theta = thetas[i];
    pt.trials = 10;
    pt.successes = static_cast<std::size_t>(std::llround(10.0 * rates[i]));
    pt.success_rate = rates[i];
    r.points.push_back(pt);
  }
  return r;
}

}  // namespace

TEST_CASE("lambda rules") {
  CHECK(lambda_from_rule(LambdaRule::paper_sim, 0.0, 1000, 256, 16) ==
        doctest::Approx(0.12327026271378828).epsilon(1e-12));
  CHECK(lambda_from_rule(LambdaRule::fixed, 0.5, 10, 4, 2) == 0.5);

  // f(p) = log p at p = e^2, n = round(e^2): sqrt(2 * 2 / n).
  const std::size_t n = 7;
  CHECK(lambda_from_rule(LambdaRule::theorem, 0.0, n, 7, 2) ==
        doctest::Approx(std::log(7.0) / std::sqrt(7.0)).epsilon(1e-12));

  CHECK_THROWS_AS(lambda_from_rule(LambdaRule::paper_sim, 0.0, 10, 3, 2),
                  DegenerateLogArgument);
}

TEST_CASE("sample size follows the factor-2 convention") {
  CHECK(sample_size_for_theta(1.0, 16, 256) ==
        static_cast<std::size_t>(
            std::llround(2.0 * 16.0 * std::log(240.0))));
  CHECK(sample_size_for_theta(0.25, 8, 64) ==
        static_cast<std::size_t>(std::llround(4.0 * std::log(56.0))));
}

TEST_CASE("trials far above and below the transition") {
  EnsembleSpec spec;
  spec.p = 64;
  spec.s = 8;
  spec.family = Family::identical;
  spec.sigma = 0.1;

  int high = 0, low = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    if (run_trial(spec, 3.0, LambdaRule::paper_sim, 0.0, Method::group_l12,
                  seed)
            .success) {
      ++high;
    }
    if (run_trial(spec, 0.25, LambdaRule::paper_sim, 0.0, Method::group_l12,
                  seed)
            .success) {
      ++low;
    }
  }
  CHECK(high >= 95);
  CHECK(low <= 10);

  // Noiseless, high-sample regime.
  spec.sigma = 0.0;
  CHECK(run_trial(spec, 3.0, LambdaRule::paper_sim, 0.0, Method::group_l12, 7)
            .success);
}

TEST_CASE("sweeps are deterministic and scheduling-independent") {
  const SweepSpec spec = small_sweep();
  const SweepResult a = sweep_theta(spec, 1);
  const SweepResult b = sweep_theta(spec, 1);
  const SweepResult c = sweep_theta(spec, 4);
  REQUIRE(a.points.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(a.points[i].successes == b.points[i].successes);
    CHECK(a.points[i].successes == c.points[i].successes);
    CHECK(a.points[i].n ==
          sample_size_for_theta(spec.theta_grid[i], spec.ensemble.s,
                                spec.ensemble.p));
    CHECK(a.points[i].successes <= a.points[i].trials);
  }

  SweepSpec reseeded = spec;
  reseeded.base_seed = 43;
  const SweepResult d = sweep_theta(reseeded, 1);
  bool differs = false;
  for (std::size_t i = 0; i < 3; ++i) {
    if (a.points[i].successes != d.points[i].successes) differs = true;
  }
  CHECK(differs);
}

TEST_CASE("degenerate one-point sweep") {
  SweepSpec spec = small_sweep();
  spec.theta_grid = {3.0};
  spec.trials = 1;
  const SweepResult r = sweep_theta(spec);
  REQUIRE(r.points.size() == 1);
  CHECK((r.points[0].success_rate == 0.0 || r.points[0].success_rate == 1.0));
}

TEST_CASE("sweep spec validation") {
  SweepSpec spec = small_sweep();
  spec.theta_grid = {0.25, 0.2};
  CHECK_THROWS_AS(sweep_theta(spec), std::invalid_argument);
  spec.theta_grid = {0.01};
  CHECK_THROWS_AS(sweep_theta(spec), std::invalid_argument);
  spec.theta_grid = {0.5};
  spec.trials = 0;
  CHECK_THROWS_AS(sweep_theta(spec), std::invalid_argument);
}

TEST_CASE("theta50 estimation") {
  CHECK(estimate_theta50(fake_result({0.5, 1.0, 1.5}, {0.1, 0.5, 0.9})) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(estimate_theta50(fake_result({0.5, 1.0, 1.5}, {0.0, 0.4, 0.8})) ==
        doctest::Approx(1.125).epsilon(1e-12));
  CHECK_THROWS_AS(
      estimate_theta50(fake_result({0.5, 1.0}, {1.0, 1.0})), NoCrossing);
  CHECK_THROWS_AS(
      estimate_theta50(fake_result({0.5, 1.0}, {0.0, 0.2})), NoCrossing);

  // Non-monotone curves are pooled before interpolation.
  const double pooled =
      estimate_theta50(fake_result({0.5, 1.0, 1.5, 2.0}, {0.0, 0.6, 0.4, 0.9}));
  CHECK(pooled == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("chi-square tail bound simulation") {
  // d = 2, t = 18: bound = m e^{-6}.
  const Chi2TailResult res = chi2_tail_check(10, 2, 18.0, 100000, 11);
  CHECK(res.bound == doctest::Approx(10.0 * std::exp(-6.0)).epsilon(1e-12));
  CHECK(res.empirical_rate <= 0.035);
  CHECK(res.ok);

  // Vacuous regime: t barely above d.
  const Chi2TailResult vac = chi2_tail_check(5, 2, 2.001, 2000, 3);
  CHECK(vac.bound >= 1.0);
  CHECK(vac.ok);

  CHECK_THROWS_AS(chi2_tail_check(5, 3, 2.0, 100, 1), std::invalid_argument);
}
