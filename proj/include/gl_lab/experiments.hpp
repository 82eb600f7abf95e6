#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "gl_lab/ensembles.hpp"
#include "gl_lab/solver.hpp"

namespace gl_lab {

enum class LambdaRule { paper_sim, theorem, fixed };
enum class Method { group_l12, lasso_union };

/// Regularization level for a given sample geometry.
///   paper_sim: sqrt(log(p-s) * log(s) / n)
///   theorem:   sqrt(f(p) * log(p) / n) with f(p) = log(p)
///   fixed:     the supplied constant
double lambda_from_rule(LambdaRule rule, double fixed_lambda, std::size_t n,
                        std::size_t p, std::size_t s);

/// n = round(2 theta s log(p - s)); the factor-2 convention of the rescaled
/// sample size is used everywhere.
std::size_t sample_size_for_theta(double theta, std::size_t s, std::size_t p);

struct SweepSpec {
  EnsembleSpec ensemble;
  std::vector<double> theta_grid;
  std::size_t trials = 200;
  std::uint64_t base_seed = 0;
  LambdaRule lambda_rule = LambdaRule::paper_sim;
  double fixed_lambda = 0.0;
  Method method = Method::group_l12;
  SolverConfig solver;  // lambda field ignored; set per trial by the rule

  void validate() const;
};

struct TrialResult {
  bool success = false;
  std::size_t n = 0;
  double lambda = 0.0;
  bool solver_error = false;  // solve failed; counted as a recovery failure
  std::size_t iterations = 0;
};

/// One seeded draw-solve-compare run; success means the extracted support
/// equals the true support exactly. Solver failures are recorded, never
/// silently dropped.
TrialResult run_trial(const EnsembleSpec& ensemble, double theta,
                      LambdaRule rule, double fixed_lambda, Method method,
                      std::uint64_t seed, const SolverConfig& cfg = {});

struct SweepPoint {
  double theta = 0.0;
  std::size_t n = 0;
  std::size_t trials = 0;
  std::size_t successes = 0;
  std::size_t solver_errors = 0;
  double success_rate = 0.0;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  std::optional<double> theta50;
  SweepSpec spec;
};

/// Runs trials at every grid point with per-trial seeds mixed from
/// (base_seed, grid index, trial index); the result is identical under any
/// thread count. threads = 0 picks the hardware concurrency. on_point, when
/// set, fires once per completed grid point in grid order.
SweepResult sweep_theta(
    const SweepSpec& spec, unsigned threads = 1,
    const std::function<void(const SweepPoint&)>& on_point = {});

/// Crossing point of the isotonically monotonized success curve with 1/2,
/// linearly interpolated between bracketing grid points.
double estimate_theta50(const SweepResult& result);

struct Chi2TailResult {
  double empirical_rate = 0.0;
  double bound = 0.0;
  bool ok = false;
};

/// Simulates P[max of m chi^2_d draws >= 2t] against the tail bound
/// m exp(-t (1 - 2 sqrt(d/t))). Requires t > d.
Chi2TailResult chi2_tail_check(std::size_t m, std::size_t d, double t,
                               std::size_t trials, std::uint64_t seed);

}  // namespace gl_lab
