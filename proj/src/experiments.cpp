#include "gl_lab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>
#include <thread>

#include "gl_lab/rng.hpp"

namespace gl_lab {

double lambda_from_rule(LambdaRule rule, double fixed_lambda, std::size_t n,
                        std::size_t p, std::size_t s) {
  if (rule == LambdaRule::fixed) return fixed_lambda;
  if (n < 1 || s < 2 || p <= s || p - s < 2) {
    throw DegenerateLogArgument("lambda_from_rule: requires p > s >= 2");
  }
  const double nd = static_cast<double>(n);
  if (rule == LambdaRule::paper_sim) {
    return std::sqrt(std::log(static_cast<double>(p - s)) *
                     std::log(static_cast<double>(s)) / nd);
  }
  const double logp = std::log(static_cast<double>(p));
  return std::sqrt(logp * logp / nd);
}

std::size_t sample_size_for_theta(double theta, std::size_t s,
                                  std::size_t p) {
  if (p <= s || p - s < 2) {
    throw DegenerateLogArgument("sample_size_for_theta: requires p - s >= 2");
  }
  const double n = 2.0 * theta * static_cast<double>(s) *
                   std::log(static_cast<double>(p - s));
  return static_cast<std::size_t>(std::llround(n));
}

void SweepSpec::validate() const {
  ensemble.validate();
  if (theta_grid.empty()) {
    throw std::invalid_argument("sweep: theta_grid must be nonempty");
  }
  for (std::size_t i = 0; i < theta_grid.size(); ++i) {
    if (theta_grid[i] < 0.1 || theta_grid[i] > 3.0) {
      throw std::invalid_argument("sweep: theta values must lie in [0.1, 3]");
    }
    if (i > 0 && theta_grid[i] <= theta_grid[i - 1]) {
      throw std::invalid_argument("sweep: theta_grid must strictly increase");
    }
  }
  if (trials < 1) throw std::invalid_argument("sweep: trials must be >= 1");
  if (lambda_rule == LambdaRule::fixed && fixed_lambda < 0.0) {
    throw std::invalid_argument("sweep: fixed lambda must be >= 0");
  }
}

TrialResult run_trial(const EnsembleSpec& ensemble, double theta,
                      LambdaRule rule, double fixed_lambda, Method method,
                      std::uint64_t seed, const SolverConfig& cfg) {
  ensemble.validate();
  if (theta <= 0.0) {
    throw std::invalid_argument("run_trial: theta must be > 0");
  }
  TrialResult res;
  res.n = sample_size_for_theta(theta, ensemble.s, ensemble.p);
  res.n = std::max<std::size_t>(res.n, 1);
  res.lambda = lambda_from_rule(rule, fixed_lambda, res.n, ensemble.p,
                                ensemble.s);

  const Coefficients truth = make_coefficients(ensemble, seed);
  const Matrix x = ensemble.identity_covariance()
                       ? sample_design_standard(res.n, ensemble.p, seed)
                       : sample_design(res.n, ensemble.covariance, seed);
  const Matrix w = sample_noise(res.n, ensemble.k, ensemble.sigma, seed);
  const Matrix y = assemble_observations(x, truth.b, w);

  SolverConfig run_cfg = cfg;
  run_cfg.lambda = res.lambda;
  try {
    if (method == Method::group_l12) {
      const Solution sol = group_lasso(x, y, run_cfg);
      res.iterations = sol.iterations;
      res.success = (sol.support == truth.support);
    } else {
      const SupportSet est = lasso_union_rows(x, y, run_cfg);
      res.success = (est == truth.support);
    }
  } catch (const NotConverged&) {
    res.solver_error = true;
  } catch (const IllConditioned&) {
    res.solver_error = true;
  }
  return res;
}

SweepResult sweep_theta(const SweepSpec& spec, unsigned threads,
                        const std::function<void(const SweepPoint&)>& on_point) {
  spec.validate();
  if (threads == 0) {
    threads = std::max(1u, std::thread::hardware_concurrency());
  }

  SweepResult out;
  out.spec = spec;
  out.points.resize(spec.theta_grid.size());
  std::vector<TrialResult> raw(spec.trials);

  for (std::size_t g = 0; g < spec.theta_grid.size(); ++g) {
    const auto work = [&](std::size_t t) {
      const std::uint64_t seed = rng::mix(spec.base_seed, g, t);
      raw[t] = run_trial(spec.ensemble, spec.theta_grid[g], spec.lambda_rule,
                         spec.fixed_lambda, spec.method, seed, spec.solver);
    };
    if (threads <= 1 || spec.trials == 1) {
      for (std::size_t t = 0; t < spec.trials; ++t) work(t);
    } else {
      std::atomic<std::size_t> next{0};
      std::vector<std::thread> pool;
      const unsigned count = static_cast<unsigned>(
          std::min<std::size_t>(threads, spec.trials));
      pool.reserve(count);
      for (unsigned w = 0; w < count; ++w) {
        pool.emplace_back([&] {
          for (std::size_t t = next.fetch_add(1); t < spec.trials;
               t = next.fetch_add(1)) {
            work(t);
          }
        });
      }
      for (auto& th : pool) th.join();
    }

    SweepPoint& pt = out.points[g];
    pt.theta = spec.theta_grid[g];
    pt.trials = spec.trials;
    pt.n = raw[0].n;
    for (const TrialResult& r : raw) {
      pt.successes += r.success ? 1 : 0;
      pt.solver_errors += r.solver_error ? 1 : 0;
    }
    pt.success_rate = static_cast<double>(pt.successes) /
                      static_cast<double>(pt.trials);
    if (on_point) on_point(pt);
  }

  try {
    out.theta50 = estimate_theta50(out);
  } catch (const NoCrossing&) {
    out.theta50.reset();
  }
  return out;
}

namespace {

// Pool-adjacent-violators with equal weights: least-squares increasing fit.
std::vector<double> isotonic_increasing(const std::vector<double>& y) {
  std::vector<double> level;
  std::vector<std::size_t> count;
  for (double v : y) {
    level.push_back(v);
    count.push_back(1);
    while (level.size() > 1 && level[level.size() - 2] > level.back()) {
      const double merged =
          (level[level.size() - 2] * static_cast<double>(count[count.size() - 2]) +
           level.back() * static_cast<double>(count.back())) /
          static_cast<double>(count[count.size() - 2] + count.back());
      count[count.size() - 2] += count.back();
      level[level.size() - 2] = merged;
      level.pop_back();
      count.pop_back();
    }
  }
  std::vector<double> out;
  out.reserve(y.size());
  for (std::size_t b = 0; b < level.size(); ++b) {
    out.insert(out.end(), count[b], level[b]);
  }
  return out;
}

}  // namespace

double estimate_theta50(const SweepResult& result) {
  const std::size_t m = result.points.size();
  std::vector<double> rates(m);
  for (std::size_t i = 0; i < m; ++i) rates[i] = result.points[i].success_rate;
  const std::vector<double> mono = isotonic_increasing(rates);

  for (std::size_t i = 0; i < m; ++i) {
    if (mono[i] < 0.5) continue;
    if (mono[i] == 0.5) return result.points[i].theta;
    if (i == 0) {
      throw NoCrossing("estimate_theta50: curve starts above 1/2");
    }
    const double lo = mono[i - 1], hi = mono[i];
    const double t = (0.5 - lo) / (hi - lo);
    return result.points[i - 1].theta +
           t * (result.points[i].theta - result.points[i - 1].theta);
  }
  throw NoCrossing("estimate_theta50: curve never reaches 1/2");
}

Chi2TailResult chi2_tail_check(std::size_t m, std::size_t d, double t,
                               std::size_t trials, std::uint64_t seed) {
  if (!(t > static_cast<double>(d))) {
    throw std::invalid_argument("chi2_tail_check: requires t > d");
  }
  if (m < 1 || trials < 1) {
    throw std::invalid_argument("chi2_tail_check: m and trials must be >= 1");
  }
  rng::GaussianStream g(seed, rng::kTagChi2);
  std::size_t hits = 0;
  const double threshold = 2.0 * t;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    double max_draw = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      double z = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        const double v = g.next();
        z += v * v;
      }
      max_draw = std::max(max_draw, z);
    }
    if (max_draw >= threshold) ++hits;
  }

  Chi2TailResult out;
  out.empirical_rate =
      static_cast<double>(hits) / static_cast<double>(trials);
  out.bound = static_cast<double>(m) *
              std::exp(-t * (1.0 - 2.0 * std::sqrt(static_cast<double>(d) / t)));
  out.ok = out.empirical_rate <=
           std::min(1.0, out.bound) +
               3.0 * std::sqrt(out.bound / static_cast<double>(trials)) + 0.01;
  return out;
}

}  // namespace gl_lab
