#include "gl_lab/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "gl_lab/emit.hpp"
#include "gl_lab/rng.hpp"

namespace gl_lab {

namespace {

struct Instance {
  Matrix x, y, w;
  Coefficients truth;
  std::size_t n = 0;
  double lambda = 0.0;
};

// Draws one seeded instance for the solve/witness commands.
Instance build_instance(const RunConfig& cfg) {
  const EnsembleSpec spec = cfg.ensemble_spec();
  spec.validate();
  Instance inst;
  inst.n = cfg.n ? *cfg.n : sample_size_for_theta(*cfg.theta, cfg.s, cfg.p);
  inst.truth = make_coefficients(spec, cfg.seed);
  inst.x = spec.identity_covariance()
               ? sample_design_standard(inst.n, cfg.p, cfg.seed)
               : sample_design(inst.n, spec.covariance, cfg.seed);
  inst.w = sample_noise(inst.n, cfg.k, cfg.sigma, cfg.seed);
  inst.y = assemble_observations(inst.x, inst.truth.b, inst.w);
  inst.lambda =
      lambda_from_rule(cfg.lambda_rule, cfg.lambda, inst.n, cfg.p, cfg.s);
  return inst;
}

void log_point(const SweepPoint& pt) {
  std::fprintf(stderr, "  theta=%-6g n=%-5zu successes=%zu/%zu rate=%.3f\n",
               pt.theta, pt.n, pt.successes, pt.trials, pt.success_rate);
}

int run_psi(const RunConfig& cfg) {
  const EnsembleSpec spec = cfg.ensemble_spec();
  const Coefficients coeff = make_coefficients(spec, cfg.seed);
  Matrix b_s(cfg.s, cfg.k);
  for (std::size_t i = 0; i < cfg.s; ++i) {
    for (std::size_t j = 0; j < cfg.k; ++j) {
      b_s(i, j) = coeff.b(coeff.support[i], j);
    }
  }

  Matrix sigma = spec.covariance;
  double cmin = 1.0, cmax = 1.0;
  Matrix sig_ss = Matrix::identity(cfg.s);
  if (!spec.identity_covariance()) {
    const AssumptionReport rep = check_assumptions(sigma, coeff.support);
    cmin = rep.cmin;
    cmax = rep.cmax;
    for (std::size_t a = 0; a < cfg.s; ++a) {
      for (std::size_t b = 0; b < cfg.s; ++b) {
        sig_ss(a, b) = sigma(coeff.support[a], coeff.support[b]);
      }
    }
  }

  TheoryReport report;
  report.psi = sparsity_overlap(b_s, sig_ss);
  report.bmin = bmin(b_s);
  const auto bounds = psi_bounds(cfg.s, cfg.k, cmin, cmax);
  report.psi_lower = bounds.first;
  report.psi_upper = bounds.second;
  if (cfg.n || cfg.theta) {
    const std::size_t n =
        cfg.n ? *cfg.n : sample_size_for_theta(*cfg.theta, cfg.s, cfg.p);
    report.theta = sample_complexity_theta(n, cfg.p, cfg.s, report.psi);
  }
  emit_results(report, cfg.out, cfg.format, cfg);
  return 0;
}

int run_solve(const RunConfig& cfg) {
  const Instance inst = build_instance(cfg);
  SolverConfig scfg = cfg.solver_config();
  scfg.lambda = inst.lambda;
  Solution sol;
  try {
    if (cfg.method == Method::group_l12) {
      sol = group_lasso(inst.x, inst.y, scfg);
    } else {
      sol.support = lasso_union_rows(inst.x, inst.y, scfg);
      sol.converged = true;
    }
  } catch (const NotConverged& e) {
    std::fprintf(stderr, "solver did not converge: %s\n", e.what());
    sol = e.best;
  }
  const bool exact = sol.support == inst.truth.support;
  std::fprintf(stderr, "n=%zu lambda=%g exact_recovery=%s\n", inst.n,
               inst.lambda, exact ? "yes" : "no");
  emit_results(sol, cfg.out, cfg.format, cfg);
  return 0;
}

int run_witness(const RunConfig& cfg) {
  const Instance inst = build_instance(cfg);
  const WitnessReport report =
      construct_witness(inst.x, inst.w, inst.truth.b, inst.truth.support,
                        inst.lambda, cfg.solver_config());
  emit_results(report, cfg.out, cfg.format, cfg);
  return 0;
}

int run_sweep(const RunConfig& cfg) {
  const SweepResult result =
      sweep_theta(cfg.sweep_spec(), cfg.threads, log_point);
  emit_results(result, cfg.out, cfg.format, cfg);
  return 0;
}

int run_theta50_scan(const RunConfig& cfg) {
  ThetaScanResult scan;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < cfg.alpha_count; ++i) {
    const double alpha = 1.57079632679489661923 *
                         static_cast<double>(i) /
                         static_cast<double>(cfg.alpha_count - 1);
    SweepSpec spec = cfg.sweep_spec();
    spec.ensemble.family = Family::b1_alpha;
    spec.ensemble.alpha = alpha;

    ThetaScanRow row;
    row.alpha = alpha;
    row.cos_alpha = std::abs(std::cos(alpha));
    std::fprintf(stderr, "alpha=%g group sweep\n", alpha);
    spec.method = Method::group_l12;
    const SweepResult group = sweep_theta(spec, cfg.threads, log_point);
    row.theta50_group = group.theta50 ? *group.theta50 : nan;
    std::fprintf(stderr, "alpha=%g lasso sweep\n", alpha);
    spec.method = Method::lasso_union;
    const SweepResult lasso = sweep_theta(spec, cfg.threads, log_point);
    row.theta50_lasso = lasso.theta50 ? *lasso.theta50 : nan;
    scan.rows.push_back(row);
  }
  emit_results(scan, cfg.out, cfg.format, cfg);
  return 0;
}

int run_check_assumptions(const RunConfig& cfg) {
  Matrix sigma = cfg.covariance_matrix();
  if (sigma.empty()) sigma = Matrix::identity(cfg.p);
  SupportSet s;
  if (cfg.placement == SupportPlacement::first_s) {
    s = SupportSet::first(cfg.s, cfg.p);
  } else {
    EnsembleSpec spec;
    spec.p = cfg.p;
    spec.s = cfg.s;
    spec.k = 1;
    spec.family = Family::custom;
    spec.custom_b_s = Matrix(cfg.s, 1, std::vector<double>(cfg.s, 1.0));
    spec.placement = SupportPlacement::random;
    s = make_coefficients(spec, cfg.seed).support;
  }
  emit_results(check_assumptions(sigma, s), cfg.out, cfg.format, cfg);
  return 0;
}

int run_tail_check(const RunConfig& cfg) {
  const Chi2TailResult result =
      chi2_tail_check(cfg.tail_m, cfg.tail_d, cfg.tail_t, cfg.trials,
                      cfg.seed);
  emit_results(result, cfg.out, cfg.format, cfg);
  return 0;
}

}  // namespace

RunConfig load_config(const std::string& path, const CliOverrides& overrides) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();

  RunConfig cfg = parse_config(buffer.str(), overrides.command);
  if (overrides.command && to_string(cfg.command) != *overrides.command) {
    throw ValidationError("config command '" + to_string(cfg.command) +
                          "' conflicts with CLI command '" +
                          *overrides.command + "'");
  }
  if (overrides.out) cfg.out = *overrides.out;
  if (overrides.format) {
    if (*overrides.format == "csv") {
      cfg.format = OutputFormat::csv;
    } else if (*overrides.format == "json") {
      cfg.format = OutputFormat::json;
    } else {
      throw ValidationError("--format must be csv or json");
    }
  }
  if (overrides.seed) cfg.seed = *overrides.seed;
  if (overrides.threads) cfg.threads = *overrides.threads;
  return cfg;
}

int run_command(const RunConfig& config) {
  switch (config.command) {
    case Command::psi: return run_psi(config);
    case Command::solve: return run_solve(config);
    case Command::witness: return run_witness(config);
    case Command::sweep: return run_sweep(config);
    case Command::theta50_scan: return run_theta50_scan(config);
    case Command::check_assumptions: return run_check_assumptions(config);
    case Command::tail_check: return run_tail_check(config);
  }
  return 1;
}

}  // namespace gl_lab
