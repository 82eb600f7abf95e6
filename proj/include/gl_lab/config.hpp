#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gl_lab/ensembles.hpp"
#include "gl_lab/experiments.hpp"

namespace gl_lab {

enum class Command {
  psi,
  solve,
  witness,
  sweep,
  theta50_scan,
  check_assumptions,
  tail_check
};

enum class OutputFormat { csv, json };

enum class CovarianceKind { identity, toeplitz, file };

/// Fully validated run description assembled from a config document.
struct RunConfig {
  Command command = Command::psi;

  // Ensemble.
  Family family = Family::identical;
  std::size_t p = 0;
  std::size_t s = 0;
  std::size_t k = 2;
  double sigma = 0.1;
  double alpha = 0.0;
  SupportPlacement placement = SupportPlacement::first_s;
  CovarianceKind covariance = CovarianceKind::identity;
  double toeplitz_rho = 0.0;
  std::string covariance_file;

  // Sweep / trial geometry.
  std::vector<double> theta_grid;
  std::optional<double> theta;      // solve / witness
  std::optional<std::size_t> n;     // explicit sample size override
  std::size_t trials = 200;
  std::uint64_t seed = 0;
  LambdaRule lambda_rule = LambdaRule::paper_sim;
  double lambda = 0.0;
  Method method = Method::group_l12;

  // Solver knobs.
  std::size_t max_iter = 50000;
  double tol = 1e-9;
  double zero_tol = 1e-10;

  // theta50-scan.
  std::size_t alpha_count = 7;

  // tail-check.
  std::size_t tail_m = 10;
  std::size_t tail_d = 2;
  double tail_t = 18.0;

  // Output.
  std::string out;
  OutputFormat format = OutputFormat::csv;
  unsigned threads = 1;

  // Normalized key/value echo of the parsed document, for meta sidecars.
  std::map<std::string, std::string> echo;

  EnsembleSpec ensemble_spec() const;
  SweepSpec sweep_spec() const;
  SolverConfig solver_config() const;
  /// Covariance matrix for the configured kind; empty for identity.
  Matrix covariance_matrix() const;
};

/// Parses a flat key = value document (with # comments) or a JSON object
/// with the same keys, then validates every field against the module
/// preconditions. Unknown and duplicate keys are rejected. When the
/// document omits the command key, default_command (e.g. from the CLI
/// positional argument) is used instead.
RunConfig parse_config(const std::string& text,
                       const std::optional<std::string>& default_command = {});

std::string to_string(Command c);
std::string to_string(Family f);
std::string to_string(LambdaRule r);
std::string to_string(Method m);
std::string to_string(OutputFormat f);

}  // namespace gl_lab
