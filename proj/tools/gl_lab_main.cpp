#include <cstdio>
#include <cstdlib>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "gl_lab/cli.hpp"

namespace {

unsigned resolve_threads(const gl_lab::RunConfig& cfg, bool flag_given) {
  if (flag_given) return cfg.threads;
  if (const char* env = std::getenv("GL_LAB_THREADS")) {
    try {
      return static_cast<unsigned>(std::stoul(env));
    } catch (const std::exception&) {
      std::fprintf(stderr, "ignoring malformed GL_LAB_THREADS='%s'\n", env);
    }
  }
  return cfg.threads;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Group-Lasso union-support laboratory: block l1/l2 solver, "
      "sparsity-overlap theory, primal-dual witness diagnostics and "
      "Monte Carlo phase-transition sweeps"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string format;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  bool out_given = false, format_given = false, seed_given = false,
       threads_given = false;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"psi", "Sparsity-overlap value and bounds for a coefficient family"},
      {"solve", "Draw one instance and solve it with the selected method"},
      {"witness", "Primal-dual witness events for one seeded instance"},
      {"sweep", "Success-probability sweep over the rescaled sample size"},
      {"theta50-scan",
       "theta50 versus |cos(alpha)| for the two-row interpolation family"},
      {"check-assumptions",
       "Eigenspectrum and incoherence diagnostics for a covariance"},
      {"tail-check", "Monte Carlo check of the chi-square max tail bound"}};
  for (const auto& [name, description] : commands) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("--config", config_path, "Config file (key = value or JSON)")
        ->required();
    sub->add_option("--out", out_path, "Output path (default: stdout)")
        ->trigger_on_parse()
        ->each([&](const std::string&) { out_given = true; });
    sub->add_option("--format", format, "csv or json")
        ->each([&](const std::string&) { format_given = true; });
    sub->add_option("--seed", seed, "Seed override")
        ->each([&](const std::string&) { seed_given = true; });
    sub->add_option("--threads", threads,
                    "Worker threads for sweeps; 0 = auto "
                    "(GL_LAB_THREADS is the fallback)")
        ->each([&](const std::string&) { threads_given = true; });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    gl_lab::CliOverrides overrides;
    overrides.command = app.get_subcommands().front()->get_name();
    if (out_given) overrides.out = out_path;
    if (format_given) overrides.format = format;
    if (seed_given) overrides.seed = seed;
    if (threads_given) overrides.threads = threads;

    gl_lab::RunConfig cfg = gl_lab::load_config(config_path, overrides);
    cfg.threads = resolve_threads(cfg, threads_given);
    return gl_lab::run_command(cfg);
  } catch (const gl_lab::ParseError& e) {
    std::fprintf(stderr, "config parse error: %s\n", e.what());
    return 2;
  } catch (const gl_lab::ValidationError& e) {
    std::fprintf(stderr, "config validation error: %s\n", e.what());
    return 2;
  } catch (const gl_lab::IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
