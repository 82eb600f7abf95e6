#pragma once

#include <string>
#include <vector>

#include "gl_lab/config.hpp"
#include "gl_lab/ensembles.hpp"
#include "gl_lab/experiments.hpp"
#include "gl_lab/solver.hpp"
#include "gl_lab/theory.hpp"
#include "gl_lab/witness.hpp"

namespace gl_lab {

/// One row of a theta50-vs-angle scan.
struct ThetaScanRow {
  double alpha = 0.0;
  double cos_alpha = 0.0;
  double theta50_group = 0.0;  // NaN when the curve never crosses 1/2
  double theta50_lasso = 0.0;
};

struct ThetaScanResult {
  std::vector<ThetaScanRow> rows;
};

/// Serializers used by emit_results; exposed for tests. Decimal values use
/// up to 17 significant digits so 64-bit floats round-trip losslessly.
std::string to_csv(const SweepResult& result);
std::string to_json_text(const SweepResult& result);
std::string to_csv(const TheoryReport& report);
std::string to_json_text(const TheoryReport& report);
std::string to_csv(const WitnessReport& report);
std::string to_json_text(const WitnessReport& report);
std::string to_csv(const Solution& solution);
std::string to_json_text(const Solution& solution);
std::string to_csv(const ThetaScanResult& result);
std::string to_json_text(const ThetaScanResult& result);
std::string to_csv(const AssumptionReport& report);
std::string to_json_text(const AssumptionReport& report);
std::string to_csv(const Chi2TailResult& result);
std::string to_json_text(const Chi2TailResult& result);

/// Parses a sweep previously written as JSON.
SweepResult read_sweep_json(const std::string& text);

/// Writes the rendered document to path plus a <path>.meta.json sidecar
/// echoing the run configuration, seed and artifact version. An empty path
/// sends the document to stdout and skips the sidecar.
void emit_results(const SweepResult& result, const std::string& path,
                  OutputFormat format, const RunConfig& config);
void emit_results(const TheoryReport& report, const std::string& path,
                  OutputFormat format, const RunConfig& config);
void emit_results(const WitnessReport& report, const std::string& path,
                  OutputFormat format, const RunConfig& config);
void emit_results(const Solution& solution, const std::string& path,
                  OutputFormat format, const RunConfig& config);
void emit_results(const ThetaScanResult& result, const std::string& path,
                  OutputFormat format, const RunConfig& config);
void emit_results(const AssumptionReport& report, const std::string& path,
                  OutputFormat format, const RunConfig& config);
void emit_results(const Chi2TailResult& result, const std::string& path,
                  OutputFormat format, const RunConfig& config);

void write_meta_sidecar(const std::string& path, const RunConfig& config);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace gl_lab
