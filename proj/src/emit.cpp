#include "gl_lab/emit.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

namespace gl_lab {

namespace {

constexpr const char* kArtifactVersion = "1.0.0";

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt(bool v) { return v ? "true" : "false"; }

nlohmann::json sweep_header(const SweepSpec& spec) {
  nlohmann::json j;
  j["family"] = to_string(spec.ensemble.family);
  j["p"] = spec.ensemble.p;
  j["s"] = spec.ensemble.s;
  j["K"] = spec.ensemble.k;
  j["sigma"] = spec.ensemble.sigma;
  j["alpha"] = spec.ensemble.alpha;
  j["method"] = to_string(spec.method);
  j["lambda_rule"] = to_string(spec.lambda_rule);
  j["fixed_lambda"] = spec.fixed_lambda;
  j["trials"] = spec.trials;
  j["base_seed"] = spec.base_seed;
  return j;
}

template <typename T>
void emit_common(const T& result, const std::string& path,
                 OutputFormat format, const RunConfig& config) {
  const std::string text =
      format == OutputFormat::csv ? to_csv(result) : to_json_text(result);
  if (path.empty()) {
    std::cout << text;
    return;
  }
  write_text_file(path, text);
  write_meta_sidecar(path, config);
}

}  // namespace

std::string to_csv(const SweepResult& result) {
  std::ostringstream out;
  out << "family,p,s,K,sigma,method,lambda_rule,theta,n,trials,successes,"
         "success_rate\n";
  const EnsembleSpec& e = result.spec.ensemble;
  for (const SweepPoint& pt : result.points) {
    out << to_string(e.family) << ',' << e.p << ',' << e.s << ',' << e.k
        << ',' << fmt(e.sigma) << ',' << to_string(result.spec.method) << ','
        << to_string(result.spec.lambda_rule) << ',' << fmt(pt.theta) << ','
        << pt.n << ',' << pt.trials << ',' << pt.successes << ','
        << fmt(pt.success_rate) << '\n';
  }
  return out.str();
}

std::string to_json_text(const SweepResult& result) {
  nlohmann::json j = sweep_header(result.spec);
  j["points"] = nlohmann::json::array();
  for (const SweepPoint& pt : result.points) {
    j["points"].push_back({{"theta", pt.theta},
                           {"n", pt.n},
                           {"trials", pt.trials},
                           {"successes", pt.successes},
                           {"solver_errors", pt.solver_errors},
                           {"success_rate", pt.success_rate}});
  }
  if (result.theta50) {
    j["theta50"] = *result.theta50;
  } else {
    j["theta50"] = nullptr;
  }
  return j.dump(2) + "\n";
}

std::string to_csv(const TheoryReport& report) {
  std::ostringstream out;
  out << "psi,theta,psi_lower,psi_upper,bmin\n"
      << fmt(report.psi) << ',' << fmt(report.theta) << ','
      << fmt(report.psi_lower) << ',' << fmt(report.psi_upper) << ','
      << fmt(report.bmin) << '\n';
  return out.str();
}

std::string to_json_text(const TheoryReport& report) {
  nlohmann::json j;
  j["psi"] = report.psi;
  j["theta"] = report.theta;
  j["psi_lower"] = report.psi_lower;
  j["psi_upper"] = report.psi_upper;
  j["bmin"] = report.bmin;
  return j.dump(2) + "\n";
}

std::string to_csv(const WitnessReport& report) {
  std::ostringstream out;
  out << "event_u,event_v,strict_dual_feasibility_margin,m_n_spectral,"
         "zeta_bound_ok,zeta_discrepancy\n"
      << fmt(report.event_u) << ',' << fmt(report.event_v) << ','
      << fmt(report.strict_dual_feasibility_margin) << ','
      << fmt(report.m_n_spectral) << ',' << fmt(report.zeta_bound_ok) << ','
      << fmt(report.zeta_discrepancy) << '\n';
  return out.str();
}

std::string to_json_text(const WitnessReport& report) {
  nlohmann::json j;
  j["event_u"] = report.event_u;
  j["event_v"] = report.event_v;
  j["strict_dual_feasibility_margin"] = report.strict_dual_feasibility_margin;
  j["m_n_spectral"] = report.m_n_spectral;
  j["zeta_bound_ok"] = report.zeta_bound_ok;
  if (std::isfinite(report.zeta_discrepancy)) {
    j["zeta_discrepancy"] = report.zeta_discrepancy;
  } else {
    j["zeta_discrepancy"] = nullptr;
  }
  j["u_block_norm"] = block_norm(report.u_s, Ord::inf, Ord::two);
  j["v_block_norm"] = block_norm(report.v_sc, Ord::inf, Ord::two);
  return j.dump(2) + "\n";
}

std::string to_csv(const Solution& solution) {
  std::ostringstream out;
  out << "iterations,converged,objective,kkt_max_violation,support_size,"
         "support\n"
      << solution.iterations << ',' << fmt(solution.converged) << ','
      << fmt(solution.objective) << ',' << fmt(solution.kkt_max_violation)
      << ',' << solution.support.size() << ',';
  for (std::size_t i = 0; i < solution.support.size(); ++i) {
    if (i > 0) out << ' ';
    out << solution.support[i];
  }
  out << '\n';
  return out.str();
}

std::string to_json_text(const Solution& solution) {
  nlohmann::json j;
  j["iterations"] = solution.iterations;
  j["converged"] = solution.converged;
  j["objective"] = solution.objective;
  j["kkt_max_violation"] = solution.kkt_max_violation;
  j["support"] = solution.support.indices();
  return j.dump(2) + "\n";
}

std::string to_csv(const ThetaScanResult& result) {
  std::ostringstream out;
  out << "alpha,cos_alpha,theta50_group,theta50_lasso\n";
  for (const ThetaScanRow& row : result.rows) {
    out << fmt(row.alpha) << ',' << fmt(row.cos_alpha) << ','
        << fmt(row.theta50_group) << ',' << fmt(row.theta50_lasso) << '\n';
  }
  return out.str();
}

std::string to_json_text(const ThetaScanResult& result) {
  nlohmann::json j;
  j["rows"] = nlohmann::json::array();
  for (const ThetaScanRow& row : result.rows) {
    nlohmann::json r;
    r["alpha"] = row.alpha;
    r["cos_alpha"] = row.cos_alpha;
    if (std::isfinite(row.theta50_group)) {
      r["theta50_group"] = row.theta50_group;
    } else {
      r["theta50_group"] = nullptr;
    }
    if (std::isfinite(row.theta50_lasso)) {
      r["theta50_lasso"] = row.theta50_lasso;
    } else {
      r["theta50_lasso"] = nullptr;
    }
    j["rows"].push_back(r);
  }
  return j.dump(2) + "\n";
}

std::string to_csv(const AssumptionReport& report) {
  std::ostringstream out;
  out << "cmin,cmax,incoherence_gamma,dmax,a1_ok,a2_ok,a3_ok\n"
      << fmt(report.cmin) << ',' << fmt(report.cmax) << ','
      << fmt(report.incoherence_gamma) << ',' << fmt(report.dmax) << ','
      << fmt(report.a1_ok) << ',' << fmt(report.a2_ok) << ','
      << fmt(report.a3_ok) << '\n';
  return out.str();
}

std::string to_json_text(const AssumptionReport& report) {
  nlohmann::json j;
  j["cmin"] = report.cmin;
  j["cmax"] = report.cmax;
  j["incoherence_gamma"] = report.incoherence_gamma;
  j["dmax"] = report.dmax;
  j["a1_ok"] = report.a1_ok;
  j["a2_ok"] = report.a2_ok;
  j["a3_ok"] = report.a3_ok;
  return j.dump(2) + "\n";
}

std::string to_csv(const Chi2TailResult& result) {
  std::ostringstream out;
  out << "empirical_rate,bound,ok\n"
      << fmt(result.empirical_rate) << ',' << fmt(result.bound) << ','
      << fmt(result.ok) << '\n';
  return out.str();
}

std::string to_json_text(const Chi2TailResult& result) {
  nlohmann::json j;
  j["empirical_rate"] = result.empirical_rate;
  j["bound"] = result.bound;
  j["ok"] = result.ok;
  return j.dump(2) + "\n";
}

SweepResult read_sweep_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid sweep JSON: ") + e.what());
  }
  SweepResult out;
  EnsembleSpec& e = out.spec.ensemble;
  const std::string family = j.at("family").get<std::string>();
  if (family == "identical") e.family = Family::identical;
  else if (family == "orthonormal") e.family = Family::orthonormal;
  else if (family == "intermediate") e.family = Family::intermediate;
  else if (family == "b1_alpha") e.family = Family::b1_alpha;
  else throw ParseError("invalid sweep JSON: unknown family " + family);
  e.p = j.at("p").get<std::size_t>();
  e.s = j.at("s").get<std::size_t>();
  e.k = j.at("K").get<std::size_t>();
  e.sigma = j.at("sigma").get<double>();
  e.alpha = j.at("alpha").get<double>();
  const std::string method = j.at("method").get<std::string>();
  out.spec.method =
      method == "group_l12" ? Method::group_l12 : Method::lasso_union;
  const std::string rule = j.at("lambda_rule").get<std::string>();
  out.spec.lambda_rule = rule == "paper_sim"  ? LambdaRule::paper_sim
                         : rule == "theorem" ? LambdaRule::theorem
                                             : LambdaRule::fixed;
  out.spec.fixed_lambda = j.at("fixed_lambda").get<double>();
  out.spec.trials = j.at("trials").get<std::size_t>();
  out.spec.base_seed = j.at("base_seed").get<std::uint64_t>();
  for (const auto& pj : j.at("points")) {
    SweepPoint pt;
    pt.theta = pj.at("theta").get<double>();
    pt.n = pj.at("n").get<std::size_t>();
    pt.trials = pj.at("trials").get<std::size_t>();
    pt.successes = pj.at("successes").get<std::size_t>();
    pt.solver_errors = pj.at("solver_errors").get<std::size_t>();
    pt.success_rate = pj.at("success_rate").get<double>();
    out.points.push_back(pt);
    out.spec.theta_grid.push_back(pt.theta);
  }
  if (!j.at("theta50").is_null()) {
    out.theta50 = j.at("theta50").get<double>();
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("write to '" + path + "' failed");
}

void write_meta_sidecar(const std::string& path, const RunConfig& config) {
  nlohmann::json j;
  j["artifact_version"] = kArtifactVersion;
  j["command"] = to_string(config.command);
  j["seed"] = config.seed;
  j["config"] = config.echo;
  write_text_file(path + ".meta.json", j.dump(2) + "\n");
}

void emit_results(const SweepResult& result, const std::string& path,
                  OutputFormat format, const RunConfig& config) {
  emit_common(result, path, format, config);
}
void emit_results(const TheoryReport& report, const std::string& path,
                  OutputFormat format, const RunConfig& config) {
  emit_common(report, path, format, config);
}
void emit_results(const WitnessReport& report, const std::string& path,
                  OutputFormat format, const RunConfig& config) {
  emit_common(report, path, format, config);
}
void emit_results(const Solution& solution, const std::string& path,
                  OutputFormat format, const RunConfig& config) {
  emit_common(solution, path, format, config);
}
void emit_results(const ThetaScanResult& result, const std::string& path,
                  OutputFormat format, const RunConfig& config) {
  emit_common(result, path, format, config);
}
void emit_results(const AssumptionReport& report, const std::string& path,
                  OutputFormat format, const RunConfig& config) {
  emit_common(report, path, format, config);
}
void emit_results(const Chi2TailResult& result, const std::string& path,
                  OutputFormat format, const RunConfig& config) {
  emit_common(result, path, format, config);
}

}  // namespace gl_lab
