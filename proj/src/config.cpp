#include "gl_lab/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace gl_lab {

namespace {

const std::set<std::string> kKnownKeys = {
    "command",     "family",       "p",
    "s",           "K",            "sigma",
    "alpha",       "support_placement", "covariance",
    "toeplitz_rho", "covariance_file",  "theta_grid",
    "theta",       "n",            "trials",
    "seed",        "lambda_rule",  "lambda",
    "method",      "max_iter",     "tol",
    "zero_tol",    "alpha_count",  "m",
    "d",           "t",            "out",
    "format",      "threads"};

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

using KeyMap = std::map<std::string, std::string>;

KeyMap parse_key_value(const std::string& text) {
  KeyMap map;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("line " + std::to_string(line_no) +
                       ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ParseError("line " + std::to_string(line_no) + ": empty key");
    }
    if (map.count(key) != 0) {
      throw ParseError("line " + std::to_string(line_no) +
                       ": duplicate key '" + key + "'");
    }
    map[key] = value;
  }
  return map;
}

KeyMap parse_json_document(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON config: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ParseError("JSON config must be an object");
  }
  KeyMap map;
  for (const auto& [key, value] : doc.items()) {
    if (value.is_string()) {
      map[key] = value.get<std::string>();
    } else if (value.is_array()) {
      std::string joined;
      for (const auto& item : value) {
        if (!joined.empty()) joined += ",";
        joined += item.dump();
      }
      map[key] = joined;
    } else {
      map[key] = value.dump();
    }
  }
  return map;
}

class FieldReader {
 public:
  explicit FieldReader(KeyMap map) : map_(std::move(map)) {
    for (const auto& [key, value] : map_) {
      (void)value;
      if (kKnownKeys.count(key) == 0) {
        throw ParseError("unknown key '" + key + "'");
      }
    }
  }

  const KeyMap& map() const { return map_; }
  bool has(const std::string& key) const { return map_.count(key) != 0; }

  std::string str(const std::string& key, const std::string& fallback) const {
    const auto it = map_.find(key);
    return it == map_.end() ? fallback : it->second;
  }

  double number(const std::string& key, double fallback) const {
    const auto it = map_.find(key);
    if (it == map_.end()) return fallback;
    return parse_double(key, it->second);
  }

  std::uint64_t unsigned_int(const std::string& key,
                             std::uint64_t fallback) const {
    const auto it = map_.find(key);
    if (it == map_.end()) return fallback;
    const std::string& v = it->second;
    try {
      std::size_t pos = 0;
      const std::uint64_t out = std::stoull(v, &pos);
      if (pos != v.size() || v[0] == '-') throw std::invalid_argument(v);
      return out;
    } catch (const std::exception&) {
      throw ValidationError("key '" + key +
                            "' must be a nonnegative integer, got '" + v +
                            "'");
    }
  }

  std::vector<double> number_list(const std::string& key) const {
    std::vector<double> out;
    const auto it = map_.find(key);
    if (it == map_.end()) return out;
    std::stringstream ss(it->second);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      tok = trim(tok);
      if (tok.empty()) continue;
      out.push_back(parse_double(key, tok));
    }
    return out;
  }

 private:
  static double parse_double(const std::string& key, const std::string& v) {
    try {
      std::size_t pos = 0;
      const double out = std::stod(v, &pos);
      if (pos != v.size() || !std::isfinite(out)) {
        throw std::invalid_argument(v);
      }
      return out;
    } catch (const std::exception&) {
      throw ValidationError("key '" + key + "' must be a finite number, got '" +
                            v + "'");
    }
  }

  KeyMap map_;
};

Command parse_command(const std::string& name) {
  if (name == "psi") return Command::psi;
  if (name == "solve") return Command::solve;
  if (name == "witness") return Command::witness;
  if (name == "sweep") return Command::sweep;
  if (name == "theta50-scan") return Command::theta50_scan;
  if (name == "check-assumptions") return Command::check_assumptions;
  if (name == "tail-check") return Command::tail_check;
  throw ValidationError("unknown command '" + name + "'");
}

Family parse_family(const std::string& name) {
  if (name == "identical") return Family::identical;
  if (name == "orthonormal") return Family::orthonormal;
  if (name == "intermediate") return Family::intermediate;
  if (name == "b1_alpha") return Family::b1_alpha;
  throw ValidationError("unknown family '" + name + "'");
}

}  // namespace

EnsembleSpec RunConfig::ensemble_spec() const {
  EnsembleSpec spec;
  spec.p = p;
  spec.s = s;
  spec.k = k;
  spec.sigma = sigma;
  spec.family = family;
  spec.alpha = alpha;
  spec.placement = placement;
  spec.covariance = covariance_matrix();
  return spec;
}

SweepSpec RunConfig::sweep_spec() const {
  SweepSpec spec;
  spec.ensemble = ensemble_spec();
  spec.theta_grid = theta_grid;
  spec.trials = trials;
  spec.base_seed = seed;
  spec.lambda_rule = lambda_rule;
  spec.fixed_lambda = lambda;
  spec.method = method;
  spec.solver = solver_config();
  return spec;
}

SolverConfig RunConfig::solver_config() const {
  SolverConfig cfg;
  cfg.max_iter = max_iter;
  cfg.tol = tol;
  cfg.zero_tol = zero_tol;
  cfg.lambda = lambda;
  return cfg;
}

Matrix RunConfig::covariance_matrix() const {
  switch (covariance) {
    case CovarianceKind::identity:
      return Matrix();
    case CovarianceKind::toeplitz:
      return make_toeplitz(p, toeplitz_rho);
    case CovarianceKind::file: {
      std::ifstream in(covariance_file);
      if (!in) {
        throw IoError("cannot open covariance file '" + covariance_file + "'");
      }
      nlohmann::json doc;
      try {
        in >> doc;
      } catch (const nlohmann::json::exception& e) {
        throw ParseError("covariance file is not valid JSON: " +
                         std::string(e.what()));
      }
      if (!doc.is_array() || doc.empty() || !doc[0].is_array()) {
        throw ParseError("covariance file must hold a 2-D JSON array");
      }
      const std::size_t rows = doc.size(), cols = doc[0].size();
      std::vector<double> entries;
      entries.reserve(rows * cols);
      for (const auto& row : doc) {
        if (!row.is_array() || row.size() != cols) {
          throw ParseError("covariance file rows have unequal lengths");
        }
        for (const auto& v : row) entries.push_back(v.get<double>());
      }
      return Matrix(rows, cols, std::move(entries));
    }
  }
  return Matrix();
}

RunConfig parse_config(const std::string& text,
                       const std::optional<std::string>& default_command) {
  const std::string body = trim(text);
  FieldReader fields(!body.empty() && body.front() == '{'
                         ? parse_json_document(text)
                         : parse_key_value(text));

  RunConfig cfg;
  cfg.echo = fields.map();
  if (fields.has("command")) {
    cfg.command = parse_command(fields.str("command", ""));
  } else if (default_command) {
    cfg.command = parse_command(*default_command);
    cfg.echo["command"] = *default_command;
  } else {
    throw ValidationError("missing required key 'command'");
  }

  if (fields.has("family")) cfg.family = parse_family(fields.str("family", ""));
  cfg.p = fields.unsigned_int("p", 0);
  cfg.s = fields.unsigned_int("s", 0);
  cfg.k = fields.unsigned_int("K", 2);
  cfg.sigma = fields.number("sigma", 0.1);
  cfg.alpha = fields.number("alpha", 0.0);

  const std::string placement = fields.str("support_placement", "first_s");
  if (placement == "first_s") {
    cfg.placement = SupportPlacement::first_s;
  } else if (placement == "random") {
    cfg.placement = SupportPlacement::random;
  } else {
    throw ValidationError("support_placement must be first_s or random");
  }

  const std::string cov = fields.str("covariance", "identity");
  if (cov == "identity") {
    cfg.covariance = CovarianceKind::identity;
  } else if (cov == "toeplitz") {
    cfg.covariance = CovarianceKind::toeplitz;
  } else if (cov == "file") {
    cfg.covariance = CovarianceKind::file;
  } else {
    throw ValidationError("covariance must be identity, toeplitz or file");
  }
  cfg.toeplitz_rho = fields.number("toeplitz_rho", 0.0);
  if (cfg.covariance == CovarianceKind::toeplitz &&
      std::abs(cfg.toeplitz_rho) >= 1.0) {
    throw ValidationError("toeplitz_rho must satisfy |rho| < 1");
  }
  cfg.covariance_file = fields.str("covariance_file", "");
  if (cfg.covariance == CovarianceKind::file && cfg.covariance_file.empty()) {
    throw ValidationError("covariance = file requires covariance_file");
  }

  cfg.theta_grid = fields.number_list("theta_grid");
  if (fields.has("theta")) cfg.theta = fields.number("theta", 0.0);
  if (fields.has("n")) cfg.n = fields.unsigned_int("n", 0);
  cfg.trials = fields.unsigned_int("trials", 200);
  cfg.seed = fields.unsigned_int("seed", 0);

  const std::string rule = fields.str("lambda_rule", "paper_sim");
  if (rule == "paper_sim") {
    cfg.lambda_rule = LambdaRule::paper_sim;
  } else if (rule == "theorem") {
    cfg.lambda_rule = LambdaRule::theorem;
  } else if (rule == "fixed") {
    cfg.lambda_rule = LambdaRule::fixed;
  } else {
    throw ValidationError("lambda_rule must be paper_sim, theorem or fixed");
  }
  cfg.lambda = fields.number("lambda", 0.0);
  if (cfg.lambda_rule == LambdaRule::fixed && !fields.has("lambda")) {
    throw ValidationError("lambda_rule = fixed requires lambda");
  }

  const std::string method = fields.str("method", "group_l12");
  if (method == "group_l12") {
    cfg.method = Method::group_l12;
  } else if (method == "lasso_union") {
    cfg.method = Method::lasso_union;
  } else {
    throw ValidationError("method must be group_l12 or lasso_union");
  }

  cfg.max_iter = fields.unsigned_int("max_iter", 50000);
  cfg.tol = fields.number("tol", 1e-9);
  cfg.zero_tol = fields.number("zero_tol", 1e-10);
  cfg.alpha_count = fields.unsigned_int("alpha_count", 7);
  cfg.tail_m = fields.unsigned_int("m", 10);
  cfg.tail_d = fields.unsigned_int("d", 2);
  cfg.tail_t = fields.number("t", 18.0);
  cfg.out = fields.str("out", "");

  const std::string format = fields.str("format", "csv");
  if (format == "csv") {
    cfg.format = OutputFormat::csv;
  } else if (format == "json") {
    cfg.format = OutputFormat::json;
  } else {
    throw ValidationError("format must be csv or json");
  }
  cfg.threads = static_cast<unsigned>(fields.unsigned_int("threads", 1));

  // Cross-field validation against the module preconditions.
  if (cfg.sigma < 0.0) throw ValidationError("sigma must be >= 0");
  if (cfg.lambda < 0.0) throw ValidationError("lambda must be >= 0");
  if (cfg.trials < 1) throw ValidationError("trials must be >= 1");
  if (cfg.max_iter < 1) throw ValidationError("max_iter must be >= 1");
  if (cfg.tol <= 0.0) throw ValidationError("tol must be > 0");
  if (cfg.zero_tol < 0.0) throw ValidationError("zero_tol must be >= 0");
  if (cfg.theta && *cfg.theta <= 0.0) {
    throw ValidationError("theta must be > 0");
  }
  for (std::size_t i = 0; i < cfg.theta_grid.size(); ++i) {
    if (cfg.theta_grid[i] < 0.1 || cfg.theta_grid[i] > 3.0) {
      throw ValidationError("theta_grid values must lie in [0.1, 3]");
    }
    if (i > 0 && cfg.theta_grid[i] <= cfg.theta_grid[i - 1]) {
      throw ValidationError("theta_grid must strictly increase");
    }
  }

  const bool needs_ensemble = cfg.command != Command::tail_check;
  if (needs_ensemble) {
    if (cfg.p == 0) throw ValidationError("p must be >= 1");
    if (cfg.s == 0) throw ValidationError("s must be >= 1");
    if (cfg.s > cfg.p) throw ValidationError("s must not exceed p");
    if (cfg.command == Command::check_assumptions) {
      if (cfg.s >= cfg.p) {
        throw ValidationError("check-assumptions requires s < p");
      }
    } else {
      EnsembleSpec probe = cfg.ensemble_spec();
      probe.covariance = Matrix();  // shape checks only
      try {
        probe.validate();
      } catch (const std::exception& e) {
        throw ValidationError(e.what());
      }
    }
  }
  switch (cfg.command) {
    case Command::solve:
    case Command::witness:
      if (!cfg.theta && !cfg.n) {
        throw ValidationError("solve/witness require theta or n");
      }
      break;
    case Command::sweep:
      if (cfg.theta_grid.empty()) {
        throw ValidationError("sweep requires a nonempty theta_grid");
      }
      break;
    case Command::theta50_scan:
      if (cfg.theta_grid.empty()) {
        throw ValidationError("theta50-scan requires a nonempty theta_grid");
      }
      if (cfg.alpha_count < 2) {
        throw ValidationError("alpha_count must be >= 2");
      }
      if (fields.has("family") && cfg.family != Family::b1_alpha) {
        throw ValidationError("theta50-scan requires family = b1_alpha");
      }
      cfg.family = Family::b1_alpha;
      break;
    case Command::tail_check:
      if (cfg.tail_m < 1) throw ValidationError("m must be >= 1");
      if (cfg.tail_d < 1) throw ValidationError("d must be >= 1");
      if (!(cfg.tail_t > static_cast<double>(cfg.tail_d))) {
        throw ValidationError("t must exceed d");
      }
      break;
    default:
      break;
  }
  return cfg;
}

std::string to_string(Command c) {
  switch (c) {
    case Command::psi: return "psi";
    case Command::solve: return "solve";
    case Command::witness: return "witness";
    case Command::sweep: return "sweep";
    case Command::theta50_scan: return "theta50-scan";
    case Command::check_assumptions: return "check-assumptions";
    case Command::tail_check: return "tail-check";
  }
  return "";
}

std::string to_string(Family f) {
  switch (f) {
    case Family::identical: return "identical";
    case Family::orthonormal: return "orthonormal";
    case Family::intermediate: return "intermediate";
    case Family::b1_alpha: return "b1_alpha";
    case Family::custom: return "custom";
  }
  return "";
}

std::string to_string(LambdaRule r) {
  switch (r) {
    case LambdaRule::paper_sim: return "paper_sim";
    case LambdaRule::theorem: return "theorem";
    case LambdaRule::fixed: return "fixed";
  }
  return "";
}

std::string to_string(Method m) {
  switch (m) {
    case Method::group_l12: return "group_l12";
    case Method::lasso_union: return "lasso_union";
  }
  return "";
}

std::string to_string(OutputFormat f) {
  return f == OutputFormat::csv ? "csv" : "json";
}

}  // namespace gl_lab
