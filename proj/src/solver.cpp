#include "gl_lab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gl_lab {

namespace {

// KKT residual tolerance a solve must meet to be declared converged.
constexpr double kKktTol = 1e-7;

double row_norm(const double* r, std::size_t k) {
  double acc = 0.0;
  for (std::size_t j = 0; j < k; ++j) acc += r[j] * r[j];
  return std::sqrt(acc);
}

struct BcdState {
  Matrix xt;                    // p x n, row i is column i of X
  Matrix residual;              // n x K, Y - X B
  std::vector<double> sig_ii;   // diagonal of X^T X / n
  std::size_t n = 0, p = 0, k = 0;
};

// One cyclic pass over the listed blocks; returns the max block l2 change.
double sweep(BcdState& st, Matrix& b, double lambda,
             const std::vector<std::uint32_t>& blocks) {
  const std::size_t n = st.n, k = st.k;
  const double inv_n = 1.0 / static_cast<double>(n);
  double max_change = 0.0;
  double r_i[8];
  double delta[8];
  for (const std::uint32_t i : blocks) {
    const double sii = st.sig_ii[i];
    if (sii == 0.0) continue;
    const double* xi = st.xt.row_ptr(i);
    double* bi = b.row_ptr(i);

    // Partial residual correlation including block i's own contribution.
    for (std::size_t j = 0; j < k; ++j) r_i[j] = sii * bi[j];
    for (std::size_t a = 0; a < n; ++a) {
      const double xai = xi[a] * inv_n;
      const double* ra = st.residual.row_ptr(a);
      for (std::size_t j = 0; j < k; ++j) r_i[j] += xai * ra[j];
    }

    const double rn = row_norm(r_i, k);
    double shrink = 0.0;
    if (rn > lambda) shrink = (1.0 - lambda / rn) / sii;

    double change = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      const double bij = shrink * r_i[j];
      delta[j] = bij - bi[j];
      change += delta[j] * delta[j];
      bi[j] = bij;
    }
    if (change > 0.0) {
      for (std::size_t a = 0; a < n; ++a) {
        const double xai = xi[a];
        double* ra = st.residual.row_ptr(a);
        for (std::size_t j = 0; j < k; ++j) ra[j] -= xai * delta[j];
      }
    }
    max_change = std::max(max_change, std::sqrt(change));
  }
  return max_change;
}

struct BcdOutcome {
  std::size_t sweeps = 0;
  bool hit_tol = false;
};

// Full sweeps interleaved with cycles over the currently nonzero blocks;
// termination always requires a full sweep below tolerance.
BcdOutcome bcd_solve(BcdState& st, Matrix& b, const SolverConfig& cfg,
                     const Matrix& x, const Matrix& y,
                     std::vector<double>* objective_trace) {
  std::vector<std::uint32_t> all(st.p);
  for (std::size_t i = 0; i < st.p; ++i) all[i] = static_cast<std::uint32_t>(i);
  std::vector<std::uint32_t> active;

  BcdOutcome out;
  const auto record = [&] {
    if (objective_trace != nullptr) {
      objective_trace->push_back(group_objective(x, y, b, cfg.lambda));
    }
  };

  while (out.sweeps < cfg.max_iter) {
    const double full_change = sweep(st, b, cfg.lambda, all);
    ++out.sweeps;
    record();
    if (full_change <= cfg.tol) {
      out.hit_tol = true;
      return out;
    }
    active.clear();
    for (std::size_t i = 0; i < st.p; ++i) {
      if (row_norm(b.row_ptr(i), st.k) > 0.0) {
        active.push_back(static_cast<std::uint32_t>(i));
      }
    }
    while (out.sweeps < cfg.max_iter && !active.empty()) {
      const double change = sweep(st, b, cfg.lambda, active);
      ++out.sweeps;
      record();
      if (change <= cfg.tol) break;
    }
  }
  return out;
}

BcdState make_state(const Matrix& x, const Matrix& y) {
  if (x.rows() != y.rows()) {
    throw ShapeMismatch("group_lasso: X and Y row counts differ");
  }
  BcdState st;
  st.n = x.rows();
  st.p = x.cols();
  st.k = y.cols();
  if (st.k > 8) {
    throw std::invalid_argument("group_lasso: at most 8 tasks supported");
  }
  st.xt = transpose(x);
  st.residual = y;
  st.sig_ii.resize(st.p);
  const double inv_n = 1.0 / static_cast<double>(st.n);
  for (std::size_t i = 0; i < st.p; ++i) {
    const double* xi = st.xt.row_ptr(i);
    double acc = 0.0;
    for (std::size_t a = 0; a < st.n; ++a) acc += xi[a] * xi[a];
    st.sig_ii[i] = acc * inv_n;
  }
  return st;
}

// Stationarity residual for the unregularized program.
double least_squares_violation(const Matrix& x, const Matrix& residual) {
  const Matrix g = matmul_transa(x, residual);
  return block_norm(g, Ord::inf, Ord::two) / static_cast<double>(x.rows());
}

}  // namespace

double group_objective(const Matrix& x, const Matrix& y, const Matrix& b,
                       double lambda) {
  const Matrix r = y - matmul(x, b);
  const double fit = frobenius_norm(r);
  return 0.5 * fit * fit / static_cast<double>(x.rows()) +
         lambda * block_norm(b, Ord::one, Ord::two);
}

Solution group_lasso(const Matrix& x, const Matrix& y, const SolverConfig& cfg,
                     std::vector<double>* objective_trace) {
  if (cfg.lambda < 0.0) {
    throw std::invalid_argument("group_lasso: lambda must be >= 0");
  }
  BcdState st = make_state(x, y);
  Matrix b(st.p, st.k);
  const BcdOutcome out = bcd_solve(st, b, cfg, x, y, objective_trace);

  Solution sol;
  sol.b_hat = std::move(b);
  sol.iterations = out.sweeps;
  sol.objective = group_objective(x, y, sol.b_hat, cfg.lambda);
  if (cfg.lambda > 0.0) {
    sol.kkt_max_violation =
        kkt_residual(x, y, sol.b_hat, cfg.lambda).max_violation;
  } else {
    sol.kkt_max_violation = least_squares_violation(x, st.residual);
  }
  sol.support = support(sol.b_hat, cfg.zero_tol);
  sol.converged = out.hit_tol && sol.kkt_max_violation <= kKktTol;
  if (!out.hit_tol) {
    throw NotConverged("group_lasso: sweep budget exhausted after " +
                           std::to_string(out.sweeps) + " sweeps",
                       std::move(sol));
  }
  return sol;
}

Matrix restricted_group_lasso(const Matrix& x_s, const Matrix& y,
                              const SolverConfig& cfg, const Matrix* init) {
  const std::size_t n = x_s.rows(), s = x_s.cols();
  if (s >= n) {
    throw std::invalid_argument("restricted_group_lasso: requires s < n");
  }
  // Condition estimate of the restricted Gram matrix.
  const double inv_n = 1.0 / static_cast<double>(n);
  const Matrix sig_ss = inv_n * matmul_transa(x_s, x_s);
  double cond = 0.0;
  try {
    const Cholesky chol(sig_ss);
    cond = spectral_norm(sig_ss) * spectral_norm(chol.inverse());
  } catch (const NotPositiveDefinite&) {
    throw IllConditioned(
        "restricted_group_lasso: empirical Gram matrix is singular");
  }
  if (cond > 1e12) {
    throw IllConditioned(
        "restricted_group_lasso: condition estimate " + std::to_string(cond));
  }

  BcdState st = make_state(x_s, y);
  Matrix b(s, st.k);
  if (init != nullptr) {
    if (init->rows() != s || init->cols() != st.k) {
      throw ShapeMismatch("restricted_group_lasso: bad init shape");
    }
    b = *init;
    st.residual = y - matmul(x_s, b);
  }
  const BcdOutcome out = bcd_solve(st, b, cfg, x_s, y, nullptr);
  if (!out.hit_tol) {
    Solution best;
    best.b_hat = b;
    best.iterations = out.sweeps;
    best.objective = group_objective(x_s, y, b, cfg.lambda);
    best.support = support(b, cfg.zero_tol);
    throw NotConverged("restricted_group_lasso: sweep budget exhausted",
                       std::move(best));
  }
  return b;
}

SupportSet support(const Matrix& b, double zero_tol) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < b.rows(); ++i) {
    if (b.row_norm2(i) > zero_tol) idx.push_back(i);
  }
  return SupportSet(std::move(idx), b.rows());
}

KktResult kkt_residual(const Matrix& x, const Matrix& y, const Matrix& b_hat,
                       double lambda) {
  if (lambda <= 0.0) {
    throw std::invalid_argument("kkt_residual: lambda must be > 0");
  }
  const std::size_t p = b_hat.rows(), k = b_hat.cols();
  const double inv_n = 1.0 / static_cast<double>(x.rows());
  const Matrix g = inv_n * matmul_transa(x, matmul(x, b_hat) - y);

  KktResult res;
  res.z_hat = Matrix(p, k);
  for (std::size_t i = 0; i < p; ++i) {
    const double bn = b_hat.row_norm2(i);
    const double* gi = g.row_ptr(i);
    double* zi = res.z_hat.row_ptr(i);
    if (bn > 0.0) {
      // Stationarity on the support: G_i + lambda * zeta(beta_i) = 0.
      double acc = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        zi[j] = b_hat(i, j) / bn;
        const double v = gi[j] + lambda * zi[j];
        acc += v * v;
      }
      res.max_violation = std::max(res.max_violation, std::sqrt(acc));
    } else {
      // Dual feasibility off the support: ||G_j|| / lambda <= 1.
      double acc = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        zi[j] = -gi[j] / lambda;
        acc += zi[j] * zi[j];
      }
      const double excess = std::max(0.0, std::sqrt(acc) - 1.0);
      res.max_violation = std::max(res.max_violation, excess);
      res.dual_feasibility_gap = std::max(res.dual_feasibility_gap, excess);
    }
  }
  return res;
}

SupportSet lasso_union_rows(const Matrix& x, const Matrix& y,
                            const SolverConfig& cfg) {
  std::vector<bool> in_union(x.cols(), false);
  for (std::size_t col = 0; col < y.cols(); ++col) {
    Matrix yk(y.rows(), 1);
    for (std::size_t a = 0; a < y.rows(); ++a) yk(a, 0) = y(a, col);
    const Solution sol = group_lasso(x, yk, cfg);
    for (std::size_t i : sol.support.indices()) in_union[i] = true;
  }
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < in_union.size(); ++i) {
    if (in_union[i]) idx.push_back(i);
  }
  return SupportSet(std::move(idx), x.cols());
}

}  // namespace gl_lab
