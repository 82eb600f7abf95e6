#pragma once

#include <cstddef>
#include <vector>

#include "gl_lab/matrix.hpp"
#include "gl_lab/support_set.hpp"

namespace gl_lab {

struct SolverConfig {
  std::size_t max_iter = 50000;  // full or active-set sweeps
  double tol = 1e-9;             // max block l2 change per sweep
  double zero_tol = 1e-10;       // row-norm threshold for support extraction
  double lambda = 0.0;
};

struct Solution {
  Matrix b_hat;
  std::size_t iterations = 0;
  bool converged = false;
  double objective = 0.0;
  double kkt_max_violation = 0.0;
  SupportSet support;
};

/// Thrown when the sweep budget runs out; carries the best iterate.
struct NotConverged : Error {
  NotConverged(const std::string& what, Solution best_solution)
      : Error(what), best(std::move(best_solution)) {}
  Solution best;
};

struct KktResult {
  double max_violation = 0.0;
  // Off-support dual infeasibility: max over zero rows of (||z_j|| - 1)+.
  double dual_feasibility_gap = 0.0;
  Matrix z_hat;
};

/// (1/2n) ||Y - X B||_F^2 + lambda ||B||_{1,2}.
double group_objective(const Matrix& x, const Matrix& y, const Matrix& b,
                       double lambda);

/// Solves the l1/l2 block-regularized least-squares program by cyclic block
/// coordinate descent with blockwise soft-thresholding, starting from B = 0.
/// Reports converged only when the sweep tolerance was met and the KKT
/// residual is at most 1e-7. Pass objective_trace to record the objective
/// after every sweep.
Solution group_lasso(const Matrix& x, const Matrix& y, const SolverConfig& cfg,
                     std::vector<double>* objective_trace = nullptr);

/// Solves the program restricted to the given columns; requires s < n and a
/// numerically invertible Gram matrix (condition estimate <= 1e12).
/// An optional init overrides the zero start.
Matrix restricted_group_lasso(const Matrix& x_s, const Matrix& y,
                              const SolverConfig& cfg,
                              const Matrix* init = nullptr);

/// Rows with l2 norm above zero_tol.
SupportSet support(const Matrix& b, double zero_tol);

/// Stationarity and dual-feasibility residuals of a candidate solution.
/// Requires lambda > 0.
KktResult kkt_residual(const Matrix& x, const Matrix& y, const Matrix& b_hat,
                       double lambda);

/// Per-column Lasso (K = 1 program on each column of Y) followed by the
/// union of the estimated supports.
SupportSet lasso_union_rows(const Matrix& x, const Matrix& y,
                            const SolverConfig& cfg);

}  // namespace gl_lab
