#pragma once

#include <cstddef>
#include <utility>

#include "gl_lab/matrix.hpp"
#include "gl_lab/support_set.hpp"

namespace gl_lab {

/// Closed-form quantities attached to a coefficient matrix and design
/// covariance: the sparsity-overlap value, its eigenvalue bounds, the
/// rescaled sample size and the minimal row norm.
struct TheoryReport {
  double psi = 0.0;
  double theta = 0.0;
  double psi_lower = 0.0;
  double psi_upper = 0.0;
  double bmin = 0.0;
};

/// Matrix of unit-l2-normalized rows. Throws ZeroRow when a row norm is at
/// or below zero_tol. For a single column this reduces to the sign vector.
Matrix zeta(const Matrix& b_s, double zero_tol = 1e-12);

/// Spectral norm of zeta(B_S)^T (Sigma_SS)^{-1} zeta(B_S); the quantity
/// that scales the sample size needed for exact row selection.
double sparsity_overlap(const Matrix& b_s, const Matrix& sigma_ss);

/// theta = n / (2 psi log(p - s)), natural log. Requires p - s >= 2.
double sample_complexity_theta(std::size_t n, std::size_t p, std::size_t s,
                               double psi);

/// Eigenvalue sandwich (s / (Cmax K), s / Cmin).
std::pair<double, double> psi_bounds(std::size_t s, std::size_t k, double cmin,
                                     double cmax);

/// Group and per-column overlap values for the two-task, two-row design
/// with row angles theta1, theta2 and inverse-covariance correlation rho.
struct TwoTaskPsi {
  double psi_group = 0.0;
  double psi_col1 = 0.0;
  double psi_col2 = 0.0;
  double mu_plus = 0.0;
  double mu_minus = 0.0;
};

TwoTaskPsi psi_two_by_two(double theta1, double theta2, double rho);

/// max_k psi(beta^(k)) * log(p - s_k) where each column is restricted to its
/// own support and Sigma to the matching block. The critical-threshold
/// constant multiplying this quantity is intentionally left out: only
/// ratios against the group complexity matter.
double ordinary_lasso_complexity(const Matrix& b, const Matrix& sigma,
                                 double zero_tol = 1e-12);

/// Minimal l2 row norm.
double bmin(const Matrix& b_s);

}  // namespace gl_lab
