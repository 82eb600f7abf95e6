#pragma once

#include <cstddef>
#include <limits>

#include "gl_lab/matrix.hpp"
#include "gl_lab/solver.hpp"
#include "gl_lab/support_set.hpp"

namespace gl_lab {

/// Primal-dual witness construction: the restricted solve, the dual
/// recovered from stationarity, the on-support perturbation U_S, the
/// off-support dual correlations V_Sc, and the success events for exact
/// row selection.
struct WitnessReport {
  Matrix b_hat_s;   // s x K restricted solution
  Matrix z_hat_s;   // s x K dual from the stationarity equation
  Matrix u_s;       // s x K perturbation B_hat_S - B*_S
  Matrix v_sc;      // (p-s) x K off-support dual correlations
  bool event_u = false;  // ||U_S||_{inf,2} <= bmin / 2
  bool event_v = false;  // ||V_Sc||_{inf,2} < lambda (strict)
  double strict_dual_feasibility_margin = 0.0;
  double m_n_spectral = 0.0;
  bool zeta_bound_ok = true;
  // Gap between the stationarity dual and zeta(B_hat_S); meaningful only
  // when the restricted solution has no zero row.
  double zeta_discrepancy = 0.0;
};

/// Builds the witness for a known instance (X, W, B*, S) at the given
/// regularization level. Requires s < n, lambda > 0 and no zero row in
/// B*_S. cfg.lambda is ignored in favor of the explicit argument.
WitnessReport construct_witness(const Matrix& x, const Matrix& w,
                                const Matrix& bstar, const SupportSet& s,
                                double lambda, const SolverConfig& cfg = {});

/// The K x K matrix governing the conditional covariance of the
/// off-support dual rows, its spectral norm, and the theoretical ceiling
/// lambda^2 psi (1 + delta) / n when psi is supplied.
struct MMatrixResult {
  Matrix m_n;
  double spectral = 0.0;
  double bound = std::numeric_limits<double>::quiet_NaN();
};

MMatrixResult m_matrix(const Matrix& x_s, const Matrix& w,
                       const Matrix& z_hat_s, double lambda,
                       double psi = std::numeric_limits<double>::quiet_NaN(),
                       double delta = 0.0);

/// Checks ||Z_hat_S - zeta(B*_S)||_{inf,2} <= 4 ||Delta||_{inf,2} with
/// Delta_i = U_i / ||beta*_i||. Applicable only when every ||Delta_i|| is
/// at most 1/2.
struct ZetaPerturbationResult {
  double lhs = 0.0;
  double rhs = 0.0;
  bool applicable = false;
  bool ok = false;
};

ZetaPerturbationResult zeta_perturbation_check(const Matrix& z_hat_s,
                                               const Matrix& bstar_s,
                                               const Matrix& u_s);

}  // namespace gl_lab
