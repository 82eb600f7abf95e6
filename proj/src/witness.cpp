#include "gl_lab/witness.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gl_lab/theory.hpp"

namespace gl_lab {

namespace {

Matrix select_columns(const Matrix& x, const std::vector<std::size_t>& cols) {
  Matrix out(x.rows(), cols.size());
  for (std::size_t a = 0; a < x.rows(); ++a) {
    const double* xa = x.row_ptr(a);
    double* oa = out.row_ptr(a);
    for (std::size_t j = 0; j < cols.size(); ++j) oa[j] = xa[cols[j]];
  }
  return out;
}

Matrix select_rows(const Matrix& b, const std::vector<std::size_t>& rows) {
  Matrix out(rows.size(), b.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) = b(rows[i], j);
  }
  return out;
}

}  // namespace

WitnessReport construct_witness(const Matrix& x, const Matrix& w,
                                const Matrix& bstar, const SupportSet& s,
                                double lambda, const SolverConfig& cfg) {
  if (lambda <= 0.0) {
    throw std::invalid_argument("construct_witness: lambda must be > 0");
  }
  const std::size_t n = x.rows();
  if (s.size() >= n) {
    throw std::invalid_argument("construct_witness: requires s < n");
  }
  const Matrix bstar_s = select_rows(bstar, s.indices());
  for (std::size_t i = 0; i < bstar_s.rows(); ++i) {
    if (bstar_s.row_norm2(i) == 0.0) {
      throw ZeroRow("construct_witness: B*_S has a zero row", i);
    }
  }

  const Matrix x_s = select_columns(x, s.indices());
  const Matrix y = matmul(x_s, bstar_s) + w;

  SolverConfig rcfg = cfg;
  rcfg.lambda = lambda;
  WitnessReport rep;
  rep.b_hat_s = restricted_group_lasso(x_s, y, rcfg);
  rep.u_s = rep.b_hat_s - bstar_s;

  const double inv_n = 1.0 / static_cast<double>(n);
  const Matrix sig_ss = inv_n * matmul_transa(x_s, x_s);
  const Cholesky chol(sig_ss);
  const Matrix xtw = inv_n * matmul_transa(x_s, w);

  // Dual from stationarity: lambda Z = (1/n) X_S^T W - Sigma_SS U.
  rep.z_hat_s = (1.0 / lambda) * (xtw - matmul(sig_ss, rep.u_s));

  // V_j = X_j^T [ (Pi_S - I) W / n - lambda X_S (Sigma_SS)^{-1} Z / n ];
  // Pi_S applied through the Cholesky factor keeps memory at O(n s).
  const Matrix siginv_z = chol.solve(rep.z_hat_s);
  const Matrix proj_w = matmul(x_s, chol.solve(xtw));  // Pi_S W
  Matrix a = inv_n * (proj_w - w) - (lambda * inv_n) * matmul(x_s, siginv_z);
  rep.v_sc = matmul_transa(select_columns(x, s.complement()), a);

  const double bstar_min = bmin(bstar_s);
  rep.event_u = block_norm(rep.u_s, Ord::inf, Ord::two) <= 0.5 * bstar_min;
  const double v_norm = block_norm(rep.v_sc, Ord::inf, Ord::two);
  rep.event_v = v_norm < lambda;
  rep.strict_dual_feasibility_margin = lambda - v_norm;

  rep.m_n_spectral = m_matrix(x_s, w, rep.z_hat_s, lambda).spectral;

  const ZetaPerturbationResult zp =
      zeta_perturbation_check(rep.z_hat_s, bstar_s, rep.u_s);
  rep.zeta_bound_ok = !zp.applicable || zp.ok;

  bool no_zero_row = true;
  for (std::size_t i = 0; i < rep.b_hat_s.rows(); ++i) {
    if (rep.b_hat_s.row_norm2(i) == 0.0) no_zero_row = false;
  }
  if (no_zero_row) {
    rep.zeta_discrepancy =
        block_norm(rep.z_hat_s - zeta(rep.b_hat_s), Ord::inf, Ord::two);
  } else {
    rep.zeta_discrepancy = std::numeric_limits<double>::quiet_NaN();
  }
  return rep;
}

MMatrixResult m_matrix(const Matrix& x_s, const Matrix& w,
                       const Matrix& z_hat_s, double lambda, double psi,
                       double delta) {
  const std::size_t n = x_s.rows();
  if (w.rows() != n || z_hat_s.rows() != x_s.cols() ||
      z_hat_s.cols() != w.cols()) {
    throw ShapeMismatch("m_matrix: incompatible shapes");
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  const Matrix sig_ss = inv_n * matmul_transa(x_s, x_s);
  Cholesky chol(sig_ss);

  // (lambda^2 / n) Z^T (Sigma_SS)^{-1} Z + (1/n^2) W^T (I - Pi_S) W.
  // The second term is the conditional noise covariance and is PSD; with
  // the projector subtracted the other way the matrix could be indefinite.
  const Matrix quad = matmul_transa(z_hat_s, chol.solve(z_hat_s));
  const Matrix proj_w = matmul(x_s, chol.solve(inv_n * matmul_transa(x_s, w)));
  const Matrix noise = matmul_transa(w, w - proj_w);

  MMatrixResult out;
  out.m_n = (lambda * lambda * inv_n) * quad + (inv_n * inv_n) * noise;
  out.spectral = spectral_norm(out.m_n);
  if (std::isfinite(psi)) {
    out.bound = lambda * lambda * psi * (1.0 + delta) * inv_n;
  }
  return out;
}

ZetaPerturbationResult zeta_perturbation_check(const Matrix& z_hat_s,
                                               const Matrix& bstar_s,
                                               const Matrix& u_s) {
  const std::size_t s = bstar_s.rows(), k = bstar_s.cols();
  if (z_hat_s.rows() != s || u_s.rows() != s || z_hat_s.cols() != k ||
      u_s.cols() != k) {
    throw ShapeMismatch("zeta_perturbation_check: incompatible shapes");
  }
  Matrix delta(s, k);
  double max_delta_row = 0.0;
  for (std::size_t i = 0; i < s; ++i) {
    const double bn = bstar_s.row_norm2(i);
    if (bn == 0.0) {
      throw ZeroRow("zeta_perturbation_check: B*_S has a zero row", i);
    }
    for (std::size_t j = 0; j < k; ++j) delta(i, j) = u_s(i, j) / bn;
    max_delta_row = std::max(max_delta_row, delta.row_norm2(i));
  }

  ZetaPerturbationResult out;
  out.rhs = 4.0 * block_norm(delta, Ord::inf, Ord::two);
  out.lhs = block_norm(z_hat_s - zeta(bstar_s), Ord::inf, Ord::two);
  out.applicable = max_delta_row <= 0.5;
  out.ok = out.applicable && out.lhs <= out.rhs + 1e-12;
  return out;
}

}  // namespace gl_lab
