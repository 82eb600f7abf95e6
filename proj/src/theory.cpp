#include "gl_lab/theory.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace gl_lab {

namespace {

// Numeric cutoff for the "exactly zero" trigonometric values in the
// two-by-two formulas; sin(pi) evaluates to ~1.2e-16, not 0.
constexpr double kTrigZeroTol = 1e-12;

double sgn(double x) {
  if (x > kTrigZeroTol) return 1.0;
  if (x < -kTrigZeroTol) return -1.0;
  return 0.0;
}

double ind(double x) { return std::abs(x) > kTrigZeroTol ? 1.0 : 0.0; }

}  // namespace

Matrix zeta(const Matrix& b_s, double zero_tol) {
  Matrix z = b_s;
  for (std::size_t i = 0; i < z.rows(); ++i) {
    const double norm = z.row_norm2(i);
    if (norm <= zero_tol) {
      throw ZeroRow("zeta: row " + std::to_string(i) + " has zero norm", i);
    }
    double* r = z.row_ptr(i);
    for (std::size_t j = 0; j < z.cols(); ++j) r[j] /= norm;
  }
  return z;
}

double sparsity_overlap(const Matrix& b_s, const Matrix& sigma_ss) {
  const Matrix z = zeta(b_s);
  const Matrix m = matmul_transa(z, solve_spd(sigma_ss, z));
  return spectral_norm(m);
}

double sample_complexity_theta(std::size_t n, std::size_t p, std::size_t s,
                               double psi) {
  if (s < 1 || p <= s || p - s < 2) {
    throw DegenerateLogArgument(
        "sample_complexity_theta: requires p - s >= 2");
  }
  if (psi <= 0.0) {
    throw std::invalid_argument("sample_complexity_theta: psi must be > 0");
  }
  return static_cast<double>(n) /
         (2.0 * psi * std::log(static_cast<double>(p - s)));
}

std::pair<double, double> psi_bounds(std::size_t s, std::size_t k, double cmin,
                                     double cmax) {
  if (s == 0 || k == 0 || cmin <= 0.0 || cmax <= 0.0 || cmin > cmax) {
    throw std::invalid_argument("psi_bounds: invalid arguments");
  }
  const double sd = static_cast<double>(s);
  return {sd / (cmax * static_cast<double>(k)), sd / cmin};
}

TwoTaskPsi psi_two_by_two(double theta1, double theta2, double rho) {
  if (!(std::abs(rho) < 1.0)) {
    throw std::invalid_argument("psi_two_by_two: |rho| must be < 1");
  }
  TwoTaskPsi out;
  const double c = std::cos(theta1 - theta2);
  out.mu_plus = (1.0 + rho) * (1.0 + c);
  out.mu_minus = (1.0 - rho) * (1.0 - c);
  out.psi_group = std::max(out.mu_plus, out.mu_minus);

  const double c1 = std::cos(theta1), c2 = std::cos(theta2);
  const double s1 = std::sin(theta1), s2 = std::sin(theta2);
  out.psi_col1 = ind(c1) + ind(c2) + 2.0 * rho * sgn(c1) * sgn(c2);
  out.psi_col2 = ind(s1) + ind(s2) + 2.0 * rho * sgn(s1) * sgn(s2);
  return out;
}

double ordinary_lasso_complexity(const Matrix& b, const Matrix& sigma,
                                 double zero_tol) {
  const std::size_t p = b.rows();
  if (sigma.rows() != p || sigma.cols() != p) {
    throw ShapeMismatch("ordinary_lasso_complexity: Sigma must be p x p");
  }
  double best = 0.0;
  for (std::size_t k = 0; k < b.cols(); ++k) {
    std::vector<std::size_t> sk;
    for (std::size_t i = 0; i < p; ++i) {
      if (std::abs(b(i, k)) > zero_tol) sk.push_back(i);
    }
    if (sk.empty()) {
      throw EmptyColumnSupport(
          "ordinary_lasso_complexity: column " + std::to_string(k) +
              " has empty support",
          k);
    }
    if (p - sk.size() < 2) {
      throw DegenerateLogArgument(
          "ordinary_lasso_complexity: requires p - s_k >= 2");
    }
    Matrix col(sk.size(), 1);
    Matrix sig_kk(sk.size(), sk.size());
    for (std::size_t a = 0; a < sk.size(); ++a) {
      col(a, 0) = b(sk[a], k);
      for (std::size_t bcol = 0; bcol < sk.size(); ++bcol) {
        sig_kk(a, bcol) = sigma(sk[a], sk[bcol]);
      }
    }
    const double psi_k = sparsity_overlap(col, sig_kk);
    best = std::max(
        best, psi_k * std::log(static_cast<double>(p - sk.size())));
  }
  return best;
}

double bmin(const Matrix& b_s) {
  double m = b_s.row_norm2(0);
  for (std::size_t i = 1; i < b_s.rows(); ++i) {
    m = std::min(m, b_s.row_norm2(i));
  }
  return m;
}

}  // namespace gl_lab
