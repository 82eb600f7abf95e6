#include "gl_lab/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "gl_lab/rng.hpp"

namespace gl_lab {

namespace {

void check_shape(bool ok, const char* what) {
  if (!ok) throw ShapeMismatch(what);
}

void check_finite(const std::vector<double>& entries) {
  for (double v : entries) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("matrix entry is not finite");
    }
  }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
  if (rows == 0 || cols == 0) {
    throw std::invalid_argument("matrix dimensions must be positive");
  }
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (rows == 0 || cols == 0) {
    throw std::invalid_argument("matrix dimensions must be positive");
  }
  if (data_.size() != rows * cols) {
    throw std::invalid_argument("entry count does not match rows * cols");
  }
  check_finite(data_);
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows.begin() == rows.end() ? 0 : rows.begin()->size();
  if (rows_ == 0 || cols_ == 0) {
    throw std::invalid_argument("matrix dimensions must be positive");
  }
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) {
      throw std::invalid_argument("ragged initializer for matrix");
    }
    data_.insert(data_.end(), r.begin(), r.end());
  }
  check_finite(data_);
}

Matrix Matrix::identity(std::size_t k) {
  Matrix m(k, k);
  for (std::size_t i = 0; i < k; ++i) m(i, i) = 1.0;
  return m;
}

double Matrix::row_norm2(std::size_t i) const {
  const double* r = row_ptr(i);
  double acc = 0.0;
  for (std::size_t j = 0; j < cols_; ++j) acc += r[j] * r[j];
  return std::sqrt(acc);
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  check_shape(a.rows() == b.rows() && a.cols() == b.cols(),
              "operator+: shape mismatch");
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.data()[i] = a.data()[i] + b.data()[i];
  }
  return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  check_shape(a.rows() == b.rows() && a.cols() == b.cols(),
              "operator-: shape mismatch");
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.data()[i] = a.data()[i] - b.data()[i];
  }
  return out;
}

Matrix operator*(double c, const Matrix& a) {
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = c * a.data()[i];
  return out;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  check_shape(a.cols() == b.rows(), "matmul: inner dimensions differ");
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* oi = out.row_ptr(i);
    const double* ai = a.row_ptr(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = ai[k];
      if (aik == 0.0) continue;
      const double* bk = b.row_ptr(k);
      for (std::size_t j = 0; j < b.cols(); ++j) oi[j] += aik * bk[j];
    }
  }
  return out;
}

Matrix matmul_transa(const Matrix& a, const Matrix& b) {
  check_shape(a.rows() == b.rows(), "matmul_transa: row counts differ");
  Matrix out(a.cols(), b.cols());
  for (std::size_t k = 0; k < a.rows(); ++k) {
    const double* ak = a.row_ptr(k);
    const double* bk = b.row_ptr(k);
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double aki = ak[i];
      if (aki == 0.0) continue;
      double* oi = out.row_ptr(i);
      for (std::size_t j = 0; j < b.cols(); ++j) oi[j] += aki * bk[j];
    }
  }
  return out;
}

Matrix transpose(const Matrix& a) {
  Matrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  }
  return out;
}

double frobenius_norm(const Matrix& a) {
  double acc = 0.0;
  for (double v : a.data()) acc += v * v;
  return std::sqrt(acc);
}

double max_abs(const Matrix& a) {
  double m = 0.0;
  for (double v : a.data()) m = std::max(m, std::abs(v));
  return m;
}

Cholesky::Cholesky(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("cholesky: matrix must be square");
  }
  const std::size_t k = a.rows();
  const double scale = max_abs(a);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      if (std::abs(a(i, j) - a(j, i)) > 1e-12 * std::max(scale, 1e-300)) {
        throw std::invalid_argument("cholesky: matrix is not symmetric");
      }
    }
  }
  double max_diag = 0.0;
  for (std::size_t i = 0; i < k; ++i) max_diag = std::max(max_diag, a(i, i));
  const double pivot_tol = 1e-14 * max_diag;

  l_ = Matrix(k, k);
  for (std::size_t j = 0; j < k; ++j) {
    double d = a(j, j);
    const double* lj = l_.row_ptr(j);
    for (std::size_t t = 0; t < j; ++t) d -= lj[t] * lj[t];
    if (d <= pivot_tol) {
      throw NotPositiveDefinite("cholesky: pivot " + std::to_string(j) +
                                " is not positive");
    }
    const double ljj = std::sqrt(d);
    l_(j, j) = ljj;
    for (std::size_t i = j + 1; i < k; ++i) {
      double v = a(i, j);
      const double* li = l_.row_ptr(i);
      for (std::size_t t = 0; t < j; ++t) v -= li[t] * lj[t];
      l_(i, j) = v / ljj;
    }
  }
}

Matrix Cholesky::solve(const Matrix& b) const {
  const std::size_t k = l_.rows();
  check_shape(b.rows() == k, "cholesky solve: row counts differ");
  Matrix x = b;
  // Forward substitution L z = b.
  for (std::size_t i = 0; i < k; ++i) {
    const double* li = l_.row_ptr(i);
    double* xi = x.row_ptr(i);
    for (std::size_t t = 0; t < i; ++t) {
      const double lit = li[t];
      const double* xt = x.row_ptr(t);
      for (std::size_t j = 0; j < x.cols(); ++j) xi[j] -= lit * xt[j];
    }
    const double inv = 1.0 / li[i];
    for (std::size_t j = 0; j < x.cols(); ++j) xi[j] *= inv;
  }
  // Backward substitution L^T x = z.
  for (std::size_t ii = k; ii-- > 0;) {
    double* xi = x.row_ptr(ii);
    for (std::size_t t = ii + 1; t < k; ++t) {
      const double lti = l_(t, ii);
      const double* xt = x.row_ptr(t);
      for (std::size_t j = 0; j < x.cols(); ++j) xi[j] -= lti * xt[j];
    }
    const double inv = 1.0 / l_(ii, ii);
    for (std::size_t j = 0; j < x.cols(); ++j) xi[j] *= inv;
  }
  return x;
}

Matrix Cholesky::inverse() const { return solve(Matrix::identity(l_.rows())); }

Matrix cholesky(const Matrix& a) { return Cholesky(a).lower(); }

Matrix solve_spd(const Matrix& a, const Matrix& b) {
  return Cholesky(a).solve(b);
}

namespace {

struct PowerRun {
  double eigenvalue = 0.0;
  bool converged = false;
};

// One power-iteration run on the symmetric PSD matrix g, certified by the
// residual bound |lambda_est - lambda_max| <= ||g v - lambda v||.
PowerRun power_iterate(const Matrix& g, std::vector<double> v, double rel_tol,
                       std::size_t max_iter) {
  const std::size_t k = g.rows();
  std::vector<double> w(k);
  PowerRun run;
  double nv = 0.0;
  for (double x : v) nv += x * x;
  nv = std::sqrt(nv);
  if (nv == 0.0) return run;
  for (double& x : v) x /= nv;

  for (std::size_t it = 0; it < max_iter; ++it) {
    for (std::size_t i = 0; i < k; ++i) {
      const double* gi = g.row_ptr(i);
      double acc = 0.0;
      for (std::size_t j = 0; j < k; ++j) acc += gi[j] * v[j];
      w[i] = acc;
    }
    double lambda = 0.0, nw = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      lambda += v[i] * w[i];
      nw += w[i] * w[i];
    }
    nw = std::sqrt(nw);
    run.eigenvalue = std::max(lambda, 0.0);
    if (nw == 0.0) {
      run.eigenvalue = 0.0;
      run.converged = true;
      return run;
    }
    double resid = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const double r = w[i] - lambda * v[i];
      resid += r * r;
    }
    if (std::sqrt(resid) <= rel_tol * std::max(std::abs(lambda), 1e-300)) {
      run.converged = true;
      return run;
    }
    for (std::size_t i = 0; i < k; ++i) v[i] = w[i] / nw;
  }
  return run;
}

}  // namespace

double spectral_norm(const Matrix& a, double rel_tol, std::size_t max_iter) {
  if (a.empty()) throw std::invalid_argument("spectral_norm: empty matrix");
  const Matrix g = matmul_transa(a, a);
  const std::size_t k = g.rows();

  std::vector<double> ones(k, 1.0);
  PowerRun best = power_iterate(g, std::move(ones), rel_tol, max_iter);

  // Seeded restart guards against a start vector orthogonal to the
  // dominant eigenspace.
  const std::uint64_t stream = rng::stream(rng::kTagPowerRestart, k);
  std::vector<double> rnd(k);
  for (std::size_t i = 0; i < k; ++i) {
    rnd[i] = rng::unit_double(rng::word(stream, i)) - 0.5;
  }
  const PowerRun alt = power_iterate(g, std::move(rnd), rel_tol, max_iter);
  if (alt.eigenvalue > best.eigenvalue) best = alt;

  const double sigma = std::sqrt(std::max(best.eigenvalue, 0.0));
  if (!best.converged) {
    throw ConvergenceFailure("spectral_norm: power iteration did not reach" +
                                 std::string(" tolerance; best estimate ") +
                                 std::to_string(sigma),
                             sigma);
  }
  return sigma;
}

namespace {

double row_inner_norm(const Matrix& a, std::size_t i, Ord inner) {
  const double* r = a.row_ptr(i);
  switch (inner) {
    case Ord::one: {
      double acc = 0.0;
      for (std::size_t j = 0; j < a.cols(); ++j) acc += std::abs(r[j]);
      return acc;
    }
    case Ord::two: {
      double acc = 0.0;
      for (std::size_t j = 0; j < a.cols(); ++j) acc += r[j] * r[j];
      return std::sqrt(acc);
    }
    case Ord::inf: {
      double m = 0.0;
      for (std::size_t j = 0; j < a.cols(); ++j) {
        m = std::max(m, std::abs(r[j]));
      }
      return m;
    }
  }
  return 0.0;
}

}  // namespace

double block_norm(const Matrix& a, Ord outer, Ord inner) {
  if (a.empty()) throw std::invalid_argument("block_norm: empty matrix");
  if (outer != Ord::one && outer != Ord::inf) {
    throw UnsupportedOrder("block_norm: outer order must be 1 or inf");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double rn = row_inner_norm(a, i, inner);
    acc = (outer == Ord::one) ? acc + rn : std::max(acc, rn);
  }
  return acc;
}

double linf_operator_norm(const Matrix& a) {
  if (a.empty()) {
    throw std::invalid_argument("linf_operator_norm: empty matrix");
  }
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    m = std::max(m, row_inner_norm(a, i, Ord::one));
  }
  return m;
}

}  // namespace gl_lab
