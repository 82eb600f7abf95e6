#include "gl_lab/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "gl_lab/rng.hpp"

namespace gl_lab {

namespace {

constexpr double kHalfSqrt2 = 0.70710678118654752440;

bool is_identity(const Matrix& m) {
  if (m.rows() != m.cols()) return false;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (m(i, j) != (i == j ? 1.0 : 0.0)) return false;
    }
  }
  return true;
}

Matrix family_block(const EnsembleSpec& spec) {
  const std::size_t s = spec.s;
  Matrix b(s, spec.k);
  switch (spec.family) {
    case Family::identical:
      for (std::size_t i = 0; i < s; ++i) {
        b(i, 0) = kHalfSqrt2;
        b(i, 1) = kHalfSqrt2;
      }
      break;
    case Family::orthonormal:
      // Second column repeats (+, -) so the two columns are orthogonal.
      for (std::size_t i = 0; i < s; ++i) {
        b(i, 0) = kHalfSqrt2;
        b(i, 1) = (i % 2 == 0) ? kHalfSqrt2 : -kHalfSqrt2;
      }
      break;
    case Family::intermediate:
      // (+, +, +, -) pattern puts the columns at a 60 degree angle.
      for (std::size_t i = 0; i < s; ++i) {
        b(i, 0) = kHalfSqrt2;
        b(i, 1) = (i % 4 == 3) ? -kHalfSqrt2 : kHalfSqrt2;
      }
      break;
    case Family::b1_alpha: {
      const double c2 = std::cos(0.78539816339744830962 + spec.alpha);
      const double s2 = std::sin(0.78539816339744830962 + spec.alpha);
      for (std::size_t i = 0; i < s; ++i) {
        if (i % 2 == 0) {
          b(i, 0) = kHalfSqrt2;
          b(i, 1) = kHalfSqrt2;
        } else {
          b(i, 0) = c2;
          b(i, 1) = s2;
        }
      }
      break;
    }
    case Family::custom:
      b = spec.custom_b_s;
      break;
  }
  return b;
}

}  // namespace

void EnsembleSpec::validate() const {
  if (p == 0 || s == 0 || k == 0) {
    throw std::invalid_argument("ensemble: p, s, K must be positive");
  }
  if (s > p) throw std::invalid_argument("ensemble: s must not exceed p");
  if (sigma < 0.0) {
    throw std::invalid_argument("ensemble: sigma must be nonnegative");
  }
  switch (family) {
    case Family::identical:
    case Family::orthonormal:
    case Family::intermediate:
      if (k != 2) {
        throw BadFamilyShape("ensemble: named families require K = 2");
      }
      if (s % 4 != 0) {
        throw BadFamilyShape(
            "ensemble: identical/orthonormal/intermediate require s "
            "divisible by 4");
      }
      break;
    case Family::b1_alpha:
      if (k != 2) {
        throw BadFamilyShape("ensemble: b1_alpha requires K = 2");
      }
      if (s % 2 != 0) {
        throw BadFamilyShape("ensemble: b1_alpha requires even s");
      }
      break;
    case Family::custom:
      if (custom_b_s.rows() != s || custom_b_s.cols() != k) {
        throw BadFamilyShape("ensemble: custom block must be s x K");
      }
      for (std::size_t i = 0; i < s; ++i) {
        if (custom_b_s.row_norm2(i) == 0.0) {
          throw BadFamilyShape("ensemble: custom block has a zero row");
        }
      }
      break;
  }
  if (!covariance.empty() &&
      (covariance.rows() != p || covariance.cols() != p)) {
    throw std::invalid_argument("ensemble: covariance must be p x p");
  }
}

Coefficients make_coefficients(const EnsembleSpec& spec, std::uint64_t seed) {
  spec.validate();
  const Matrix block = family_block(spec);

  std::vector<std::size_t> rows;
  if (spec.placement == SupportPlacement::first_s) {
    rows.resize(spec.s);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
  } else {
    // Partial Fisher-Yates over 0..p-1 driven by the support stream.
    std::vector<std::size_t> pool(spec.p);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    const std::uint64_t stream = rng::stream(seed, rng::kTagSupport);
    for (std::size_t i = 0; i < spec.s; ++i) {
      const std::uint64_t j =
          i + rng::bounded(rng::word(stream, i), spec.p - i);
      std::swap(pool[i], pool[j]);
    }
    rows.assign(pool.begin(), pool.begin() + spec.s);
    std::sort(rows.begin(), rows.end());
  }

  Coefficients out{Matrix(spec.p, spec.k), SupportSet(rows, spec.p)};
  for (std::size_t i = 0; i < spec.s; ++i) {
    for (std::size_t j = 0; j < spec.k; ++j) {
      out.b(rows[i], j) = block(i, j);
    }
  }
  return out;
}

Matrix sample_design_standard(std::size_t n, std::size_t p,
                              std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("sample_design: n must be >= 1");
  Matrix x(n, p);
  rng::GaussianStream g(seed, rng::kTagDesign);
  for (double& v : x.data()) v = g.next();
  return x;
}

Matrix sample_design(std::size_t n, const Matrix& sigma, std::uint64_t seed) {
  const std::size_t p = sigma.rows();
  if (is_identity(sigma)) return sample_design_standard(n, p, seed);
  const Matrix l = cholesky(sigma);
  const Matrix g = sample_design_standard(n, p, seed);
  // X = G L^T, so each row is N(0, Sigma).
  Matrix x(n, p);
  for (std::size_t i = 0; i < n; ++i) {
    const double* gi = g.row_ptr(i);
    double* xi = x.row_ptr(i);
    for (std::size_t j = 0; j < p; ++j) {
      const double* lj = l.row_ptr(j);
      double acc = 0.0;
      for (std::size_t t = 0; t <= j; ++t) acc += gi[t] * lj[t];
      xi[j] = acc;
    }
  }
  return x;
}

Matrix sample_noise(std::size_t n, std::size_t k, double sigma,
                    std::uint64_t seed) {
  Matrix w(n, k);
  if (sigma == 0.0) return w;
  rng::GaussianStream g(seed, rng::kTagNoise);
  for (double& v : w.data()) v = sigma * g.next();
  return w;
}

Matrix assemble_observations(const Matrix& x, const Matrix& bstar,
                             const Matrix& w) {
  if (x.cols() != bstar.rows() || w.rows() != x.rows() ||
      w.cols() != bstar.cols()) {
    throw ShapeMismatch("assemble_observations: incompatible shapes");
  }
  return matmul(x, bstar) + w;
}

AssumptionReport check_assumptions(const Matrix& sigma, const SupportSet& s) {
  const std::size_t p = sigma.rows();
  if (sigma.cols() != p) {
    throw std::invalid_argument("check_assumptions: Sigma must be square");
  }
  if (s.empty() || s.size() >= p || s.ambient() != p) {
    throw std::invalid_argument(
        "check_assumptions: support must be nonempty and proper");
  }

  const std::size_t ns = s.size();
  Matrix sig_ss(ns, ns);
  for (std::size_t a = 0; a < ns; ++a) {
    for (std::size_t b = 0; b < ns; ++b) sig_ss(a, b) = sigma(s[a], s[b]);
  }
  const Cholesky chol(sig_ss);
  const Matrix inv = chol.inverse();

  AssumptionReport rep;
  rep.cmax = spectral_norm(sig_ss);
  rep.cmin = 1.0 / spectral_norm(inv);
  rep.dmax = linf_operator_norm(inv);

  // Sigma_{ScS} (Sigma_SS)^{-1} has l_inf operator norm equal to the max
  // column abs sum of (Sigma_SS)^{-1} Sigma_{SSc}, by symmetry of Sigma.
  const std::vector<std::size_t> sc = s.complement();
  Matrix sig_ssc(ns, sc.size());
  for (std::size_t a = 0; a < ns; ++a) {
    for (std::size_t b = 0; b < sc.size(); ++b) {
      sig_ssc(a, b) = sigma(s[a], sc[b]);
    }
  }
  const Matrix m = chol.solve(sig_ssc);
  double worst = 0.0;
  for (std::size_t b = 0; b < m.cols(); ++b) {
    double acc = 0.0;
    for (std::size_t a = 0; a < m.rows(); ++a) acc += std::abs(m(a, b));
    worst = std::max(worst, acc);
  }
  rep.incoherence_gamma = 1.0 - worst;

  rep.a1_ok = rep.cmin > 0.0 && std::isfinite(rep.cmax);
  rep.a2_ok = rep.incoherence_gamma > 0.0;
  rep.a3_ok = std::isfinite(rep.dmax);
  return rep;
}

Matrix make_toeplitz(std::size_t p, double rho) {
  Matrix m(p, p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      m(i, j) = std::pow(rho, std::abs(static_cast<double>(i) -
                                       static_cast<double>(j)));
    }
  }
  return m;
}

}  // namespace gl_lab
