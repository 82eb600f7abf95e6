#pragma once

#include <cstddef>
#include <cstdint>

#include "gl_lab/matrix.hpp"
#include "gl_lab/support_set.hpp"

namespace gl_lab {

/// Coefficient families. The three named families build both columns from
/// +-1/sqrt(2) entries; b1_alpha interpolates between identical (alpha = 0)
/// and orthonormal (alpha = pi/2) regressions by the angle between rows.
enum class Family { identical, orthonormal, intermediate, b1_alpha, custom };

enum class SupportPlacement { first_s, random };

/// Recipe for one random multivariate-regression ensemble.
struct EnsembleSpec {
  std::size_t p = 0;
  std::size_t s = 0;
  std::size_t k = 2;
  double sigma = 0.1;
  Family family = Family::identical;
  double alpha = 0.0;     // b1_alpha only, radians
  Matrix custom_b_s;      // custom only, s x k
  Matrix covariance;      // empty means identity
  SupportPlacement placement = SupportPlacement::first_s;

  bool identity_covariance() const { return covariance.empty(); }
  /// Throws BadFamilyShape / invalid_argument on inconsistent fields.
  void validate() const;
};

struct Coefficients {
  Matrix b;            // p x k, exactly zero off the support
  SupportSet support;  // declared row support
};

/// Builds B* for the spec; the seed is consumed only by random support
/// placement so that identical (spec, seed) pairs reproduce byte-for-byte.
Coefficients make_coefficients(const EnsembleSpec& spec,
                               std::uint64_t seed = 0);

/// n rows drawn i.i.d. from N(0, Sigma), deterministically from the seed.
Matrix sample_design(std::size_t n, const Matrix& sigma, std::uint64_t seed);

/// Identity-covariance fast path; bitwise identical to sample_design with
/// an explicit identity matrix.
Matrix sample_design_standard(std::size_t n, std::size_t p,
                              std::uint64_t seed);

/// n x k noise with i.i.d. N(0, sigma^2) entries.
Matrix sample_noise(std::size_t n, std::size_t k, double sigma,
                    std::uint64_t seed);

/// Y = X B* + W.
Matrix assemble_observations(const Matrix& x, const Matrix& bstar,
                             const Matrix& w);

/// Measured values behind the eigenspectrum, mutual-incoherence and
/// self-incoherence assumptions for a covariance and support.
struct AssumptionReport {
  double cmin = 0.0;
  double cmax = 0.0;
  double incoherence_gamma = 0.0;
  double dmax = 0.0;
  bool a1_ok = false;
  bool a2_ok = false;
  bool a3_ok = false;
};

AssumptionReport check_assumptions(const Matrix& sigma, const SupportSet& s);

/// Toeplitz covariance with entries rho^|i-j|.
Matrix make_toeplitz(std::size_t p, double rho);

}  // namespace gl_lab
