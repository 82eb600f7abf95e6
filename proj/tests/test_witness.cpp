#include <doctest.h>

#include <cmath>
#include <random>

#include "gl_lab/ensembles.hpp"
#include "gl_lab/experiments.hpp"
#include "gl_lab/theory.hpp"
#include "gl_lab/witness.hpp"
#include "oracles.hpp"

using namespace gl_lab;

namespace {

struct WitnessInstance {
  Matrix x, w, bstar;
  SupportSet s;
};

WitnessInstance draw_instance(std::size_t n, std::size_t p, std::size_t s,
                              double sigma, std::uint64_t seed) {
  EnsembleSpec spec;
  spec.p = p;
  spec.s = s;
  spec.family = Family::identical;
  spec.sigma = sigma;
  WitnessInstance inst;
  const Coefficients coeff = make_coefficients(spec, seed);
  inst.bstar = coeff.b;
  inst.s = coeff.support;
  inst.x = sample_design_standard(n, p, seed);
  inst.w = sample_noise(n, 2, sigma, seed);
  return inst;
}

Matrix columns(const Matrix& x, const std::vector<std::size_t>& idx) {
  Matrix out(x.rows(), idx.size());
  for (std::size_t a = 0; a < x.rows(); ++a) {
    for (std::size_t j = 0; j < idx.size(); ++j) out(a, j) = x(a, idx[j]);
  }
  return out;
}

}  // namespace

TEST_CASE("noiseless witness with vanishing regularization recovers B*") {
  const WitnessInstance inst = draw_instance(60, 16, 4, 0.0, 1);
  const WitnessReport rep =
      construct_witness(inst.x, inst.w, inst.bstar, inst.s, 1e-8);
  CHECK(block_norm(rep.u_s, Ord::inf, Ord::two) <= 1e-6);
  CHECK(rep.event_u);
}

TEST_CASE("stationarity, dual-norm and projector identities") {
  std::mt19937_64 engine(77);
  std::uniform_int_distribution<int> sizes(3, 8);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t s = static_cast<std::size_t>(sizes(engine));
    const std::size_t n = 10 * s;
    const std::size_t p = s + 4;
    EnsembleSpec spec;
    spec.p = p;
    spec.s = s;
    spec.family = Family::custom;
    spec.custom_b_s = oracles::random_coefficients(s, 2, engine);
    const Coefficients coeff = make_coefficients(spec, trial);
    const Matrix x = sample_design_standard(n, p, 2000 + trial);
    const Matrix w = sample_noise(n, 2, 0.1, 2000 + trial);
    const double lambda = 0.05 + 0.1 * (trial % 5);

    const WitnessReport rep =
        construct_witness(x, w, coeff.b, coeff.support, lambda);

    const Matrix x_s = columns(x, coeff.support.indices());
    const double inv_n = 1.0 / static_cast<double>(n);
    const Matrix sig_ss = inv_n * matmul_transa(x_s, x_s);
    const Matrix xtw = inv_n * matmul_transa(x_s, w);

    // Sigma_SS U - (1/n) X_S^T W + lambda Z = 0.
    const Matrix stat =
        matmul(sig_ss, rep.u_s) - xtw + lambda * rep.z_hat_s;
    CHECK(frobenius_norm(stat) <= 1e-9);

    // U_S solves the same equation through the inverse.
    const Matrix u_alt = solve_spd(sig_ss, xtw - lambda * rep.z_hat_s);
    CHECK(frobenius_norm(u_alt - rep.u_s) <= 1e-8);

    // Dual rows sit on the unit sphere wherever the estimate is nonzero.
    for (std::size_t i = 0; i < rep.b_hat_s.rows(); ++i) {
      if (rep.b_hat_s.row_norm2(i) > 0.0) {
        CHECK(rep.z_hat_s.row_norm2(i) == doctest::Approx(1.0).epsilon(1e-9));
      }
    }

    // X_S^T (Pi_S - I) M = 0 for any M.
    const Cholesky chol(sig_ss);
    const Matrix m = oracles::gaussian_matrix(n, 2, engine);
    const Matrix proj_m = matmul(x_s, chol.solve(inv_n * matmul_transa(x_s, m)));
    const Matrix should_vanish = matmul_transa(x_s, proj_m - m);
    CHECK(frobenius_norm(should_vanish) <=
          1e-9 * std::max(1.0, frobenius_norm(matmul_transa(x_s, m))));
  }
}

TEST_CASE("witness events imply full-program recovery") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const std::size_t p = 64, s = 8;
    const std::size_t n = sample_size_for_theta(2.0, s, p);
    const WitnessInstance inst = draw_instance(n, p, s, 0.1, 9000 + seed);
    const double lambda =
        lambda_from_rule(LambdaRule::paper_sim, 0.0, n, p, s);
    const WitnessReport rep =
        construct_witness(inst.x, inst.w, inst.bstar, inst.s, lambda);
    if (!(rep.event_u && rep.event_v)) continue;

    const Matrix y = assemble_observations(inst.x, inst.bstar, inst.w);
    SolverConfig cfg;
    cfg.lambda = lambda;
    const Solution full = group_lasso(inst.x, y, cfg);
    CHECK(full.support == inst.s);
    Matrix embedded(p, 2);
    for (std::size_t i = 0; i < s; ++i) {
      for (std::size_t j = 0; j < 2; ++j) {
        embedded(inst.s[i], j) = rep.b_hat_s(i, j);
      }
    }
    CHECK(frobenius_norm(full.b_hat - embedded) <= 1e-7);
  }
}

TEST_CASE("m matrix collapses to the overlap value for clean inputs") {
  // Scaled Hadamard columns: (1/n) X_S^T X_S = I.
  const std::size_t n = 4;
  Matrix x_s{{1, 1}, {1, -1}, {1, 1}, {1, -1}};
  const Matrix zeros(n, 2);
  const double c = 1.0 / std::sqrt(2.0);
  const Matrix z{{c, c}, {c, c}};
  const double lambda = 0.3;
  const double psi = sparsity_overlap(z, Matrix::identity(2));

  const MMatrixResult res = m_matrix(x_s, zeros, z, lambda, psi, 0.0);
  CHECK(res.spectral ==
        doctest::Approx(lambda * lambda * psi / static_cast<double>(n))
            .epsilon(1e-10));
  CHECK(res.bound ==
        doctest::Approx(lambda * lambda * psi / static_cast<double>(n))
            .epsilon(1e-12));
}

TEST_CASE("m matrix is scalar and nonnegative for a single task") {
  std::mt19937_64 engine(88);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix x_s = oracles::gaussian_matrix(20, 3, engine);
    const Matrix w = oracles::gaussian_matrix(20, 1, engine);
    Matrix sign_vec(3, 1);
    for (std::size_t i = 0; i < 3; ++i) {
      sign_vec(i, 0) = (trial + i) % 2 == 0 ? 1.0 : -1.0;
    }
    const MMatrixResult res = m_matrix(x_s, w, sign_vec, 0.2);
    CHECK(res.m_n.rows() == 1);
    CHECK(res.m_n(0, 0) >= -1e-12);
    CHECK(res.spectral >= 0.0);
  }
}

TEST_CASE("m matrix concentration event under theorem conditions") {
  const std::size_t p = 64, s = 8;
  const std::size_t n = sample_size_for_theta(2.0, s, p);
  const double lambda = lambda_from_rule(LambdaRule::paper_sim, 0.0, n, p, s);
  EnsembleSpec spec;
  spec.p = p;
  spec.s = s;
  spec.family = Family::identical;
  const double psi = 8.0;

  int holds = 0;
  const int trials = 100;
  for (int trial = 0; trial < trials; ++trial) {
    const Coefficients coeff = make_coefficients(spec, trial);
    const Matrix x = sample_design_standard(n, p, 5000 + trial);
    const Matrix w = sample_noise(n, 2, 0.1, 5000 + trial);
    const WitnessReport rep =
        construct_witness(x, w, coeff.b, coeff.support, lambda);
    const double bound = lambda * lambda * psi * 1.5 / static_cast<double>(n);
    if (rep.m_n_spectral <= bound) ++holds;
  }
  CHECK(holds >= 95);
}

TEST_CASE("zeta perturbation bound examples") {
  // Unperturbed case.
  const Matrix b{{1, 0}, {0, 2}};
  const ZetaPerturbationResult clean =
      zeta_perturbation_check(zeta(b), b, Matrix(2, 2));
  CHECK(clean.applicable);
  CHECK(clean.lhs == doctest::Approx(0.0));
  CHECK(clean.ok);

  // beta* = (1, 0) perturbed to (1, 0.2); frozen from direct evaluation.
  const Matrix bstar{{1, 0}};
  const Matrix u{{0, 0.2}};
  const Matrix z_hat = zeta(Matrix{{1, 0.2}});
  const ZetaPerturbationResult res = zeta_perturbation_check(z_hat, bstar, u);
  CHECK(res.applicable);
  CHECK(res.lhs == doctest::Approx(0.19707523593328433).epsilon(1e-12));
  CHECK(res.rhs == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(res.ok);

  // Too-large perturbations are flagged not applicable.
  const ZetaPerturbationResult na =
      zeta_perturbation_check(z_hat, bstar, Matrix{{0, 0.9}});
  CHECK_FALSE(na.applicable);
}

TEST_CASE("zeta perturbation bound holds over random draws") {
  std::mt19937_64 engine(99);
  std::uniform_real_distribution<double> radius(0.0, 0.5);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t s = 1 + trial % 6, k = 1 + trial % 3;
    const Matrix bstar = oracles::random_coefficients(s, k, engine);
    Matrix u(s, k);
    for (std::size_t i = 0; i < s; ++i) {
      Matrix dir = oracles::gaussian_matrix(1, k, engine);
      const double scale =
          radius(engine) * bstar.row_norm2(i) / dir.row_norm2(0);
      for (std::size_t j = 0; j < k; ++j) u(i, j) = scale * dir(0, j);
    }
    const Matrix z_hat = zeta(bstar + u);
    const ZetaPerturbationResult res =
        zeta_perturbation_check(z_hat, bstar, u);
    REQUIRE(res.applicable);
    CHECK(res.ok);
  }
}
