#include <doctest.h>

#include <cmath>
#include <random>

#include "gl_lab/ensembles.hpp"
#include "gl_lab/theory.hpp"
#include "oracles.hpp"

using namespace gl_lab;

namespace {

Matrix family_block(Family family, std::size_t s, double alpha = 0.0) {
  EnsembleSpec spec;
  spec.p = s;
  spec.s = s;
  spec.family = family;
  spec.alpha = alpha;
  return make_coefficients(spec).b;
}

}  // namespace

TEST_CASE("zeta normalizes rows and reduces to signs for one column") {
  const Matrix z = zeta(Matrix{{3, 4}});
  CHECK(z(0, 0) == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(z(0, 1) == doctest::Approx(0.8).epsilon(1e-14));

  CHECK(zeta(Matrix{{1, 0}}) == Matrix{{1, 0}});

  const Matrix signs = zeta(Matrix{{-2}, {5}});
  CHECK(signs(0, 0) == -1.0);
  CHECK(signs(1, 0) == 1.0);

  CHECK_THROWS_AS(zeta(Matrix{{1, 1}, {0, 0}}), ZeroRow);
  try {
    zeta(Matrix{{1, 1}, {0, 0}});
  } catch (const ZeroRow& e) {
    CHECK(e.row == 1);
  }
}

TEST_CASE("zeta output rows are unit and parallel to the input") {
  std::mt19937_64 engine(5);
  const Matrix b = oracles::random_coefficients(6, 3, engine);
  const Matrix z = zeta(b);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(z.row_norm2(i) == doctest::Approx(1.0).epsilon(1e-12));
    // Cross products vanish pairwise for parallel vectors.
    for (std::size_t a = 0; a < 3; ++a) {
      for (std::size_t c = a + 1; c < 3; ++c) {
        CHECK(b(i, a) * z(i, c) - b(i, c) * z(i, a) ==
              doctest::Approx(0.0).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("sparsity overlap of the paper families at s = 4") {
  const Matrix identical(4, 2, std::vector<double>(8, 1.0 / std::sqrt(2.0)));
  CHECK(sparsity_overlap(identical, Matrix::identity(4)) ==
        doctest::Approx(4.0).epsilon(1e-10));

  const Matrix ortho = family_block(Family::orthonormal, 4);
  CHECK(sparsity_overlap(ortho, Matrix::identity(4)) ==
        doctest::Approx(2.0).epsilon(1e-10));

  const Matrix disjoint{{1, 0}, {1, 0}, {0, 1}, {0, 1}};
  CHECK(sparsity_overlap(disjoint, Matrix::identity(4)) ==
        doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("sample complexity theta") {
  // Definition inversion: psi = n / (2 log(p - s)) gives theta = 1.
  const double psi = 100.0 / (2.0 * std::log(240.0));
  CHECK(sample_complexity_theta(100, 256, 16, psi) ==
        doctest::Approx(1.0).epsilon(1e-12));

  // 1774 / (2 * 16 * ln 240), frozen from the formula.
  CHECK(sample_complexity_theta(1774, 256, 16, 16.0) ==
        doctest::Approx(10.115152772406187).epsilon(1e-12));

  // Halving psi doubles theta.
  CHECK(sample_complexity_theta(1774, 256, 16, 8.0) ==
        doctest::Approx(2.0 * 10.115152772406187).epsilon(1e-12));

  CHECK_THROWS_AS(sample_complexity_theta(100, 17, 16, 1.0),
                  DegenerateLogArgument);
}

TEST_CASE("psi bounds") {
  CHECK(psi_bounds(4, 2, 1.0, 1.0) == std::pair{2.0, 4.0});
  CHECK(psi_bounds(7, 1, 1.0, 1.0) == std::pair{7.0, 7.0});
  CHECK(psi_bounds(8, 2, 0.5, 2.0) == std::pair{2.0, 16.0});
}

TEST_CASE("psi is invariant to positive row rescaling") {
  std::mt19937_64 engine(15);
  std::uniform_real_distribution<double> unif(0.1, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix b = oracles::random_coefficients(5, 2, engine);
    const Matrix sigma = oracles::random_spd(5, engine);
    Matrix scaled = b;
    for (std::size_t i = 0; i < 5; ++i) {
      const double d = unif(engine);
      for (std::size_t j = 0; j < 2; ++j) scaled(i, j) *= d;
    }
    CHECK(sparsity_overlap(scaled, sigma) ==
          doctest::Approx(sparsity_overlap(b, sigma)).epsilon(1e-9));
  }
}

TEST_CASE("eigenvalue sandwich brackets the measured overlap") {
  std::mt19937_64 engine(25);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t s = 2 + trial % 6, k = 1 + trial % 4;
    const Matrix b = oracles::random_coefficients(s, k, engine);
    const Matrix sigma = oracles::random_spd(s, engine);
    const auto eig = oracles::jacobi_eigenvalues(sigma);
    const double cmin = *std::min_element(eig.begin(), eig.end());
    const double cmax = *std::max_element(eig.begin(), eig.end());
    const auto [lo, hi] = psi_bounds(s, k, cmin, cmax);
    const double psi = sparsity_overlap(b, sigma);
    CHECK(psi >= lo - 1e-9);
    CHECK(psi <= hi + 1e-9);
  }
}

TEST_CASE("orthogonal zeta columns give the largest squared column norm") {
  // Identity design, orthogonal columns: the overlap is the max squared
  // column norm of zeta(B_S).
  for (std::size_t s : {4u, 8u, 12u}) {
    const Matrix b = family_block(Family::orthonormal, s);
    const Matrix z = zeta(b);
    double best = 0.0;
    for (std::size_t k = 0; k < 2; ++k) {
      double acc = 0.0;
      for (std::size_t i = 0; i < s; ++i) acc += z(i, k) * z(i, k);
      best = std::max(best, acc);
    }
    CHECK(sparsity_overlap(b, Matrix::identity(s)) ==
          doctest::Approx(best).epsilon(1e-10));
  }
}

TEST_CASE("with identity design the group overlap never exceeds max s_k") {
  std::mt19937_64 engine(35);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t s = 2 + trial % 5, k = 2 + trial % 3;
    Matrix b = oracles::gaussian_matrix(s, k, engine);
    // Random sparsity pattern per column, keeping every row nonzero.
    std::vector<std::size_t> sk(k, 0);
    for (std::size_t i = 0; i < s; ++i) {
      bool row_alive = false;
      for (std::size_t j = 0; j < k; ++j) {
        if (coin(engine) == 0 && !(j == k - 1 && !row_alive)) {
          b(i, j) = 0.0;
        } else {
          row_alive = true;
        }
      }
    }
    for (std::size_t j = 0; j < k; ++j) {
      for (std::size_t i = 0; i < s; ++i) {
        if (b(i, j) != 0.0) ++sk[j];
      }
    }
    const double cap =
        static_cast<double>(*std::max_element(sk.begin(), sk.end()));
    CHECK(sparsity_overlap(b, Matrix::identity(s)) <= cap + 1e-9);
  }
}

TEST_CASE("disjoint-support sandwich for correlated designs") {
  std::mt19937_64 engine(45);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t k = 2 + trial % 3;
    std::vector<std::size_t> sizes(k);
    std::size_t s = 0;
    for (std::size_t j = 0; j < k; ++j) {
      sizes[j] = 1 + trial % 3;
      s += sizes[j];
    }
    Matrix b(s, k);
    std::uniform_real_distribution<double> unif(0.2, 2.0);
    std::size_t row = 0;
    for (std::size_t j = 0; j < k; ++j) {
      for (std::size_t r = 0; r < sizes[j]; ++r) {
        b(row++, j) = (trial + r) % 2 == 0 ? unif(engine) : -unif(engine);
      }
    }
    const Matrix sigma = oracles::random_spd(s, engine);
    const Matrix z = zeta(b);
    const Matrix m = matmul_transa(z, solve_spd(sigma, z));
    double max_diag = 0.0, trace = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      max_diag = std::max(max_diag, m(j, j));
      trace += m(j, j);
    }
    const double psi = sparsity_overlap(b, sigma);
    CHECK(psi >= max_diag - 1e-9);
    CHECK(psi <= trace + 1e-9);
  }
}

TEST_CASE("two-by-two correlated design formulas") {
  const double quarter_pi = 0.78539816339744830962;
  const TwoTaskPsi same = psi_two_by_two(quarter_pi, quarter_pi, 0.0);
  CHECK(same.mu_plus == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(same.mu_minus == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(same.psi_group == doctest::Approx(2.0).epsilon(1e-14));

  const TwoTaskPsi disjoint = psi_two_by_two(0.0, 2.0 * quarter_pi, 0.0);
  CHECK(disjoint.psi_group == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(disjoint.psi_col1 == doctest::Approx(1.0));
  CHECK(disjoint.psi_col2 == doctest::Approx(1.0));

  const TwoTaskPsi correlated = psi_two_by_two(0.3, 0.3, 0.9);
  CHECK(correlated.psi_group == doctest::Approx(3.8).epsilon(1e-14));
}

TEST_CASE("two-by-two group value matches the explicit matrices") {
  std::mt19937_64 engine(55);
  std::uniform_real_distribution<double> angle(0.0, 3.14159265358979323846);
  std::uniform_real_distribution<double> corr(-0.95, 0.95);
  for (int trial = 0; trial < 200; ++trial) {
    const double t1 = angle(engine), t2 = angle(engine), rho = corr(engine);
    const TwoTaskPsi formulas = psi_two_by_two(t1, t2, rho);

    const Matrix b{{std::cos(t1), std::sin(t1)}, {std::cos(t2), std::sin(t2)}};
    const double scale = 1.0 / (1.0 - rho * rho);
    const Matrix sigma_ss{{scale, -rho * scale}, {-rho * scale, scale}};
    CHECK(formulas.psi_group ==
          doctest::Approx(sparsity_overlap(b, sigma_ss)).epsilon(1e-10));
  }
}

TEST_CASE("ordinary lasso complexity") {
  EnsembleSpec spec;
  spec.p = 64;
  spec.s = 4;
  spec.family = Family::identical;
  const Matrix b = make_coefficients(spec).b;
  CHECK(ordinary_lasso_complexity(b, Matrix::identity(64)) ==
        doctest::Approx(4.0 * std::log(60.0)).epsilon(1e-10));

  // Single column reduces to psi * log(p - s).
  Matrix single(64, 1);
  for (std::size_t i = 0; i < 4; ++i) single(i, 0) = 0.5;
  CHECK(ordinary_lasso_complexity(single, Matrix::identity(64)) ==
        doctest::Approx(4.0 * std::log(60.0)).epsilon(1e-10));

  Matrix disjoint(64, 2);
  disjoint(0, 0) = 1.0;
  disjoint(1, 0) = -1.0;
  disjoint(2, 1) = 1.0;
  disjoint(3, 1) = 1.0;
  CHECK(ordinary_lasso_complexity(disjoint, Matrix::identity(64)) ==
        doctest::Approx(2.0 * std::log(62.0)).epsilon(1e-10));

  CHECK_THROWS_AS(
      ordinary_lasso_complexity(Matrix(8, 2), Matrix::identity(8)),
      EmptyColumnSupport);
}

TEST_CASE("bmin") {
  CHECK(bmin(Matrix{{1, 0}, {0, -1}}) == doctest::Approx(1.0));
  CHECK(bmin(Matrix{{3, 4}, {0.3, 0.4}}) == doctest::Approx(0.5));

  for (Family f : {Family::identical, Family::orthonormal,
                   Family::intermediate}) {
    const Matrix b = family_block(f, 8);
    CHECK(bmin(b) == doctest::Approx(1.0).epsilon(1e-14));
  }
}
