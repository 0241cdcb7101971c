#include <doctest.h>

#include <cmath>
#include <random>

#include "eqcov/numcore.hpp"
#include "oracles.hpp"

using namespace eqcov;

namespace {

// Relative comparison that stays meaningful for very small magnitudes,
// where doctest's Approx (absolute near zero) would pass vacuously.
void check_rel(double got, double want, double tol) {
  if (want == 0.0) {
    CHECK(std::abs(got) <= tol);
    return;
  }
  CHECK(std::abs(got - want) <= tol * std::abs(want));
}

SymMatrix sym_from(const oracle::Mat& m) {
  SymMatrix s(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j)
      s.set(i, j, 0.5 * (m[i][j] + m[j][i]));
  return s;
}

}  // namespace

TEST_CASE("matrix basics: multiply and transpose") {
  Matrix a{{1.0, 2.0, 3.0}, {4.0, 5.0, 6.0}};
  Matrix b{{7.0, 8.0}, {9.0, 10.0}, {11.0, 12.0}};
  Matrix c = matmul(a, b);
  REQUIRE(c.rows() == 2);
  REQUIRE(c.cols() == 2);
  CHECK(c(0, 0) == doctest::Approx(58.0));
  CHECK(c(0, 1) == doctest::Approx(64.0));
  CHECK(c(1, 0) == doctest::Approx(139.0));
  CHECK(c(1, 1) == doctest::Approx(154.0));

  Matrix at = transpose(a);
  REQUIRE(at.rows() == 3);
  REQUIRE(at.cols() == 2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(at(j, i) == a(i, j));

  CHECK_THROWS_AS(matmul(a, a), Error);  // inner dimensions differ
}

TEST_CASE("symmetric storage symmetrizes and rejects asymmetry") {
  Matrix near_sym{{1.0, 2.0 + 1e-15}, {2.0, 3.0}};
  SymMatrix s = SymMatrix::from_matrix(near_sym);
  CHECK(s(0, 1) == s(1, 0));
  CHECK(s(0, 1) == doctest::Approx(2.0));

  Matrix bad{{1.0, 5.0}, {2.0, 3.0}};
  CHECK_THROWS_AS(SymMatrix::from_matrix(bad), Error);
  try {
    SymMatrix::from_matrix(bad);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidArgument);
  }

  SymMatrix id = SymMatrix::identity(3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(id(i, j) == (i == j ? 1.0 : 0.0));
}

TEST_CASE("eigendecomposition of [[2,1],[1,2]] is (3, 1)") {
  SymMatrix s{{2.0, 1.0}, {1.0, 2.0}};
  EigenDecomposition e = sym_eigen(s);
  REQUIRE(e.values.size() == 2);
  CHECK(e.values[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(e.values[1] == doctest::Approx(1.0).epsilon(1e-12));
  // Orthonormal columns.
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) {
      double dot = 0.0;
      for (std::size_t i = 0; i < 2; ++i)
        dot += e.vectors(i, a) * e.vectors(i, b);
      CHECK(dot == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-12));
    }
}

TEST_CASE("identity eigenvalues are all one") {
  EigenDecomposition e = sym_eigen(SymMatrix::identity(4));
  for (double v : e.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("eigendecomposition reconstructs random matrices") {
  std::mt19937 rng(20240517);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t p = 2 + static_cast<std::size_t>(trial % 5);
    SymMatrix s = sym_from(oracle::random_pd(rng, p));
    EigenDecomposition e = sym_eigen(s);
    // Descending order.
    for (std::size_t k = 1; k < p; ++k) CHECK(e.values[k - 1] >= e.values[k]);
    // V diag(values) V' == S.
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < p; ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k < p; ++k)
          acc += e.vectors(i, k) * e.values[k] * e.vectors(j, k);
        CHECK(acc == doctest::Approx(s(i, j)).epsilon(1e-9));
      }
  }
}

TEST_CASE("cholesky of [[4,2],[2,5]] is [[2,0],[1,2]]") {
  SymMatrix s{{4.0, 2.0}, {2.0, 5.0}};
  Matrix l = cholesky(s);
  CHECK(l(0, 0) == doctest::Approx(2.0));
  CHECK(l(0, 1) == doctest::Approx(0.0));
  CHECK(l(1, 0) == doctest::Approx(1.0));
  CHECK(l(1, 1) == doctest::Approx(2.0));
}

TEST_CASE("cholesky reports the failing pivot of an indefinite matrix") {
  SymMatrix s{{1.0, 2.0}, {2.0, 1.0}};
  try {
    cholesky(s);
    FAIL("expected a factorization error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotPositiveDefinite);
    CHECK(e.detail() == 1);
  }
}

TEST_CASE("cholesky factor reproduces random matrices") {
  std::mt19937 rng(7451823);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t p = 1 + static_cast<std::size_t>(trial % 6);
    SymMatrix s = sym_from(oracle::random_pd(rng, p));
    Matrix l = cholesky(s);
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < p; ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k <= std::min(i, j); ++k)
          acc += l(i, k) * l(j, k);
        CHECK(acc == doctest::Approx(s(i, j)).epsilon(1e-10));
        if (j > i) CHECK(l(i, j) == 0.0);
      }
  }
}

TEST_CASE("log determinant of diag(2, 3) is log 6") {
  SymMatrix s{{2.0, 0.0}, {0.0, 3.0}};
  CHECK(log_det(s) == doctest::Approx(std::log(6.0)).epsilon(1e-14));
  CHECK(log_det(s) == doctest::Approx(1.791759).epsilon(1e-6));
}

TEST_CASE("log determinant agrees with an LU elimination oracle") {
  std::mt19937 rng(99021);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t p = 1 + static_cast<std::size_t>(trial % 6);
    oracle::Mat m = oracle::random_pd(rng, p);
    int sign = 0;
    const double expected = oracle::lu_log_abs_det(m, &sign);
    CHECK(sign == 1);
    CHECK(log_det(sym_from(m)) ==
          doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("mahalanobis distance against diag(4, 1)") {
  SymMatrix s{{4.0, 0.0}, {0.0, 1.0}};
  CHECK(mahalanobis_sq({2.0, 0.0}, {0.0, 0.0}, s) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(mahalanobis_sq({0.0, 1.0}, {0.0, 0.0}, s) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(mahalanobis_sq({2.0, 1.0}, {2.0, 1.0}, s) == doctest::Approx(0.0));
}

TEST_CASE("mahalanobis distance is invariant under affine maps") {
  std::mt19937 rng(5150);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t p = 2 + static_cast<std::size_t>(trial % 4);
    SymMatrix s = sym_from(oracle::random_pd(rng, p));
    Vector y(p), c(p);
    for (auto& v : y) v = uni(rng) * 3.0;
    for (auto& v : c) v = uni(rng);
    Matrix t(p, p);
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < p; ++j)
        t(i, j) = uni(rng) + (i == j ? 3.0 : 0.0);

    const double base = mahalanobis_sq(y, c, s);

    Vector ty(p, 0.0), tc(p, 0.0);
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < p; ++j) {
        ty[i] += t(i, j) * y[j];
        tc[i] += t(i, j) * c[j];
      }
    Matrix tst = matmul(matmul(t, s.to_matrix()), transpose(t));
    SymMatrix s2 = SymMatrix::from_matrix(tst, 1e-9);

    CHECK(mahalanobis_sq(ty, tc, s2) ==
          doctest::Approx(base).epsilon(1e-8));
  }
}

TEST_CASE("triangular solves invert the cholesky factor") {
  std::mt19937 rng(33010);
  SymMatrix s = sym_from(oracle::random_pd(rng, 4));
  Matrix l = cholesky(s);
  Vector b{1.0, -2.0, 0.5, 3.0};
  Vector z = forward_solve(l, b);
  Vector x = backward_solve_t(l, z);
  // L L' x == b, i.e. S x == b.
  for (std::size_t i = 0; i < 4; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < 4; ++j) acc += s(i, j) * x[j];
    CHECK(acc == doctest::Approx(b[i]).epsilon(1e-10));
  }
}

TEST_CASE("chi-square quantile examples") {
  CHECK(chisq_quantile(0.5, 2.0) ==
        doctest::Approx(std::log(4.0)).epsilon(1e-10));
  CHECK(chisq_quantile(0.95, 2.0) == doctest::Approx(5.991464547).epsilon(1e-9));
  CHECK(chisq_quantile(0.68, 2.0) == doctest::Approx(2.278868567).epsilon(1e-9));
  CHECK(chisq_quantile(0.0, 5.0) == 0.0);
}

TEST_CASE("chi-square tail examples") {
  CHECK(chisq_sf(0.0, 7.0) == doctest::Approx(1.0));
  check_rel(chisq_sf(45.67, 40.0), oracle::chisq_sf_quad(45.67, 40.0), 1e-9);
  CHECK(chisq_sf(45.67, 40.0) == doctest::Approx(0.248).epsilon(2e-3));
  CHECK(chisq_sf(140.94, 20.0) < 1e-15);
  check_rel(chisq_sf(140.94, 20.0), oracle::chisq_sf_quad(140.94, 20.0),
            1e-7);
}

TEST_CASE("chi-square tail matches quadrature across a grid") {
  for (double df : {1.0, 2.0, 5.0, 10.0, 40.0, 182.0})
    for (double x : {0.5, 1.0, 3.0, 10.0, 35.0, 80.0})
      check_rel(chisq_sf(x, df), oracle::chisq_sf_quad(x, df), 1e-8);
}

TEST_CASE("chi-square quantile and tail are mutual inverses") {
  for (double df : {1.0, 2.0, 3.0, 8.0, 20.0, 40.0})
    for (double p : {0.001, 0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99, 0.999}) {
      const double x = chisq_quantile(p, df);
      CHECK(chisq_sf(x, df) == doctest::Approx(1.0 - p).epsilon(1e-7));
      CHECK(chisq_quantile(1.0 - chisq_sf(x, df), df) ==
            doctest::Approx(x).epsilon(1e-7));
    }
}

TEST_CASE("F tail examples and quadrature agreement") {
  CHECK(f_sf(0.0, 3.0, 10.0) == doctest::Approx(1.0));
  CHECK(f_sf(1.0, 10.0, 10.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(f_sf(3.512, 16.0, 580.0) < 1e-5);
  check_rel(f_sf(3.512, 16.0, 580.0), oracle::f_sf_quad(3.512, 16.0, 580.0),
            1e-7);
  for (double d1 : {2.0, 6.0, 16.0})
    for (double d2 : {8.0, 60.0, 580.0})
      for (double x : {0.3, 1.0, 2.5})
        check_rel(f_sf(x, d1, d2), oracle::f_sf_quad(x, d1, d2), 1e-8);
}

TEST_CASE("normal quantile matches an erfc-based CDF") {
  CHECK(normal_quantile(0.8413) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963985).epsilon(1e-9));
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0));
  for (double p : {0.0005, 0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99, 0.9995}) {
    CHECK(oracle::normal_cdf(normal_quantile(p)) ==
          doctest::Approx(p).epsilon(1e-12));
  }
}

TEST_CASE("distribution helpers reject out-of-domain arguments") {
  CHECK_THROWS_AS(chisq_sf(-0.1, 2.0), Error);
  CHECK_THROWS_AS(chisq_sf(1.0, 0.0), Error);
  CHECK_THROWS_AS(chisq_quantile(1.0, 2.0), Error);
  CHECK_THROWS_AS(chisq_quantile(-0.2, 2.0), Error);
  CHECK_THROWS_AS(f_sf(-1.0, 2.0, 3.0), Error);
  CHECK_THROWS_AS(f_sf(1.0, 0.0, 3.0), Error);
  CHECK_THROWS_AS(normal_quantile(0.0), Error);
  CHECK_THROWS_AS(normal_quantile(1.0), Error);
}
