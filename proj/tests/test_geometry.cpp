#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "eqcov/dataset.hpp"
#include "eqcov/geometry.hpp"
#include "oracles.hpp"

using namespace eqcov;

TEST_CASE("identity shape at unit radius samples the unit circle") {
  Ellipse2D e =
      ellipse_boundary({0.0, 0.0}, SymMatrix::identity(2), 1.0, 16);
  REQUIRE(e.boundary.size() == 16);
  for (const auto& pt : e.boundary) {
    CHECK(std::hypot(pt[0], pt[1]) == doctest::Approx(1.0).epsilon(1e-12));
  }
  // First point lies on the major axis direction.
  CHECK(std::abs(e.boundary[0][0]) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("boundary points satisfy the quadratic form exactly") {
  std::mt19937 rng(271828);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  for (int trial = 0; trial < 12; ++trial) {
    oracle::Mat m = oracle::random_pd(rng, 2);
    SymMatrix shape(2);
    shape.set(0, 0, m[0][0]);
    shape.set(1, 1, m[1][1]);
    shape.set(0, 1, m[0][1]);
    const std::array<double, 2> center{uni(rng), uni(rng)};
    const double radius = 0.5 + std::abs(uni(rng));
    Ellipse2D e = ellipse_boundary(center, shape, radius, 64);
    for (const auto& pt : e.boundary) {
      const double md =
          mahalanobis_sq({pt[0], pt[1]}, {center[0], center[1]}, shape);
      CHECK(md == doctest::Approx(radius * radius).epsilon(1e-8));
    }
  }
}

TEST_CASE("ellipse area matches the closed form") {
  std::mt19937 rng(314159);
  for (int trial = 0; trial < 8; ++trial) {
    oracle::Mat m = oracle::random_pd(rng, 2);
    SymMatrix shape(2);
    shape.set(0, 0, m[0][0]);
    shape.set(1, 1, m[1][1]);
    shape.set(0, 1, m[0][1]);
    const double radius = 1.2;
    Ellipse2D e = ellipse_boundary({0.0, 0.0}, shape, radius, 360);
    const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    const double want = M_PI * radius * radius * std::sqrt(det);
    const double got = oracle::polygon_area(e.boundary);
    CHECK(got == doctest::Approx(want).epsilon(1e-3));
  }
}

TEST_CASE("ellipse construction validates its arguments") {
  CHECK_THROWS_AS(ellipse_boundary({0, 0}, SymMatrix::identity(3), 1.0, 32),
                  Error);
  CHECK_THROWS_AS(ellipse_boundary({0, 0}, SymMatrix::identity(2), 0.0, 32),
                  Error);
  CHECK_THROWS_AS(ellipse_boundary({0, 0}, SymMatrix::identity(2), 1.0, 7),
                  Error);
  try {
    ellipse_boundary({0, 0}, SymMatrix{{1.0, 2.0}, {2.0, 1.0}}, 1.0, 32);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotPositiveDefinite);
  }
}

TEST_CASE("coverage to radius conversion") {
  CHECK(coverage_radius(0.68) ==
        doctest::Approx(std::sqrt(2.278868567)).epsilon(1e-8));
  CHECK(coverage_radius(0.95) ==
        doctest::Approx(std::sqrt(5.991464547)).epsilon(1e-8));
  CHECK_THROWS_AS(coverage_radius(0.0), Error);
  CHECK_THROWS_AS(coverage_radius(1.0), Error);
}

TEST_CASE("pairwise panels: order, labels, and centering") {
  CovSummary s = summarize(builtin_dataset("iris"));
  std::vector<EllipsePanel> panels = centered_pairwise_ellipses(s);
  REQUIRE(panels.size() == 6);  // 4 choose 2
  const char* want_x[] = {"Sepal.Length", "Sepal.Length", "Sepal.Length",
                          "Sepal.Width", "Sepal.Width", "Petal.Length"};
  const char* want_y[] = {"Sepal.Width", "Petal.Length", "Petal.Width",
                          "Petal.Length", "Petal.Width", "Petal.Width"};
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(panels[i].var_x == want_x[i]);
    CHECK(panels[i].var_y == want_y[i]);
    REQUIRE(panels[i].ellipses.size() == 4);  // three groups + pooled
    CHECK(panels[i].ellipses[0].label == "setosa");
    CHECK(panels[i].ellipses[3].label == "pooled");
    CHECK(panels[i].ellipses[3].pooled);
    for (const auto& e : panels[i].ellipses) {
      CHECK(e.center[0] == 0.0);
      CHECK(e.center[1] == 0.0);
      CHECK(e.boundary.size() == 120);
    }
  }

  // The boundary spread reflects each group's covariance scale: setosa's
  // petal-length variance is far smaller than virginica's.
  auto max_abs_y = [](const Ellipse2D& e) {
    double best = 0.0;
    for (const auto& pt : e.boundary) best = std::max(best, std::abs(pt[1]));
    return best;
  };
  const auto& panel_lp = panels[1];  // Sepal.Length vs Petal.Length
  CHECK(max_abs_y(panel_lp.ellipses[0]) < max_abs_y(panel_lp.ellipses[2]));

  // One variable is not enough.
  CovSummary s1 = summarize(select_variables(builtin_dataset("iris"),
                                             {"Sepal.Length"}));
  CHECK_THROWS_AS(centered_pairwise_ellipses(s1), Error);
}

TEST_CASE("principal axes of the iris measurements") {
  PcaProjection p = pca(builtin_dataset("iris"));
  REQUIRE(p.eigenvalues.size() == 4);
  CHECK(p.eigenvalues[0] == doctest::Approx(4.22824171).epsilon(1e-7));
  CHECK(p.eigenvalues[1] == doctest::Approx(0.24267075).epsilon(1e-6));
  CHECK(p.eigenvalues[2] == doctest::Approx(0.07820950).epsilon(1e-6));
  CHECK(p.eigenvalues[3] == doctest::Approx(0.02383509).epsilon(1e-6));

  CHECK(p.variance_proportions[0] ==
        doctest::Approx(0.92461872).epsilon(1e-7));
  CHECK(p.variance_proportions[1] ==
        doctest::Approx(0.05306648).epsilon(1e-6));
  CHECK(p.variance_proportions[2] ==
        doctest::Approx(0.01710261).epsilon(1e-6));
  CHECK(p.variance_proportions[3] ==
        doctest::Approx(0.00521218).epsilon(1e-6));

  const double cum2 = p.variance_proportions[0] + p.variance_proportions[1];
  CHECK(cum2 == doctest::Approx(0.9776852).epsilon(1e-6));

  // Loadings with the sign convention: largest-magnitude entry positive.
  const double want[4][4] = {
      {0.361387, 0.656589, -0.582030, 0.315487},
      {-0.084523, 0.730161, 0.597911, -0.319723},
      {0.856671, -0.173373, 0.076236, -0.479839},
      {0.358289, -0.075481, 0.545831, 0.753657}};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      CHECK(p.loadings(i, j) == doctest::Approx(want[i][j]).epsilon(1e-5));

  CHECK(p.grand_mean[0] == doctest::Approx(5.843333333).epsilon(1e-9));
  CHECK(p.grand_mean[2] == doctest::Approx(3.758).epsilon(1e-9));
}

TEST_CASE("scores reconstruct the data and decorrelate it") {
  GroupedDataset d = builtin_dataset("iris");
  PcaProjection p = pca(d);
  const std::size_t n = d.n_rows(), pv = d.n_vars();

  // scores * loadings' + mean reproduces the data.
  for (std::size_t i = 0; i < n; i += 7) {
    for (std::size_t j = 0; j < pv; ++j) {
      double acc = p.grand_mean[j];
      for (std::size_t k = 0; k < pv; ++k)
        acc += p.scores(i, k) * p.loadings(j, k);
      CHECK(acc == doctest::Approx(d.values(i, j)).epsilon(1e-8));
    }
  }

  // The total covariance of the scores is diag(eigenvalues).
  for (std::size_t a = 0; a < pv; ++a)
    for (std::size_t b = a; b < pv; ++b) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        acc += p.scores(i, a) * p.scores(i, b);
      acc /= static_cast<double>(n - 1);
      const double want = (a == b) ? p.eigenvalues[a] : 0.0;
      CHECK(acc == doctest::Approx(want).epsilon(1e-8));
    }
}

TEST_CASE("rotating the data leaves the spectrum unchanged") {
  std::mt19937 rng(161803);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix values(40, 3);
  std::vector<std::string> labels(40, "all");
  for (std::size_t i = 0; i < 40; ++i) {
    values(i, 0) = gauss(rng) * 3.0;
    values(i, 1) = gauss(rng) * 1.5 + 0.3 * values(i, 0);
    values(i, 2) = gauss(rng) * 0.5;
  }
  GroupedDataset d = make_grouped_dataset(Matrix(values), labels,
                                          {"a", "b", "c"});
  PcaProjection base = pca(d);

  // Rotation by a fixed orthogonal matrix (Givens composition).
  const double c1 = std::cos(0.7), s1 = std::sin(0.7);
  const double c2 = std::cos(-0.4), s2 = std::sin(-0.4);
  Matrix r1{{c1, -s1, 0.0}, {s1, c1, 0.0}, {0.0, 0.0, 1.0}};
  Matrix r2{{1.0, 0.0, 0.0}, {0.0, c2, -s2}, {0.0, s2, c2}};
  Matrix rot = matmul(r1, r2);
  Matrix rotated(40, 3);
  for (std::size_t i = 0; i < 40; ++i)
    for (std::size_t a = 0; a < 3; ++a) {
      double acc = 0.0;
      for (std::size_t b = 0; b < 3; ++b) acc += rot(a, b) * values(i, b);
      rotated(i, a) = acc;
    }
  PcaProjection turned =
      pca(make_grouped_dataset(std::move(rotated), labels, {"a", "b", "c"}));
  for (std::size_t k = 0; k < 3; ++k)
    CHECK(turned.eigenvalues[k] ==
          doctest::Approx(base.eigenvalues[k]).epsilon(1e-8));
}

TEST_CASE("degenerate inputs for the projection") {
  // More variables than rows.
  Matrix wide{{1.0, 2.0, 3.0}, {4.0, 5.0, 6.0}};
  GroupedDataset dw = make_grouped_dataset(std::move(wide), {"a", "a"},
                                           {"x", "y", "z"});
  try {
    pca(dw);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidArgument);
  }

  // All rows identical: no variance anywhere.
  Matrix flat(5, 2, 1.0);
  GroupedDataset df = make_grouped_dataset(
      std::move(flat), {"a", "a", "a", "a", "a"}, {"x", "y"});
  try {
    pca(df);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateData);
  }
}

TEST_CASE("group structure in the plane of two components") {
  GroupedDataset d = builtin_dataset("iris");
  PcaProjection p = pca(d);
  CovSummary s = group_cov_in_component_space(d, p, 2, 3);
  REQUIRE(s.n_groups() == 3);
  CHECK(s.variable_names == std::vector<std::string>{"PC3", "PC4"});
  CHECK(s.n_vars == 2);

  // Within-group correlations of the two smallest components: the first two
  // species correlate negatively, the third positively.
  auto corr = [&](std::size_t k) {
    const auto& c = s.groups[k].cov;
    return c(0, 1) / std::sqrt(c(0, 0) * c(1, 1));
  };
  CHECK(corr(0) == doctest::Approx(-0.4802).epsilon(1e-3));
  CHECK(corr(1) == doctest::Approx(-0.4967).epsilon(1e-3));
  CHECK(corr(2) == doctest::Approx(0.3035).epsilon(1e-3));

  CHECK_THROWS_AS(group_cov_in_component_space(d, p, 0, 0), Error);
  CHECK_THROWS_AS(group_cov_in_component_space(d, p, 0, 9), Error);

  // Score covariances feed straight into pairwise panels.
  std::vector<EllipsePanel> panels = centered_pairwise_ellipses(s, 0.68);
  REQUIRE(panels.size() == 1);
  CHECK(panels[0].var_x == "PC3");
  CHECK(panels[0].var_y == "PC4");
  REQUIRE(panels[0].ellipses.size() == 4);
}
