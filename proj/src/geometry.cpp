#include "eqcov/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace eqcov {

Ellipse2D ellipse_boundary(const std::array<double, 2>& center,
                           const SymMatrix& shape, double radius,
                           std::size_t n_points) {
  if (shape.dim() != 2)
    throw Error(ErrorCode::InvalidArgument, "ellipse shape must be 2x2");
  if (!(radius > 0.0))
    throw Error(ErrorCode::InvalidArgument, "ellipse radius must be positive");
  if (n_points < 8)
    throw Error(ErrorCode::InvalidArgument,
                "ellipse needs at least 8 boundary points");

  auto eig = sym_eigen(shape);
  if (eig.values.back() <= 0.0)
    throw Error(ErrorCode::NotPositiveDefinite,
                "ellipse shape matrix is not positive definite");
  // Columns of V scaled by sqrt(eigenvalue) map the unit circle onto the
  // unit-radius covariance ellipse.
  const double a0 = eig.vectors(0, 0) * std::sqrt(eig.values[0]);
  const double a1 = eig.vectors(1, 0) * std::sqrt(eig.values[0]);
  const double b0 = eig.vectors(0, 1) * std::sqrt(eig.values[1]);
  const double b1 = eig.vectors(1, 1) * std::sqrt(eig.values[1]);

  Ellipse2D out;
  out.center = center;
  out.boundary.reserve(n_points);
  for (std::size_t k = 0; k < n_points; ++k) {
    const double t = 2.0 * M_PI * static_cast<double>(k) /
                     static_cast<double>(n_points);
    const double c = std::cos(t), s = std::sin(t);
    out.boundary.push_back({center[0] + radius * (a0 * c + b0 * s),
                            center[1] + radius * (a1 * c + b1 * s)});
  }
  return out;
}

double coverage_radius(double coverage) {
  if (!(coverage > 0.0 && coverage < 1.0))
    throw Error(ErrorCode::InvalidArgument,
                "coverage must lie strictly in (0, 1)");
  return std::sqrt(chisq_quantile(coverage, 2.0));
}

std::vector<EllipsePanel> centered_pairwise_ellipses(const CovSummary& s,
                                                     double coverage,
                                                     std::size_t n_points) {
  if (s.n_vars < 2)
    throw Error(ErrorCode::InvalidArgument,
                "pairwise ellipses need at least two variables");
  const double radius = coverage_radius(coverage);

  auto sub2 = [](const SymMatrix& m, std::size_t a, std::size_t b) {
    SymMatrix s2(2);
    s2.set(0, 0, m(a, a));
    s2.set(1, 1, m(b, b));
    s2.set(0, 1, m(a, b));
    return s2;
  };

  std::vector<EllipsePanel> panels;
  for (std::size_t a = 0; a + 1 < s.n_vars; ++a) {
    for (std::size_t b = a + 1; b < s.n_vars; ++b) {
      EllipsePanel panel;
      panel.var_x = s.variable_names.empty() ? "v" + std::to_string(a)
                                             : s.variable_names[a];
      panel.var_y = s.variable_names.empty() ? "v" + std::to_string(b)
                                             : s.variable_names[b];
      for (const auto& g : s.groups) {
        Ellipse2D e =
            ellipse_boundary({0.0, 0.0}, sub2(g.cov, a, b), radius, n_points);
        e.label = g.name;
        panel.ellipses.push_back(std::move(e));
      }
      Ellipse2D pe =
          ellipse_boundary({0.0, 0.0}, sub2(s.pooled, a, b), radius, n_points);
      pe.label = "pooled";
      pe.pooled = true;
      panel.ellipses.push_back(std::move(pe));
      panels.push_back(std::move(panel));
    }
  }
  return panels;
}

PcaProjection pca(const GroupedDataset& d) {
  const std::size_t n = d.n_rows();
  const std::size_t p = d.n_vars();
  if (n <= p)
    throw Error(ErrorCode::InvalidArgument,
                "principal components need more rows than variables");

  PcaProjection out;
  out.grand_mean.assign(p, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < p; ++j) out.grand_mean[j] += d.values(i, j);
  for (double& v : out.grand_mean) v /= static_cast<double>(n);

  SymMatrix total(p);
  for (std::size_t a = 0; a < p; ++a) {
    for (std::size_t b = a; b < p; ++b) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        acc += (d.values(i, a) - out.grand_mean[a]) *
               (d.values(i, b) - out.grand_mean[b]);
      total.set(a, b, acc / static_cast<double>(n - 1));
    }
  }

  double trace = 0.0;
  for (std::size_t j = 0; j < p; ++j) trace += total(j, j);
  if (!(trace > 0.0))
    throw Error(ErrorCode::DegenerateData,
                "data has zero total variance; no principal directions");

  auto eig = sym_eigen(total);
  out.loadings = eig.vectors;
  out.eigenvalues = eig.values;
  for (double& v : out.eigenvalues) v = std::max(v, 0.0);

  // Deterministic sign: the entry of largest magnitude in each component is
  // positive, first such index winning ties.
  for (std::size_t j = 0; j < p; ++j) {
    std::size_t arg = 0;
    double best = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
      const double mag = std::abs(out.loadings(i, j));
      if (mag > best) {
        best = mag;
        arg = i;
      }
    }
    if (out.loadings(arg, j) < 0.0)
      for (std::size_t i = 0; i < p; ++i)
        out.loadings(i, j) = -out.loadings(i, j);
  }

  double total_var = 0.0;
  for (double v : out.eigenvalues) total_var += v;
  out.variance_proportions.reserve(p);
  for (double v : out.eigenvalues)
    out.variance_proportions.push_back(v / total_var);

  out.scores = Matrix(n, p);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < p; ++k)
        acc += (d.values(i, k) - out.grand_mean[k]) * out.loadings(k, j);
      out.scores(i, j) = acc;
    }
  }
  return out;
}

CovSummary group_cov_in_component_space(const GroupedDataset& d,
                                        const PcaProjection& proj,
                                        std::size_t comp_x,
                                        std::size_t comp_y) {
  const std::size_t p = proj.scores.cols();
  if (comp_x >= p || comp_y >= p)
    throw Error(ErrorCode::InvalidArgument,
                "component index out of range");
  if (comp_x == comp_y)
    throw Error(ErrorCode::InvalidArgument,
                "component indices must differ");

  Matrix values(d.n_rows(), 2);
  for (std::size_t i = 0; i < d.n_rows(); ++i) {
    values(i, 0) = proj.scores(i, comp_x);
    values(i, 1) = proj.scores(i, comp_y);
  }
  std::vector<std::string> labels;
  labels.reserve(d.n_rows());
  for (std::size_t i = 0; i < d.n_rows(); ++i)
    labels.push_back(d.group_names[d.group_index[i]]);
  GroupedDataset scores = make_grouped_dataset(
      std::move(values), std::move(labels),
      {"PC" + std::to_string(comp_x + 1), "PC" + std::to_string(comp_y + 1)});
  return summarize(scores);
}

}  // namespace eqcov
