#pragma once

#include <array>
#include <string>
#include <vector>

#include "eqcov/covstats.hpp"
#include "eqcov/dataset.hpp"
#include "eqcov/numcore.hpp"

namespace eqcov {

// A 2-d covariance ellipse sampled as a closed polygon. Boundary points all
// satisfy (x - center)' S^{-1} (x - center) = radius^2.
struct Ellipse2D {
  std::string label;
  bool pooled = false;
  std::array<double, 2> center{0.0, 0.0};
  std::vector<std::array<double, 2>> boundary;
};

Ellipse2D ellipse_boundary(const std::array<double, 2>& center,
                           const SymMatrix& shape, double radius,
                           std::size_t n_points = 120);

// Probability coverage of a bivariate normal ellipse -> Mahalanobis radius.
double coverage_radius(double coverage);

struct EllipsePanel {
  std::string var_x, var_y;
  std::vector<Ellipse2D> ellipses;  // group order, pooled last
};

// For every variable pair (j < k): each group's 2x2 covariance submatrix
// drawn as an origin-centered ellipse, plus the pooled one. Centering on the
// origin makes shape and size directly comparable across groups.
std::vector<EllipsePanel> centered_pairwise_ellipses(const CovSummary& s,
                                                     double coverage = 0.68,
                                                     std::size_t n_points =
                                                         120);

// Principal components of the total (group-ignoring) covariance matrix.
struct PcaProjection {
  Vector grand_mean;
  Matrix loadings;              // columns = component directions
  Vector eigenvalues;           // descending, clamped at zero
  Vector variance_proportions;  // eigenvalue / trace
  Matrix scores;                // centered data times loadings
};

PcaProjection pca(const GroupedDataset& d);

// Group covariance structure of two chosen score columns (0-based component
// indices), as a 2-variable summary ready for ellipse panels.
CovSummary group_cov_in_component_space(const GroupedDataset& d,
                                        const PcaProjection& proj,
                                        std::size_t comp_x,
                                        std::size_t comp_y);

}  // namespace eqcov
