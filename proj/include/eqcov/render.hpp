#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "eqcov/covstats.hpp"
#include "eqcov/geometry.hpp"

namespace eqcov {

// Shared styling for every figure. Group k draws in palette[k % size]; the
// pooled summary always uses the reserved neutral tone, never a palette
// entry, and is emphasized (heavier stroke, translucent fill where closed).
struct FigureSpec {
  double width = 720.0;
  double height = 540.0;
  double margin = 56.0;
  std::vector<std::string> palette = {"#0072b2", "#d55e00", "#009e73",
                                      "#cc79a7", "#e69f00", "#56b4e9",
                                      "#a65628", "#7f3fbf"};
  std::string pooled_color = "#444444";
  double pooled_fill_opacity = 0.2;
};

// Lower-triangle grid of origin-centered covariance ellipses, one closed
// <path class="ellipse"> per ellipse, pooled drawn last and shaded.
std::string render_ellipse_matrix(const std::vector<EllipsePanel>& panels,
                                  const FigureSpec& spec = {});

// Horizontal dotplot of log determinants: one marker and one confidence
// segment per entry, groups top to bottom in order, pooled last.
std::string render_logdet_dotplot(const BoxMResult& result,
                                  const FigureSpec& spec = {});

// Log-eigenvalue profiles, one <polyline class="series"> per matrix. A
// positive split index k lays dimensions 1..k and k+1..p out as two panels
// with independent vertical scales.
std::string render_scree(const std::vector<ScreeSeries>& series,
                         const FigureSpec& spec = {},
                         std::size_t panel_split = 0);

// 2x2 grid of dotplots for the four eigenvalue size statistics.
std::string render_eigstats_grid(const std::vector<EigSizeStats>& stats,
                                 const FigureSpec& spec = {});

}  // namespace eqcov
