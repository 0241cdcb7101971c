#pragma once

#include <string>
#include <vector>

#include "eqcov/dataset.hpp"
#include "eqcov/numcore.hpp"

namespace eqcov {

struct ManovaStat {
  std::string name;  // "Pillai", "Wilks", "Hotelling-Lawley", "Roy"
  double value = 0.0;
  double f = 0.0;
  double df1 = 0.0;
  double df2 = 0.0;
  double p_value = 1.0;
  bool upper_bound = false;  // Roy's F approximation bounds the true F
};

// One-way MANOVA on group means. Eigenvalues are those of E^{-1} H where H
// is the between-group and E the within-group SSCP matrix.
struct ManovaResult {
  SymMatrix h;
  SymMatrix e;
  Vector eigenvalues;  // descending, length min(p, g-1)
  std::vector<ManovaStat> stats;  // Pillai, Wilks, Hotelling-Lawley, Roy
};

ManovaResult manova(const GroupedDataset& d);

// Center choice for the dispersion (Levene-style) transformation.
enum class LeveneCenter { Median, Mean, Trimmed };

struct CenterSpec {
  LeveneCenter kind = LeveneCenter::Median;
  double trim_fraction = 0.1;  // used by Trimmed only, in [0, 0.5)

  // Accepts "median", "mean", "trimmed" or "trimmed:<fraction>".
  static CenterSpec parse(const std::string& text);
};

// Componentwise absolute deviations |y_ij - center_i| from each group's
// center. Running manova() on the result tests dispersion equality.
GroupedDataset levene_deviations(const GroupedDataset& d,
                                 const CenterSpec& center = {});

// Columns of an explanatory design, n rows. Built incrementally.
struct DesignMatrix {
  Matrix values;  // n x k
};

DesignMatrix design_intercept(std::size_t n_rows);
DesignMatrix design_group_indicators(const GroupedDataset& d);
void append_column(DesignMatrix& x, const Vector& column);

// Least-squares residuals Y - X (X'X)^{-1} X' Y. Throws RankDeficient when
// the design's normal equations cannot be factorized.
Matrix residualize(const Matrix& y, const DesignMatrix& x);

}  // namespace eqcov
