#pragma once

#include <string>
#include <utility>
#include <vector>

#include "eqcov/dataset.hpp"
#include "eqcov/numcore.hpp"

namespace eqcov {

struct GroupCov {
  std::string name;
  std::size_t n = 0;
  Vector mean;
  SymMatrix cov;  // unbiased, divisor n - 1
};

// Per-group means and covariances plus the pooled covariance
// S_p = sum_i (n_i - 1) S_i / (N - g).
struct CovSummary {
  std::vector<GroupCov> groups;
  SymMatrix pooled;
  std::vector<std::string> variable_names;
  std::size_t n_total = 0;
  std::size_t n_vars = 0;
  std::size_t n_groups() const { return groups.size(); }
};

CovSummary summarize(const GroupedDataset& d);

// Asymptotic confidence interval for log|S| from a sample of size n in p
// dimensions: logdet +/- z * sqrt(sum_{k=1..p} 2 / (n - k)). Requires
// n > p + 1 so every variance term is based on at least two observations.
std::pair<double, double> logdet_ci(double logdet, std::size_t n,
                                    std::size_t p, double level);

struct LogDetEntry {
  std::string label;
  std::size_t n = 0;       // pooled entry: N - g + 1 (effective sample size)
  double logdet = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool pooled = false;
};

struct BoxMResult {
  double m = 0.0;       // (N-g) log|S_p| - sum_i (n_i-1) log|S_i|
  double c1 = 0.0;      // small-sample correction factor
  double chisq = 0.0;   // (1 - c1) * m
  std::size_t df = 0;   // (g-1) p (p+1) / 2
  double p_value = 1.0;
  double ci_level = 0.95;
  std::vector<LogDetEntry> logdets;  // groups in order, pooled last
};

BoxMResult box_m(const CovSummary& s, double ci_level = 0.95);

// Scalar size summaries of one covariance matrix, all monotone functions of
// its eigenvalues: log product (= log det), sum (= total variance),
// precision (harmonic-mean-style 1 / sum(1/lambda)), and the largest
// eigenvalue.
struct EigSizeStats {
  std::string label;
  bool pooled = false;
  Vector eigenvalues;  // descending
  double log_product = 0.0;
  double sum = 0.0;
  double precision = 0.0;
  double max = 0.0;
};

EigSizeStats eig_size_stats(const SymMatrix& s, const std::string& label,
                            bool pooled = false);
std::vector<EigSizeStats> eig_size_stats_all(const CovSummary& s);

struct ScreeSeries {
  std::string label;
  bool pooled = false;
  Vector log_eigenvalues;  // descending eigenvalue order
};

std::vector<ScreeSeries> scree_data(const CovSummary& s);

}  // namespace eqcov
