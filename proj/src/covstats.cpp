#include "eqcov/covstats.hpp"

#include <algorithm>
#include <cmath>

namespace eqcov {

namespace {

// Re-throw factorization failures with the offending matrix named.
double labeled_log_det(const SymMatrix& s, const std::string& label) {
  try {
    return log_det(s);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotPositiveDefinite) throw;
    throw Error(e.code(),
                "covariance matrix '" + label + "' is not positive definite",
                e.detail());
  }
}

Vector positive_eigenvalues(const SymMatrix& s, const std::string& label) {
  auto eig = sym_eigen(s);
  if (eig.values.back() <= 0.0)
    throw Error(ErrorCode::NotPositiveDefinite,
                "covariance matrix '" + label + "' is not positive definite");
  return eig.values;
}

}  // namespace

CovSummary summarize(const GroupedDataset& d) {
  const std::size_t p = d.n_vars();
  CovSummary out;
  out.n_total = d.n_rows();
  out.n_vars = p;
  out.variable_names = d.variable_names;
  out.pooled = SymMatrix(p);

  for (std::size_t k = 0; k < d.n_groups(); ++k) {
    const auto rows = d.rows_of_group(k);
    if (rows.size() < 2)
      throw Error(ErrorCode::DegenerateGroup,
                  "group '" + d.group_names[k] + "' has fewer than 2 rows");
    GroupCov g;
    g.name = d.group_names[k];
    g.n = rows.size();
    g.mean.assign(p, 0.0);
    for (std::size_t r : rows)
      for (std::size_t j = 0; j < p; ++j) g.mean[j] += d.values(r, j);
    for (double& m : g.mean) m /= static_cast<double>(g.n);

    g.cov = SymMatrix(p);
    for (std::size_t a = 0; a < p; ++a) {
      for (std::size_t b = a; b < p; ++b) {
        double acc = 0.0;
        for (std::size_t r : rows)
          acc += (d.values(r, a) - g.mean[a]) * (d.values(r, b) - g.mean[b]);
        g.cov.set(a, b, acc / static_cast<double>(g.n - 1));
      }
    }
    out.groups.push_back(std::move(g));
  }

  const double denom =
      static_cast<double>(out.n_total - out.groups.size());
  for (std::size_t a = 0; a < p; ++a) {
    for (std::size_t b = a; b < p; ++b) {
      double acc = 0.0;
      for (const auto& g : out.groups)
        acc += static_cast<double>(g.n - 1) * g.cov(a, b);
      out.pooled.set(a, b, acc / denom);
    }
  }
  return out;
}

std::pair<double, double> logdet_ci(double logdet, std::size_t n,
                                    std::size_t p, double level) {
  if (!(level > 0.0 && level < 1.0))
    throw Error(ErrorCode::InvalidArgument,
                "confidence level must lie strictly in (0, 1)");
  if (p == 0)
    throw Error(ErrorCode::InvalidArgument, "dimension must be positive");
  if (n <= p + 1)
    throw Error(ErrorCode::InsufficientSample,
                "sample size " + std::to_string(n) +
                    " is too small for a log-determinant interval in " +
                    std::to_string(p) + " dimensions (need n > p + 1)");
  double var = 0.0;
  for (std::size_t k = 1; k <= p; ++k)
    var += 2.0 / static_cast<double>(n - k);
  const double half =
      normal_quantile(0.5 * (1.0 + level)) * std::sqrt(var);
  return {logdet - half, logdet + half};
}

BoxMResult box_m(const CovSummary& s, double ci_level) {
  const std::size_t g = s.n_groups();
  const std::size_t p = s.n_vars;
  if (g < 2)
    throw Error(ErrorCode::InvalidArgument,
                "the test needs at least two groups");
  if (!(ci_level > 0.0 && ci_level < 1.0))
    throw Error(ErrorCode::InvalidArgument,
                "confidence level must lie strictly in (0, 1)");

  BoxMResult out;
  out.ci_level = ci_level;

  const double nu = static_cast<double>(s.n_total - g);
  const double pooled_ld = labeled_log_det(s.pooled, "pooled");
  double m = nu * pooled_ld;
  double inv_sum = 0.0;
  for (const auto& grp : s.groups) {
    const double ld = labeled_log_det(grp.cov, grp.name);
    m -= static_cast<double>(grp.n - 1) * ld;
    inv_sum += 1.0 / static_cast<double>(grp.n - 1);

    LogDetEntry e;
    e.label = grp.name;
    e.n = grp.n;
    e.logdet = ld;
    std::tie(e.lower, e.upper) = logdet_ci(ld, grp.n, p, ci_level);
    out.logdets.push_back(std::move(e));
  }
  // m is nonnegative by the concavity of log det; clamp roundoff residue so
  // identical groups report exactly zero.
  out.m = std::max(0.0, m);

  const double pd = static_cast<double>(p);
  const double gd = static_cast<double>(g);
  out.c1 = (inv_sum - 1.0 / nu) * (2.0 * pd * pd + 3.0 * pd - 1.0) /
           (6.0 * (pd + 1.0) * (gd - 1.0));
  out.chisq = std::max(0.0, (1.0 - out.c1) * out.m);
  out.df = (g - 1) * p * (p + 1) / 2;
  out.p_value = chisq_sf(out.chisq, static_cast<double>(out.df));

  LogDetEntry pe;
  pe.label = "pooled";
  pe.pooled = true;
  pe.n = s.n_total - g + 1;
  pe.logdet = pooled_ld;
  std::tie(pe.lower, pe.upper) = logdet_ci(pooled_ld, pe.n, p, ci_level);
  out.logdets.push_back(std::move(pe));
  return out;
}

EigSizeStats eig_size_stats(const SymMatrix& s, const std::string& label,
                            bool pooled) {
  EigSizeStats out;
  out.label = label;
  out.pooled = pooled;
  out.eigenvalues = positive_eigenvalues(s, label);

  double logp = 0.0, sum = 0.0, inv = 0.0;
  for (double v : out.eigenvalues) {
    logp += std::log(v);
    sum += v;
    inv += 1.0 / v;
  }
  out.log_product = logp;
  out.sum = sum;
  out.precision = 1.0 / inv;
  out.max = out.eigenvalues.front();
  return out;
}

std::vector<EigSizeStats> eig_size_stats_all(const CovSummary& s) {
  std::vector<EigSizeStats> out;
  out.reserve(s.n_groups() + 1);
  for (const auto& g : s.groups)
    out.push_back(eig_size_stats(g.cov, g.name));
  out.push_back(eig_size_stats(s.pooled, "pooled", true));
  return out;
}

std::vector<ScreeSeries> scree_data(const CovSummary& s) {
  std::vector<ScreeSeries> out;
  out.reserve(s.n_groups() + 1);
  auto series = [](const SymMatrix& m, const std::string& label, bool pooled) {
    ScreeSeries sr;
    sr.label = label;
    sr.pooled = pooled;
    for (double v : positive_eigenvalues(m, label))
      sr.log_eigenvalues.push_back(std::log(v));
    return sr;
  };
  for (const auto& g : s.groups) out.push_back(series(g.cov, g.name, false));
  out.push_back(series(s.pooled, "pooled", true));
  return out;
}

}  // namespace eqcov
