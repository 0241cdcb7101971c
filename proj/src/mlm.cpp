#include "eqcov/mlm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "eqcov/covstats.hpp"

namespace eqcov {

namespace {

// Eigenvalues of E^{-1} H through the symmetric form L^{-1} H L^{-T} with
// E = L L'. Keeps the problem symmetric so the Jacobi solver applies.
Vector relative_eigenvalues(const SymMatrix& h, const SymMatrix& e) {
  const std::size_t p = h.dim();
  Matrix l;
  try {
    l = cholesky(e);
  } catch (const Error& err) {
    if (err.code() != ErrorCode::NotPositiveDefinite) throw;
    throw Error(ErrorCode::NotPositiveDefinite,
                "within-group SSCP matrix is singular", err.detail());
  }
  // Solve L X = H column by column, then L W = X' -> W = L^{-1} H L^{-T}.
  Matrix x(p, p);
  Vector col(p);
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t i = 0; i < p; ++i) col[i] = h(i, j);
    Vector sol = forward_solve(l, col);
    for (std::size_t i = 0; i < p; ++i) x(i, j) = sol[i];
  }
  Matrix w(p, p);
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t i = 0; i < p; ++i) col[i] = x(j, i);
    Vector sol = forward_solve(l, col);
    for (std::size_t i = 0; i < p; ++i) w(i, j) = sol[i];
  }
  // Symmetrize roundoff before decomposing.
  SymMatrix sym(p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      sym.set(i, j, 0.5 * (w(i, j) + w(j, i)));
  Vector values = sym_eigen(sym).values;
  for (double& v : values) v = std::max(v, 0.0);  // H is PSD
  return values;
}

double safe_f_p(double f, double df1, double df2) {
  if (!(df1 > 0.0) || !(df2 > 0.0)) return 1.0;
  if (std::isinf(f)) return 0.0;
  return f_sf(std::max(f, 0.0), df1, df2);
}

ManovaStat pillai_stat(const Vector& lam, double s, double m, double n) {
  ManovaStat st;
  st.name = "Pillai";
  for (double l : lam) st.value += l / (1.0 + l);
  st.df1 = s * (2.0 * m + s + 1.0);
  st.df2 = s * (2.0 * n + s + 1.0);
  const double denom = s - st.value;
  st.f = denom > 0.0
             ? (2.0 * n + s + 1.0) / (2.0 * m + s + 1.0) * st.value / denom
             : std::numeric_limits<double>::infinity();
  st.p_value = safe_f_p(st.f, st.df1, st.df2);
  return st;
}

ManovaStat wilks_stat(const Vector& lam, double p, double q, double v) {
  ManovaStat st;
  st.name = "Wilks";
  st.value = 1.0;
  for (double l : lam) st.value /= 1.0 + l;
  const double pq = p * q;
  const double t = (p * p + q * q - 5.0 > 0.0)
                       ? std::sqrt((pq * pq - 4.0) / (p * p + q * q - 5.0))
                       : 1.0;
  const double r = v - (p - q + 1.0) / 2.0;
  const double u = (pq - 2.0) / 4.0;
  st.df1 = pq;
  st.df2 = r * t - 2.0 * u;
  st.f = st.value > 0.0
             ? (std::pow(st.value, -1.0 / t) - 1.0) * st.df2 / pq
             : std::numeric_limits<double>::infinity();
  st.p_value = safe_f_p(st.f, st.df1, st.df2);
  return st;
}

ManovaStat hotelling_stat(const Vector& lam, double p, double q, double s,
                          double m, double n) {
  ManovaStat st;
  st.name = "Hotelling-Lawley";
  for (double l : lam) st.value += l;
  const double pq = p * q;
  if (n > 1.0) {
    // McKeon's F approximation; exact for two groups (Hotelling T^2).
    const double b =
        (p + 2.0 * n) * (q + 2.0 * n) / (2.0 * (2.0 * n + 1.0) * (n - 1.0));
    const double df2 = 4.0 + (pq + 2.0) / (b - 1.0);
    const double c = (df2 - 2.0) / (2.0 * n);
    st.df1 = pq;
    st.df2 = df2;
    st.f = (st.value / c) * (df2 / pq);
  } else {
    st.df1 = s * (2.0 * m + s + 1.0);
    st.df2 = 2.0 * (s * n + 1.0);
    st.f = st.value * st.df2 / (s * s * (2.0 * m + s + 1.0));
  }
  st.p_value = safe_f_p(st.f, st.df1, st.df2);
  return st;
}

ManovaStat roy_stat(const Vector& lam, double p, double q, double v) {
  ManovaStat st;
  st.name = "Roy";
  st.value = lam.empty() ? 0.0 : lam.front();
  const double d = std::max(p, q);
  st.df1 = d;
  st.df2 = v - d + 1.0;
  st.f = st.value * st.df2 / d;
  st.p_value = safe_f_p(st.f, st.df1, st.df2);
  st.upper_bound = true;  // uses only the largest root; the p-value is a
                          // lower bound, the F an upper bound
  return st;
}

double column_center(Vector column, const CenterSpec& spec) {
  const std::size_t n = column.size();
  // A constant column's center is that constant for every center kind; the
  // short-circuit keeps the deviations of constant groups exactly zero
  // instead of within rounding of zero.
  if (std::all_of(column.begin(), column.end(),
                  [&](double v) { return v == column.front(); }))
    return column.front();
  switch (spec.kind) {
    case LeveneCenter::Mean: {
      double acc = 0.0;
      for (double v : column) acc += v;
      return acc / static_cast<double>(n);
    }
    case LeveneCenter::Median: {
      std::sort(column.begin(), column.end());
      if (n % 2 == 1) return column[n / 2];
      return 0.5 * (column[n / 2 - 1] + column[n / 2]);
    }
    case LeveneCenter::Trimmed: {
      std::sort(column.begin(), column.end());
      const double k = spec.trim_fraction * static_cast<double>(n);
      const std::size_t j = static_cast<std::size_t>(std::floor(k));
      const double r = k - static_cast<double>(j);
      // Symmetric trimming with fractional endpoints: the two boundary
      // order statistics get weight (1 - r).
      double acc = 0.0;
      for (std::size_t i = j + 1; i + j + 1 < n; ++i) acc += column[i];
      acc += (1.0 - r) * (column[j] + column[n - 1 - j]);
      return acc / (static_cast<double>(n) - 2.0 * k);
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown center kind");
}

}  // namespace

ManovaResult manova(const GroupedDataset& d) {
  const std::size_t p = d.n_vars();
  const std::size_t g = d.n_groups();
  const std::size_t n_total = d.n_rows();
  if (n_total - g < p && g > 1)
    throw Error(ErrorCode::NotPositiveDefinite,
                "within-group SSCP matrix is singular (need N - g >= p)");

  CovSummary cs = summarize(d);
  Vector grand(p, 0.0);
  for (std::size_t i = 0; i < n_total; ++i)
    for (std::size_t j = 0; j < p; ++j) grand[j] += d.values(i, j);
  for (double& v : grand) v /= static_cast<double>(n_total);

  ManovaResult out;
  out.h = SymMatrix(p);
  out.e = SymMatrix(p);
  for (std::size_t a = 0; a < p; ++a) {
    for (std::size_t b = a; b < p; ++b) {
      double hab = 0.0, eab = 0.0;
      for (const auto& grp : cs.groups) {
        hab += static_cast<double>(grp.n) * (grp.mean[a] - grand[a]) *
               (grp.mean[b] - grand[b]);
        eab += static_cast<double>(grp.n - 1) * grp.cov(a, b);
      }
      out.h.set(a, b, hab);
      out.e.set(a, b, eab);
    }
  }

  const double pd = static_cast<double>(p);
  const double q = static_cast<double>(g - 1);
  const double v = static_cast<double>(n_total - g);

  if (g == 1) {
    out.eigenvalues = {};
    ManovaStat zero;
    zero.p_value = 1.0;
    for (const char* name : {"Pillai", "Wilks", "Hotelling-Lawley", "Roy"}) {
      ManovaStat st = zero;
      st.name = name;
      st.value = (st.name == "Wilks") ? 1.0 : 0.0;
      st.upper_bound = (st.name == "Roy");
      out.stats.push_back(st);
    }
    return out;
  }

  Vector all = relative_eigenvalues(out.h, out.e);
  const std::size_t s_count = std::min<std::size_t>(p, g - 1);
  out.eigenvalues.assign(all.begin(), all.begin() + s_count);

  const double s = static_cast<double>(s_count);
  const double m = (std::abs(pd - q) - 1.0) / 2.0;
  const double n = (v - pd - 1.0) / 2.0;

  out.stats.push_back(pillai_stat(out.eigenvalues, s, m, n));
  out.stats.push_back(wilks_stat(out.eigenvalues, pd, q, v));
  out.stats.push_back(hotelling_stat(out.eigenvalues, pd, q, s, m, n));
  out.stats.push_back(roy_stat(out.eigenvalues, pd, q, v));
  return out;
}

CenterSpec CenterSpec::parse(const std::string& text) {
  CenterSpec spec;
  if (text == "median") {
    spec.kind = LeveneCenter::Median;
    return spec;
  }
  if (text == "mean") {
    spec.kind = LeveneCenter::Mean;
    return spec;
  }
  if (text == "trimmed") {
    spec.kind = LeveneCenter::Trimmed;
    return spec;
  }
  if (text.rfind("trimmed:", 0) == 0) {
    spec.kind = LeveneCenter::Trimmed;
    const std::string frac = text.substr(8);
    char* end = nullptr;
    spec.trim_fraction = std::strtod(frac.c_str(), &end);
    if (frac.empty() || (end && *end != '\0'))
      throw Error(ErrorCode::InvalidArgument,
                  "bad trim fraction '" + frac + "'");
    return spec;
  }
  throw Error(ErrorCode::InvalidArgument,
              "unknown center '" + text +
                  "' (expected median, mean, or trimmed[:fraction])");
}

GroupedDataset levene_deviations(const GroupedDataset& d,
                                 const CenterSpec& center) {
  if (center.kind == LeveneCenter::Trimmed &&
      !(center.trim_fraction >= 0.0 && center.trim_fraction < 0.5))
    throw Error(ErrorCode::InvalidArgument,
                "trim fraction must lie in [0, 0.5)");

  const std::size_t p = d.n_vars();
  Matrix z(d.n_rows(), p);
  for (std::size_t k = 0; k < d.n_groups(); ++k) {
    const auto rows = d.rows_of_group(k);
    if (rows.empty()) continue;
    for (std::size_t j = 0; j < p; ++j) {
      Vector column;
      column.reserve(rows.size());
      for (std::size_t r : rows) column.push_back(d.values(r, j));
      const double c = column_center(std::move(column), center);
      for (std::size_t r : rows) z(r, j) = std::abs(d.values(r, j) - c);
    }
  }
  std::vector<std::string> labels;
  labels.reserve(d.n_rows());
  for (std::size_t i = 0; i < d.n_rows(); ++i)
    labels.push_back(d.group_names[d.group_index[i]]);
  return make_grouped_dataset(std::move(z), std::move(labels),
                              d.variable_names);
}

DesignMatrix design_intercept(std::size_t n_rows) {
  DesignMatrix x;
  x.values = Matrix(n_rows, 1, 1.0);
  return x;
}

DesignMatrix design_group_indicators(const GroupedDataset& d) {
  DesignMatrix x;
  x.values = Matrix(d.n_rows(), d.n_groups());
  for (std::size_t i = 0; i < d.n_rows(); ++i)
    x.values(i, d.group_index[i]) = 1.0;
  return x;
}

void append_column(DesignMatrix& x, const Vector& column) {
  if (x.values.rows() != column.size())
    throw Error(ErrorCode::InvalidArgument,
                "design column length does not match row count");
  Matrix next(x.values.rows(), x.values.cols() + 1);
  for (std::size_t i = 0; i < x.values.rows(); ++i) {
    for (std::size_t j = 0; j < x.values.cols(); ++j)
      next(i, j) = x.values(i, j);
    next(i, x.values.cols()) = column[i];
  }
  x.values = next;
}

Matrix residualize(const Matrix& y, const DesignMatrix& x) {
  const std::size_t n = y.rows();
  const std::size_t k = x.values.cols();
  if (x.values.rows() != n)
    throw Error(ErrorCode::InvalidArgument,
                "design and response row counts differ");
  if (n <= k)
    throw Error(ErrorCode::RankDeficient,
                "design matrix has no residual degrees of freedom");

  // Normal equations via Cholesky of the Gram matrix.
  SymMatrix gram(k);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a; b < k; ++b) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        acc += x.values(i, a) * x.values(i, b);
      gram.set(a, b, acc);
    }
  }
  Matrix l;
  try {
    l = cholesky(gram);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotPositiveDefinite) throw;
    throw Error(ErrorCode::RankDeficient, "design matrix is rank deficient",
                e.detail());
  }
  // A collinear design can survive factorization with a pivot at round-off
  // scale; treat such pivots as rank deficiency rather than dividing by
  // them. The factor diagonal carries the square root of each pivot, so a
  // ratio of 1e-7 marks pivots near double round-off.
  double max_diag = 0.0;
  for (std::size_t a = 0; a < k; ++a) max_diag = std::max(max_diag, l(a, a));
  for (std::size_t a = 0; a < k; ++a)
    if (l(a, a) <= 1e-7 * max_diag)
      throw Error(ErrorCode::RankDeficient, "design matrix is rank deficient",
                  static_cast<long>(a));

  Matrix resid = y;
  Vector xty(k), beta(k);
  for (std::size_t j = 0; j < y.cols(); ++j) {
    for (std::size_t a = 0; a < k; ++a) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) acc += x.values(i, a) * y(i, j);
      xty[a] = acc;
    }
    beta = backward_solve_t(l, forward_solve(l, xty));
    for (std::size_t i = 0; i < n; ++i) {
      double fit = 0.0;
      for (std::size_t a = 0; a < k; ++a) fit += x.values(i, a) * beta[a];
      resid(i, j) -= fit;
    }
  }
  return resid;
}

}  // namespace eqcov
