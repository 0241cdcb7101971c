#include "eqcov/numcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace eqcov {

namespace {

void require(bool cond, ErrorCode code, const std::string& msg,
             long detail = -1) {
  if (!cond) throw Error(code, msg, detail);
}

void require_finite(const std::vector<double>& data, const char* what) {
  for (double v : data) {
    require(std::isfinite(v), ErrorCode::InvalidArgument,
            std::string(what) + " contains a non-finite entry");
  }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    require(r.size() == cols_, ErrorCode::InvalidArgument,
            "matrix rows have unequal lengths");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  require(a.cols() == b.rows(), ErrorCode::InvalidArgument,
          "matmul: inner dimensions disagree");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

SymMatrix::SymMatrix(std::size_t dim) : dim_(dim), data_(dim * dim, 0.0) {}

SymMatrix::SymMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : SymMatrix(SymMatrix::from_matrix(Matrix(rows))) {}

SymMatrix SymMatrix::from_matrix(const Matrix& m, double rel_tol) {
  require(m.rows() == m.cols(), ErrorCode::InvalidArgument,
          "symmetric matrix must be square");
  require_finite(m.data(), "matrix");
  double scale = 0.0, worst = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      scale = std::max(scale, std::abs(m(i, j)));
      worst = std::max(worst, std::abs(m(i, j) - m(j, i)));
    }
  }
  require(worst <= rel_tol * std::max(scale, 1.0), ErrorCode::InvalidArgument,
          "matrix is not symmetric within tolerance");
  SymMatrix s(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j <= i; ++j)
      s.set(i, j, 0.5 * (m(i, j) + m(j, i)));
  return s;
}

SymMatrix SymMatrix::identity(std::size_t dim) {
  SymMatrix s(dim);
  for (std::size_t i = 0; i < dim; ++i) s.set(i, i, 1.0);
  return s;
}

Matrix SymMatrix::to_matrix() const {
  Matrix m(dim_, dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) m(i, j) = (*this)(i, j);
  return m;
}

EigenDecomposition sym_eigen(const SymMatrix& s) {
  const std::size_t n = s.dim();
  require(n > 0, ErrorCode::InvalidArgument, "eigen: empty matrix");
  Matrix a = s.to_matrix();
  Matrix v(n, n);
  for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

  double fro2 = 0.0;
  for (double x : a.data()) fro2 += x * x;
  const double stop = fro2 * 1e-30;  // off-diagonal mass target

  for (int sweep = 0; sweep < 64; ++sweep) {
    double off2 = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off2 += 2.0 * a(p, q) * a(p, q);
    if (off2 <= stop) break;
    require(sweep < 63, ErrorCode::InvalidArgument,
            "eigen solve did not converge");

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t =
            (theta >= 0.0 ? 1.0 : -1.0) /
            (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - sn * vkq;
          v(k, q) = sn * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) {
                     return a(i, i) > a(j, j);
                   });
  EigenDecomposition out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
  }
  return out;
}

Matrix cholesky(const SymMatrix& s) {
  const std::size_t n = s.dim();
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = s(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    require(d > 0.0, ErrorCode::NotPositiveDefinite,
            "matrix is not positive definite (pivot " + std::to_string(j) +
                ")",
            static_cast<long>(j));
    l(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double sum = s(i, j);
      for (std::size_t k = 0; k < j; ++k) sum -= l(i, k) * l(j, k);
      l(i, j) = sum / l(j, j);
    }
  }
  return l;
}

double log_det(const SymMatrix& s) {
  Matrix l = cholesky(s);
  double ld = 0.0;
  for (std::size_t i = 0; i < s.dim(); ++i) ld += std::log(l(i, i));
  return 2.0 * ld;
}

Vector forward_solve(const Matrix& l, const Vector& b) {
  const std::size_t n = l.rows();
  require(b.size() == n, ErrorCode::InvalidArgument,
          "solve: size mismatch");
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = b[i];
    for (std::size_t k = 0; k < i; ++k) sum -= l(i, k) * x[k];
    x[i] = sum / l(i, i);
  }
  return x;
}

Vector backward_solve_t(const Matrix& l, const Vector& b) {
  const std::size_t n = l.rows();
  require(b.size() == n, ErrorCode::InvalidArgument,
          "solve: size mismatch");
  Vector x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    double sum = b[ii];
    for (std::size_t k = ii + 1; k < n; ++k) sum -= l(k, ii) * x[k];
    x[ii] = sum / l(ii, ii);
  }
  return x;
}

double mahalanobis_sq(const Vector& y, const Vector& center,
                      const SymMatrix& s) {
  require(y.size() == s.dim() && center.size() == s.dim(),
          ErrorCode::InvalidArgument, "mahalanobis: size mismatch");
  Vector diff(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) diff[i] = y[i] - center[i];
  Matrix l = cholesky(s);
  Vector z = forward_solve(l, diff);
  double acc = 0.0;
  for (double v : z) acc += v * v;
  return acc;
}

namespace detail {

namespace {

constexpr double kEps = 1e-15;
constexpr double kTiny = 1e-300;
constexpr int kMaxIter = 500;

// Series expansion of P(a, x), effective for x < a + 1.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kMaxIter; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a, x), effective for x >= a + 1 (Lentz).
double gamma_q_cf(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for the regularized incomplete beta (Lentz).
double beta_cf(double a, double b, double x) {
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m < kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double regularized_gamma_p(double a, double x) {
  require(a > 0.0 && x >= 0.0, ErrorCode::InvalidArgument,
          "regularized gamma: domain error");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_cf(a, x);
}

double regularized_gamma_q(double a, double x) {
  require(a > 0.0 && x >= 0.0, ErrorCode::InvalidArgument,
          "regularized gamma: domain error");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

double regularized_beta(double a, double b, double x) {
  require(a > 0.0 && b > 0.0, ErrorCode::InvalidArgument,
          "regularized beta: a and b must be positive");
  require(x >= 0.0 && x <= 1.0, ErrorCode::InvalidArgument,
          "regularized beta: x outside [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double front = std::exp(std::lgamma(a + b) - std::lgamma(a) -
                                std::lgamma(b) + a * std::log(x) +
                                b * std::log1p(-x));
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

}  // namespace detail

double chisq_sf(double x, double df) {
  require(df > 0.0, ErrorCode::InvalidArgument,
          "chisq_sf: df must be positive");
  require(x >= 0.0, ErrorCode::InvalidArgument,
          "chisq_sf: x must be nonnegative");
  return detail::regularized_gamma_q(df / 2.0, x / 2.0);
}

double normal_quantile(double prob) {
  require(prob > 0.0 && prob < 1.0, ErrorCode::InvalidArgument,
          "normal_quantile: probability must lie strictly in (0, 1)");

  // Rational approximation (Acklam), then one Halley step against erfc.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425, phigh = 1.0 - plow;
  double x;
  if (prob < plow) {
    const double q = std::sqrt(-2.0 * std::log(prob));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (prob <= phigh) {
    const double q = prob - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-prob));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
          c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - prob;
  const double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
  x -= u / (1.0 + x * u / 2.0);
  return x;
}

double chisq_quantile(double prob, double df) {
  require(df > 0.0, ErrorCode::InvalidArgument,
          "chisq_quantile: df must be positive");
  require(prob >= 0.0 && prob < 1.0, ErrorCode::InvalidArgument,
          "chisq_quantile: probability must lie in [0, 1)");
  if (prob == 0.0) return 0.0;

  // Wilson-Hilferty starting point, then safeguarded Newton on the CDF.
  const double z = normal_quantile(prob);
  const double f = 2.0 / (9.0 * df);
  double x = df * std::pow(1.0 - f + z * std::sqrt(f), 3.0);
  if (!(x > 0.0) || !std::isfinite(x)) x = df;

  double lo = 0.0;
  double hi = std::max(x * 2.0, df + 10.0);
  while (detail::regularized_gamma_p(df / 2.0, hi / 2.0) < prob) {
    lo = hi;
    hi *= 2.0;
    require(std::isfinite(hi), ErrorCode::InvalidArgument,
            "chisq_quantile: bracketing failed");
  }
  if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);

  const double a = df / 2.0;
  for (int it = 0; it < 200; ++it) {
    const double p = detail::regularized_gamma_p(a, x / 2.0);
    if (p > prob)
      hi = x;
    else
      lo = x;
    const double pdf =
        0.5 * std::exp((a - 1.0) * std::log(x / 2.0) - x / 2.0 -
                       std::lgamma(a));
    double next = x - (p - prob) / pdf;
    if (!(next > lo && next < hi) || !std::isfinite(next))
      next = 0.5 * (lo + hi);
    const double step = std::abs(next - x);
    x = next;
    if (step < 1e-12 * std::max(1.0, x)) break;
  }
  return x;
}

double f_sf(double x, double df1, double df2) {
  require(df1 > 0.0 && df2 > 0.0, ErrorCode::InvalidArgument,
          "f_sf: degrees of freedom must be positive");
  require(x >= 0.0, ErrorCode::InvalidArgument, "f_sf: x must be nonnegative");
  if (std::isinf(x)) return 0.0;
  return detail::regularized_beta(df2 / 2.0, df1 / 2.0,
                                  df2 / (df2 + df1 * x));
}

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::ParseError: return "parse_error";
    case ErrorCode::NamedColumnMissing: return "named_column_missing";
    case ErrorCode::DegenerateGroup: return "degenerate_group";
    case ErrorCode::UnknownDataset: return "unknown_dataset";
    case ErrorCode::NotPositiveDefinite: return "not_positive_definite";
    case ErrorCode::InsufficientSample: return "insufficient_sample";
    case ErrorCode::RankDeficient: return "rank_deficient";
    case ErrorCode::DegenerateData: return "degenerate_data";
    case ErrorCode::IoError: return "io_error";
  }
  return "unknown";
}

}  // namespace eqcov
