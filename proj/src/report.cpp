#include "eqcov/report.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace eqcov {

namespace {

using ordered_json = nlohmann::ordered_json;

// Fixed four decimals for ordinary magnitudes, scientific for the rest.
std::string num(double v) {
  char buf[64];
  const double a = std::abs(v);
  if (v == 0.0 || (a >= 1e-3 && a < 1e7))
    std::snprintf(buf, sizeof buf, "%.4f", v);
  else
    std::snprintf(buf, sizeof buf, "%.4e", v);
  return buf;
}

std::string pval(double p) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", p);
  return buf;
}

std::string pad(const std::string& s, std::size_t width) {
  std::string out = s;
  while (out.size() < width) out += ' ';
  return out;
}

ordered_json manova_table_json(const ManovaResult& r) {
  ordered_json table = ordered_json::array();
  for (const auto& st : r.stats) {
    ordered_json row;
    row["statistic"] = st.name;
    row["value"] = st.value;
    row["f"] = st.f;
    row["df1"] = st.df1;
    row["df2"] = st.df2;
    row["p_value"] = st.p_value;
    row["upper_bound"] = st.upper_bound;
    table.push_back(std::move(row));
  }
  return table;
}

std::string manova_table_text(const ManovaResult& r) {
  std::string out;
  out += pad("statistic", 18) + pad("value", 12) + pad("F", 12) +
         pad("df1", 8) + pad("df2", 10) + "p\n";
  for (const auto& st : r.stats) {
    out += pad(st.name, 18) + pad(num(st.value), 12) + pad(num(st.f), 12) +
           pad(num(st.df1), 8) + pad(num(st.df2), 10) + pval(st.p_value);
    if (st.upper_bound) out += "  (upper bound)";
    out += '\n';
  }
  return out;
}

}  // namespace

std::string to_text(const BoxMResult& r) {
  std::string out = "test: equality of group covariance matrices\n";
  out += "m " + num(r.m) + "\n";
  out += "c1 " + num(r.c1) + "\n";
  out += "chisq " + num(r.chisq) + "\n";
  out += "df " + std::to_string(r.df) + "\n";
  out += "p " + pval(r.p_value) + "\n";
  char head[64];
  std::snprintf(head, sizeof head, "log determinants (%g%% CI):\n",
                r.ci_level * 100.0);
  out += head;
  for (const auto& e : r.logdets) {
    out += "  " + pad(e.label, 14) + "n=" + std::to_string(e.n) + " logdet " +
           num(e.logdet) + " [" + num(e.lower) + ", " + num(e.upper) + "]";
    if (e.pooled) out += " (pooled)";
    out += '\n';
  }
  return out;
}

std::string to_json(const BoxMResult& r) {
  ordered_json j;
  j["analysis"] = "boxm";
  j["m"] = r.m;
  j["c1"] = r.c1;
  j["statistic"] = r.chisq;
  j["df"] = r.df;
  j["p_value"] = r.p_value;
  j["ci_level"] = r.ci_level;
  ordered_json entries = ordered_json::array();
  for (const auto& e : r.logdets) {
    ordered_json je;
    je["label"] = e.label;
    je["n"] = e.n;
    je["logdet"] = e.logdet;
    je["lower"] = e.lower;
    je["upper"] = e.upper;
    je["pooled"] = e.pooled;
    entries.push_back(std::move(je));
  }
  j["log_determinants"] = std::move(entries);
  return j.dump(2) + "\n";
}

std::string to_text(const ManovaResult& r, const std::string& analysis) {
  std::string out;
  if (analysis == "levene")
    out += "test: equality of group dispersions (deviation MANOVA)\n";
  else
    out += "test: equality of group mean vectors (one-way MANOVA)\n";
  out += "eigenvalues";
  for (double v : r.eigenvalues) out += " " + num(v);
  out += '\n';
  out += manova_table_text(r);
  return out;
}

std::string to_json(const ManovaResult& r, const std::string& analysis) {
  ordered_json j;
  j["analysis"] = analysis;
  j["eigenvalues"] = r.eigenvalues;
  j["table"] = manova_table_json(r);
  return j.dump(2) + "\n";
}

std::string to_text(const std::vector<EigSizeStats>& stats) {
  std::string out = "eigenvalue size statistics\n";
  out += pad("label", 14) + pad("log product", 14) + pad("sum", 14) +
         pad("precision", 14) + "max\n";
  for (const auto& s : stats) {
    out += pad(s.label, 14) + pad(num(s.log_product), 14) + pad(num(s.sum), 14) +
           pad(num(s.precision), 14) + num(s.max) + '\n';
  }
  return out;
}

std::string to_json(const std::vector<EigSizeStats>& stats) {
  ordered_json j;
  j["analysis"] = "eigstats";
  ordered_json arr = ordered_json::array();
  for (const auto& s : stats) {
    ordered_json js;
    js["label"] = s.label;
    js["pooled"] = s.pooled;
    js["eigenvalues"] = s.eigenvalues;
    js["log_product"] = s.log_product;
    js["sum"] = s.sum;
    js["precision"] = s.precision;
    js["max"] = s.max;
    arr.push_back(std::move(js));
  }
  j["matrices"] = std::move(arr);
  return j.dump(2) + "\n";
}

std::string to_text(const std::vector<ScreeSeries>& series) {
  std::string out = "log eigenvalue profiles\n";
  for (const auto& s : series) {
    out += pad(s.label, 14);
    for (double v : s.log_eigenvalues) out += " " + num(v);
    if (s.pooled) out += " (pooled)";
    out += '\n';
  }
  return out;
}

std::string to_json(const std::vector<ScreeSeries>& series) {
  ordered_json j;
  j["analysis"] = "scree";
  ordered_json arr = ordered_json::array();
  for (const auto& s : series) {
    ordered_json js;
    js["label"] = s.label;
    js["pooled"] = s.pooled;
    js["log_eigenvalues"] = s.log_eigenvalues;
    arr.push_back(std::move(js));
  }
  j["series"] = std::move(arr);
  return j.dump(2) + "\n";
}

std::string ellipses_to_text(const std::vector<EllipsePanel>& panels,
                             double coverage, double radius) {
  std::string out = "centered covariance ellipses\n";
  out += "coverage " + num(coverage) + "\n";
  out += "radius " + num(radius) + "\n";
  for (const auto& p : panels) {
    out += p.var_y + " vs " + p.var_x + "\n";
    for (const auto& e : p.ellipses) {
      // Report each ellipse's extent along both panel axes.
      double ex = 0.0, ey = 0.0;
      for (const auto& pt : e.boundary) {
        ex = std::max(ex, std::abs(pt[0] - e.center[0]));
        ey = std::max(ey, std::abs(pt[1] - e.center[1]));
      }
      out += "  " + pad(e.label, 14) + "half-extent x " + num(ex) + "  y " +
             num(ey);
      if (e.pooled) out += " (pooled)";
      out += '\n';
    }
  }
  return out;
}

std::string ellipses_to_json(const std::vector<EllipsePanel>& panels,
                             double coverage, double radius) {
  ordered_json j;
  j["analysis"] = "ellipses";
  j["coverage"] = coverage;
  j["radius"] = radius;
  ordered_json jp = ordered_json::array();
  for (const auto& p : panels) {
    ordered_json panel;
    panel["x"] = p.var_x;
    panel["y"] = p.var_y;
    ordered_json ells = ordered_json::array();
    for (const auto& e : p.ellipses) {
      ordered_json je;
      je["label"] = e.label;
      je["pooled"] = e.pooled;
      je["center"] = {e.center[0], e.center[1]};
      ordered_json boundary = ordered_json::array();
      for (const auto& pt : e.boundary)
        boundary.push_back(ordered_json::array({pt[0], pt[1]}));
      je["boundary"] = std::move(boundary);
      ells.push_back(std::move(je));
    }
    panel["ellipses"] = std::move(ells);
    jp.push_back(std::move(panel));
  }
  j["panels"] = std::move(jp);
  return j.dump(2) + "\n";
}

std::string pca_to_text(const PcaProjection& proj,
                        const std::vector<std::string>& variable_names) {
  std::string out = "principal components of the total covariance\n";
  out += pad("component", 12) + pad("eigenvalue", 14) + pad("proportion", 14) +
         "cumulative\n";
  double cum = 0.0;
  for (std::size_t i = 0; i < proj.eigenvalues.size(); ++i) {
    cum += proj.variance_proportions[i];
    out += pad("PC" + std::to_string(i + 1), 12) +
           pad(num(proj.eigenvalues[i]), 14) +
           pad(num(proj.variance_proportions[i]), 14) + num(cum) + '\n';
  }
  out += "loadings (rows = variables)\n";
  for (std::size_t i = 0; i < variable_names.size(); ++i) {
    out += pad(variable_names[i], 16);
    for (std::size_t jcol = 0; jcol < proj.loadings.cols(); ++jcol)
      out += " " + num(proj.loadings(i, jcol));
    out += '\n';
  }
  return out;
}

std::string pca_to_json(const PcaProjection& proj,
                        const std::vector<std::string>& variable_names) {
  ordered_json j;
  j["analysis"] = "pca";
  j["variable_names"] = variable_names;
  j["grand_mean"] = proj.grand_mean;
  j["eigenvalues"] = proj.eigenvalues;
  j["variance_proportions"] = proj.variance_proportions;
  ordered_json cum = ordered_json::array();
  double acc = 0.0;
  for (double v : proj.variance_proportions) {
    acc += v;
    cum.push_back(acc);
  }
  j["cumulative_proportions"] = std::move(cum);
  ordered_json loadings = ordered_json::array();
  for (std::size_t i = 0; i < proj.loadings.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (std::size_t c = 0; c < proj.loadings.cols(); ++c)
      row.push_back(proj.loadings(i, c));
    loadings.push_back(std::move(row));
  }
  j["loadings"] = std::move(loadings);
  return j.dump(2) + "\n";
}

}  // namespace eqcov
