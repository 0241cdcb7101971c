#include "eqcov/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace eqcov {

namespace {

// All coordinates are written as plain fixed-point decimals so output is
// byte-stable and never falls into exponent notation.
std::string fmt(double v, int decimals = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  std::string s = buf;
  if (s == "-0" || s.rfind("-0.", 0) == 0) {
    bool zero = true;
    for (char c : s)
      if (c >= '1' && c <= '9') zero = false;
    if (zero) s = s.substr(1);
  }
  return s;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  // Expand 5% per side; degenerate spans widen symmetrically so every value
  // still lands strictly inside the panel.
  Range padded() const {
    double span = hi - lo;
    if (!(span > 0.0)) span = std::max(1.0, std::abs(lo) * 0.1);
    return Range{lo - 0.05 * span, hi + 0.05 * span};
  }
};

struct Scale {
  double d0 = 0.0, d1 = 1.0;  // domain
  double r0 = 0.0, r1 = 1.0;  // range (pixels)
  double operator()(double v) const {
    return r0 + (v - d0) / (d1 - d0) * (r1 - r0);
  }
};

struct Ticks {
  double step = 1.0;
  int decimals = 0;
  std::vector<double> values;
};

// Classic 1-2-5 tick chooser.
Ticks nice_ticks(double lo, double hi, int target = 5) {
  Ticks t;
  const double span = hi - lo;
  const double raw = span / std::max(1, target);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  t.step = 10.0 * mag;
  for (double mult : {1.0, 2.0, 5.0}) {
    if (raw <= mult * mag) {
      t.step = mult * mag;
      break;
    }
  }
  t.decimals = std::max(0, static_cast<int>(std::ceil(
                               -std::log10(t.step) - 1e-9)));
  double v = std::ceil(lo / t.step - 1e-9) * t.step;
  for (; v <= hi + 1e-9 * span; v += t.step) t.values.push_back(v);
  return t;
}

class Svg {
 public:
  Svg(double width, double height) {
    body_ += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    body_ += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
             fmt(width, 0) + "\" height=\"" + fmt(height, 0) +
             "\" viewBox=\"0 0 " + fmt(width, 0) + " " + fmt(height, 0) +
             "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    body_ += "<rect class=\"bg\" x=\"0\" y=\"0\" width=\"" + fmt(width, 0) +
             "\" height=\"" + fmt(height, 0) + "\" fill=\"#ffffff\"/>\n";
  }

  void open_group(const std::string& cls) {
    body_ += "<g class=\"" + cls + "\">\n";
  }
  void close_group() { body_ += "</g>\n"; }

  void frame(double x, double y, double w, double h) {
    body_ += "<rect class=\"frame\" x=\"" + fmt(x) + "\" y=\"" + fmt(y) +
             "\" width=\"" + fmt(w) + "\" height=\"" + fmt(h) +
             "\" fill=\"none\" stroke=\"#888888\" stroke-width=\"1\"/>\n";
  }

  void line(const std::string& cls, double x1, double y1, double x2, double y2,
            const std::string& stroke, double width = 1.0) {
    body_ += "<line class=\"" + cls + "\" x1=\"" + fmt(x1) + "\" y1=\"" +
             fmt(y1) + "\" x2=\"" + fmt(x2) + "\" y2=\"" + fmt(y2) +
             "\" stroke=\"" + stroke + "\" stroke-width=\"" + fmt(width, 1) +
             "\"/>\n";
  }

  void circle(const std::string& cls, double cx, double cy, double r,
              const std::string& fill) {
    body_ += "<circle class=\"" + cls + "\" cx=\"" + fmt(cx) + "\" cy=\"" +
             fmt(cy) + "\" r=\"" + fmt(r, 1) + "\" fill=\"" + fill + "\"/>\n";
  }

  void text(const std::string& cls, double x, double y,
            const std::string& content, const std::string& fill = "#222222",
            const std::string& anchor = "start") {
    body_ += "<text class=\"" + cls + "\" x=\"" + fmt(x) + "\" y=\"" + fmt(y) +
             "\" fill=\"" + fill + "\" text-anchor=\"" + anchor + "\">" +
             xml_escape(content) + "</text>\n";
  }

  void raw(const std::string& s) { body_ += s; }

  std::string finish() {
    body_ += "</svg>\n";
    return body_;
  }

 private:
  std::string body_;
};

std::string group_color(const FigureSpec& spec, std::size_t k) {
  return spec.palette[k % spec.palette.size()];
}

// Bottom x-axis with ticks and labels.
void draw_x_axis(Svg& svg, const Scale& sx, const Ticks& ticks, double y_base) {
  for (double v : ticks.values) {
    const double x = sx(v);
    svg.line("tick", x, y_base, x, y_base + 4.0, "#888888");
    svg.text("ticklabel", x, y_base + 16.0, fmt(v, ticks.decimals), "#222222",
             "middle");
  }
}

void draw_y_axis(Svg& svg, const Scale& sy, const Ticks& ticks, double x_base) {
  for (double v : ticks.values) {
    const double y = sy(v);
    svg.line("tick", x_base - 4.0, y, x_base, y, "#888888");
    svg.text("ticklabel", x_base - 7.0, y + 3.5, fmt(v, ticks.decimals),
             "#222222", "end");
  }
}

void draw_ellipse_path(Svg& svg, const Ellipse2D& e, const Scale& sx,
                       const Scale& sy, const FigureSpec& spec,
                       std::size_t group_idx) {
  std::string d;
  for (std::size_t i = 0; i < e.boundary.size(); ++i) {
    d += (i == 0) ? "M" : " L";
    d += fmt(sx(e.boundary[i][0])) + " " + fmt(sy(e.boundary[i][1]));
  }
  d += " Z";
  std::string attrs;
  if (e.pooled) {
    attrs = "class=\"ellipse pooled\" fill=\"" + spec.pooled_color +
            "\" fill-opacity=\"" + fmt(spec.pooled_fill_opacity, 2) +
            "\" stroke=\"" + spec.pooled_color + "\" stroke-width=\"2.5\"";
  } else {
    attrs = "class=\"ellipse\" fill=\"none\" stroke=\"" +
            group_color(spec, group_idx) + "\" stroke-width=\"1.5\"";
  }
  svg.raw("<path " + attrs + " d=\"" + d + "\"/>\n");
}

// Horizontal legend row: one colored label per series.
void draw_legend(Svg& svg, const FigureSpec& spec,
                 const std::vector<std::string>& labels,
                 const std::vector<bool>& pooled, double y) {
  const double x0 = spec.margin;
  const double dx =
      (spec.width - 2.0 * spec.margin) / std::max<std::size_t>(1, labels.size());
  std::size_t color_idx = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::string color =
        pooled[i] ? spec.pooled_color : group_color(spec, color_idx++);
    svg.text("legend", x0 + dx * static_cast<double>(i), y, labels[i], color);
  }
}

}  // namespace

std::string render_ellipse_matrix(const std::vector<EllipsePanel>& panels,
                                  const FigureSpec& spec) {
  if (panels.empty())
    throw Error(ErrorCode::InvalidArgument, "no panels to draw");

  // Recover the lower-triangle grid from the panel pair labels: x variables
  // in order of first appearance give columns, y variables give rows.
  std::vector<std::string> xs, ys;
  auto index_of = [](std::vector<std::string>& v, const std::string& s) {
    auto it = std::find(v.begin(), v.end(), s);
    if (it == v.end()) {
      v.push_back(s);
      return v.size() - 1;
    }
    return static_cast<std::size_t>(it - v.begin());
  };
  std::vector<std::pair<std::size_t, std::size_t>> cells;  // (col, row)
  for (const auto& p : panels)
    cells.emplace_back(index_of(xs, p.var_x), index_of(ys, p.var_y));
  const std::size_t n_cols = xs.size(), n_rows = ys.size();

  Svg svg(spec.width, spec.height);
  const double legend_h = 20.0;
  const double x0 = spec.margin, y0 = spec.margin + legend_h;
  const double cw = (spec.width - 2.0 * spec.margin) / n_cols;
  const double ch = (spec.height - spec.margin - y0) / n_rows;
  const double pad = 6.0;

  if (!panels.front().ellipses.empty()) {
    std::vector<std::string> labels;
    std::vector<bool> pooled;
    for (const auto& e : panels.front().ellipses) {
      labels.push_back(e.label);
      pooled.push_back(e.pooled);
    }
    draw_legend(svg, spec, labels, pooled, spec.margin);
  }

  for (std::size_t i = 0; i < panels.size(); ++i) {
    const auto& panel = panels[i];
    const double px = x0 + cells[i].first * cw + pad;
    const double py = y0 + cells[i].second * ch + pad;
    const double pw = cw - 2.0 * pad, ph = ch - 2.0 * pad;

    Range rx, ry;
    for (const auto& e : panel.ellipses) {
      for (const auto& pt : e.boundary) {
        rx.add(pt[0]);
        ry.add(pt[1]);
      }
    }
    const Range prx = rx.padded(), pry = ry.padded();
    const Scale sx{prx.lo, prx.hi, px, px + pw};
    const Scale sy{pry.lo, pry.hi, py + ph, py};  // y grows upward

    svg.open_group("panel");
    svg.frame(px, py, pw, ph);
    // Origin crosshair: the ellipses are centered for shape comparison.
    if (prx.lo < 0.0 && prx.hi > 0.0)
      svg.line("axis0", sx(0.0), py, sx(0.0), py + ph, "#dddddd");
    if (pry.lo < 0.0 && pry.hi > 0.0)
      svg.line("axis0", px, sy(0.0), px + pw, sy(0.0), "#dddddd");

    std::size_t gidx = 0;
    for (const auto& e : panel.ellipses) {
      draw_ellipse_path(svg, e, sx, sy, spec, gidx);
      if (!e.pooled) ++gidx;
    }
    svg.text("title", px + 4.0, py + 13.0,
             panel.var_y + " vs " + panel.var_x, "#444444");
    svg.close_group();
  }
  return svg.finish();
}

std::string render_logdet_dotplot(const BoxMResult& result,
                                  const FigureSpec& spec) {
  const auto& entries = result.logdets;
  if (entries.empty())
    throw Error(ErrorCode::InvalidArgument, "no entries to draw");

  Range rx;
  for (const auto& e : entries) {
    rx.add(e.lower);
    rx.add(e.upper);
  }
  const Range prx = rx.padded();

  Svg svg(spec.width, spec.height);
  const double x0 = spec.margin + 60.0;  // room for row labels
  const double x1 = spec.width - spec.margin;
  const double y0 = spec.margin;
  const double y1 = spec.height - spec.margin;
  const Scale sx{prx.lo, prx.hi, x0, x1};
  const double row_h = (y1 - y0) / static_cast<double>(entries.size());

  svg.open_group("panel");
  svg.frame(x0, y0, x1 - x0, y1 - y0);
  const Ticks tx = nice_ticks(prx.lo, prx.hi);
  draw_x_axis(svg, sx, tx, y1);
  svg.text("axislabel", (x0 + x1) / 2.0, y1 + 34.0,
           "log determinant of covariance", "#222222", "middle");

  std::size_t gidx = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    const double y = y0 + row_h * (static_cast<double>(i) + 0.5);
    const std::string color =
        e.pooled ? spec.pooled_color : group_color(spec, gidx++);
    const std::string cls = e.pooled ? " pooled" : "";
    svg.line("ci" + cls, sx(e.lower), y, sx(e.upper), y, color,
             e.pooled ? 3.0 : 1.8);
    svg.circle("pt" + cls, sx(e.logdet), y, e.pooled ? 5.0 : 3.6, color);
    svg.text("rowlabel", x0 - 8.0, y + 3.5, e.label, "#222222", "end");
  }
  svg.close_group();
  return svg.finish();
}

std::string render_scree(const std::vector<ScreeSeries>& series,
                         const FigureSpec& spec, std::size_t panel_split) {
  if (series.empty())
    throw Error(ErrorCode::InvalidArgument, "no series to draw");
  const std::size_t p = series.front().log_eigenvalues.size();
  for (const auto& s : series)
    if (s.log_eigenvalues.size() != p)
      throw Error(ErrorCode::InvalidArgument,
                  "series have unequal dimension counts");
  if (p == 0)
    throw Error(ErrorCode::InvalidArgument, "series are empty");
  if (panel_split >= p && panel_split != 0)
    throw Error(ErrorCode::InvalidArgument,
                "split index must be smaller than the dimension count");

  // Dimension windows per panel (1-based, inclusive).
  std::vector<std::pair<std::size_t, std::size_t>> windows;
  if (panel_split == 0)
    windows.emplace_back(1, p);
  else {
    windows.emplace_back(1, panel_split);
    windows.emplace_back(panel_split + 1, p);
  }

  Svg svg(spec.width, spec.height);
  const double legend_h = 20.0;
  const double gap = 28.0;
  const double panel_w =
      (spec.width - 2.0 * spec.margin - gap * (windows.size() - 1)) /
      static_cast<double>(windows.size());
  const double y0 = spec.margin + legend_h;
  const double y1 = spec.height - spec.margin;

  {
    std::vector<std::string> labels;
    std::vector<bool> pooled;
    for (const auto& s : series) {
      labels.push_back(s.label);
      pooled.push_back(s.pooled);
    }
    draw_legend(svg, spec, labels, pooled, spec.margin);
  }

  for (std::size_t w = 0; w < windows.size(); ++w) {
    const auto [d0, d1] = windows[w];
    const double px = spec.margin + w * (panel_w + gap);

    Range ry;
    for (const auto& s : series)
      for (std::size_t dim = d0; dim <= d1; ++dim)
        ry.add(s.log_eigenvalues[dim - 1]);
    const Range pry = ry.padded();
    // x domain padded by half a step so first/last points sit inside.
    const Scale sx{static_cast<double>(d0) - 0.5,
                   static_cast<double>(d1) + 0.5, px, px + panel_w};
    const Scale sy{pry.lo, pry.hi, y1, y0};

    svg.open_group("panel");
    svg.frame(px, y0, panel_w, y1 - y0);
    for (std::size_t dim = d0; dim <= d1; ++dim) {
      const double x = sx(static_cast<double>(dim));
      svg.line("tick", x, y1, x, y1 + 4.0, "#888888");
      svg.text("ticklabel", x, y1 + 16.0, std::to_string(dim), "#222222",
               "middle");
    }
    const Ticks ty = nice_ticks(pry.lo, pry.hi);
    draw_y_axis(svg, sy, ty, px);
    svg.text("axislabel", px + panel_w / 2.0, y1 + 34.0, "dimension",
             "#222222", "middle");

    std::size_t gidx = 0;
    for (const auto& s : series) {
      const std::string color =
          s.pooled ? spec.pooled_color : group_color(spec, gidx++);
      std::string pts;
      for (std::size_t dim = d0; dim <= d1; ++dim) {
        if (!pts.empty()) pts += " ";
        pts += fmt(sx(static_cast<double>(dim))) + "," +
               fmt(sy(s.log_eigenvalues[dim - 1]));
      }
      svg.raw("<polyline class=\"series" +
              std::string(s.pooled ? " pooled" : "") + "\" fill=\"none\" " +
              "stroke=\"" + color + "\" stroke-width=\"" +
              fmt(s.pooled ? 3.0 : 1.5, 1) + "\" points=\"" + pts + "\"/>\n");
      if (s.pooled)
        svg.text("series-mark", sx(static_cast<double>(d1)) + 5.0,
                 sy(s.log_eigenvalues[d1 - 1]) + 4.0, "p", spec.pooled_color);
    }
    svg.close_group();
  }
  return svg.finish();
}

std::string render_eigstats_grid(const std::vector<EigSizeStats>& stats,
                                 const FigureSpec& spec) {
  if (stats.empty())
    throw Error(ErrorCode::InvalidArgument, "no statistics to draw");

  struct Panel {
    const char* title;
    double (*get)(const EigSizeStats&);
  };
  const Panel panel_defs[4] = {
      {"log product", [](const EigSizeStats& s) { return s.log_product; }},
      {"sum", [](const EigSizeStats& s) { return s.sum; }},
      {"precision", [](const EigSizeStats& s) { return s.precision; }},
      {"max", [](const EigSizeStats& s) { return s.max; }},
  };

  Svg svg(spec.width, spec.height);
  const double label_w = 66.0;
  const double gap = 18.0;
  const double cw = (spec.width - 2.0 * spec.margin - gap) / 2.0;
  const double ch = (spec.height - 2.0 * spec.margin - gap) / 2.0;

  for (int pi = 0; pi < 4; ++pi) {
    const double px = spec.margin + (pi % 2) * (cw + gap) + label_w;
    const double py = spec.margin + (pi / 2) * (ch + gap) + 18.0;
    const double pw = cw - label_w;
    const double ph = ch - 44.0;

    Range rx;
    for (const auto& s : stats) rx.add(panel_defs[pi].get(s));
    const Range prx = rx.padded();
    const Scale sx{prx.lo, prx.hi, px, px + pw};
    const double row_h = ph / static_cast<double>(stats.size());

    svg.open_group("panel");
    svg.text("title", px - label_w + 2.0, py - 6.0, panel_defs[pi].title,
             "#222222");
    svg.frame(px, py, pw, ph);
    const Ticks tx = nice_ticks(prx.lo, prx.hi, 4);
    for (double v : tx.values) {
      const double x = sx(v);
      svg.line("tick", x, py + ph, x, py + ph + 4.0, "#888888");
      svg.text("ticklabel", x, py + ph + 15.0, fmt(v, tx.decimals), "#222222",
               "middle");
    }

    std::size_t gidx = 0;
    for (std::size_t i = 0; i < stats.size(); ++i) {
      const auto& s = stats[i];
      const double y = py + row_h * (static_cast<double>(i) + 0.5);
      const std::string color =
          s.pooled ? spec.pooled_color : group_color(spec, gidx++);
      svg.circle(std::string("pt") + (s.pooled ? " pooled" : ""),
                 sx(panel_defs[pi].get(s)), y, s.pooled ? 5.0 : 3.6, color);
      svg.text("rowlabel", px - 8.0, y + 3.5, s.label, "#222222", "end");
    }
    svg.close_group();
  }
  return svg.finish();
}

}  // namespace eqcov
