#pragma once

// Minimal static SVG plots: side-by-side ordination scatter and a loading
// heatmap. Output depends only on the inputs.

#include "bspcoa/diagnostics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace bspcoa {

struct ScatterPanel {
  std::string title;
  MatrixXd coords; ///< n x >= 2; first two columns plotted
  std::string x_label = "Axis 1";
  std::string y_label = "Axis 2";
};

namespace detail {

inline std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string xml_escape(const std::string &s) {
  std::string out;
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

inline const char *group_color(int g) {
  static const char *palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  return palette[static_cast<std::size_t>(g) % 6];
}

} // namespace detail

/// Two or more scatter panels in a row. Groups alternate circle / triangle
/// markers; without groups every point is a circle.
inline std::string ordination_svg(const std::vector<ScatterPanel> &panels,
                                  const std::vector<int> &groups = {}) {
  const double size = 360.0, pad = 50.0;
  const double width = static_cast<double>(panels.size()) * (size + 2 * pad);
  const double height = size + 2 * pad;
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << detail::fmt2(width) << "\" height=\""
    << detail::fmt2(height) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t pi = 0; pi < panels.size(); ++pi) {
    const ScatterPanel &panel = panels[pi];
    const double x0 = static_cast<double>(pi) * (size + 2 * pad) + pad, y0 = pad;
    o << "<g>\n<rect x=\"" << detail::fmt2(x0) << "\" y=\"" << detail::fmt2(y0) << "\" width=\""
      << detail::fmt2(size) << "\" height=\"" << detail::fmt2(size)
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    o << "<text x=\"" << detail::fmt2(x0 + size / 2) << "\" y=\"" << detail::fmt2(y0 - 15)
      << "\" text-anchor=\"middle\" font-size=\"14\">" << detail::xml_escape(panel.title) << "</text>\n";
    o << "<text x=\"" << detail::fmt2(x0 + size / 2) << "\" y=\"" << detail::fmt2(y0 + size + 35)
      << "\" text-anchor=\"middle\">" << detail::xml_escape(panel.x_label) << "</text>\n";
    o << "<text transform=\"translate(" << detail::fmt2(x0 - 30) << "," << detail::fmt2(y0 + size / 2)
      << ") rotate(-90)\" text-anchor=\"middle\">" << detail::xml_escape(panel.y_label) << "</text>\n";

    const Index n = panel.coords.rows();
    if (n == 0 || panel.coords.cols() < 2) {
      o << "</g>\n";
      continue;
    }
    const auto xs = panel.coords.col(0), ys = panel.coords.col(1);
    const auto range = [](double lo, double hi) {
      const double span = hi - lo;
      return span > 0.0 ? std::make_pair(lo - 0.05 * span, hi + 0.05 * span) : std::make_pair(lo - 1.0, hi + 1.0);
    };
    const auto [xlo, xhi] = range(xs.minCoeff(), xs.maxCoeff());
    const auto [ylo, yhi] = range(ys.minCoeff(), ys.maxCoeff());
    for (Index i = 0; i < n; ++i) {
      const double px = x0 + (xs(i) - xlo) / (xhi - xlo) * size;
      const double py = y0 + size - (ys(i) - ylo) / (yhi - ylo) * size;
      const int g = groups.empty() ? 0 : groups[static_cast<std::size_t>(i)];
      const char *color = detail::group_color(g);
      if (g % 2 == 0) {
        o << "<circle cx=\"" << detail::fmt2(px) << "\" cy=\"" << detail::fmt2(py)
          << "\" r=\"3.5\" fill=\"" << color << "\" fill-opacity=\"0.7\"/>\n";
      } else {
        o << "<polygon points=\"" << detail::fmt2(px) << "," << detail::fmt2(py - 4.5) << " "
          << detail::fmt2(px - 4) << "," << detail::fmt2(py + 3) << " " << detail::fmt2(px + 4) << ","
          << detail::fmt2(py + 3) << "\" fill=\"" << color << "\" fill-opacity=\"0.7\"/>\n";
      }
    }
    o << "</g>\n";
  }
  o << "</svg>\n";
  return o.str();
}

/// Heatmap of loadings already mapped onto [0, 1]; rows are features.
inline std::string heatmap_svg(const MatrixXd &unit_loadings, const std::vector<std::string> &row_labels,
                               const std::string &title) {
  const Index p = unit_loadings.rows(), k = unit_loadings.cols();
  const double cell_w = 60.0, cell_h = std::clamp(600.0 / std::max<Index>(p, 1), 4.0, 18.0);
  const double left = 110.0, top = 50.0;
  const double width = left + cell_w * static_cast<double>(k) + 90.0;
  const double height = top + cell_h * static_cast<double>(p) + 40.0;
  const bool label_rows = cell_h >= 9.0;
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << detail::fmt2(width) << "\" height=\""
    << detail::fmt2(height) << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << detail::fmt2(width / 2) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
    << detail::xml_escape(title) << "</text>\n";
  for (Index r = 0; r < k; ++r)
    o << "<text x=\"" << detail::fmt2(left + cell_w * (static_cast<double>(r) + 0.5)) << "\" y=\""
      << detail::fmt2(top - 6) << "\" text-anchor=\"middle\">Axis " << r + 1 << "</text>\n";
  for (Index j = 0; j < p; ++j) {
    const double y = top + cell_h * static_cast<double>(j);
    if (label_rows)
      o << "<text x=\"" << detail::fmt2(left - 6) << "\" y=\"" << detail::fmt2(y + cell_h * 0.75)
        << "\" text-anchor=\"end\">" << detail::xml_escape(row_labels[static_cast<std::size_t>(j)]) << "</text>\n";
    for (Index r = 0; r < k; ++r) {
      const double v = std::clamp(unit_loadings(j, r), 0.0, 1.0);
      const int shade = static_cast<int>(std::lround(255.0 * (1.0 - v)));
      char color[16];
      std::snprintf(color, sizeof color, "#%02x%02xff", shade, shade);
      o << "<rect x=\"" << detail::fmt2(left + cell_w * static_cast<double>(r)) << "\" y=\"" << detail::fmt2(y)
        << "\" width=\"" << detail::fmt2(cell_w) << "\" height=\"" << detail::fmt2(cell_h) << "\" fill=\""
        << color << "\"/>\n";
    }
  }
  // colour bar
  const double bx = left + cell_w * static_cast<double>(k) + 25.0;
  for (int s = 0; s < 10; ++s) {
    const int shade = static_cast<int>(std::lround(255.0 * (s / 9.0)));
    char color[16];
    std::snprintf(color, sizeof color, "#%02x%02xff", shade, shade);
    o << "<rect x=\"" << detail::fmt2(bx) << "\" y=\"" << detail::fmt2(top + 12.0 * s)
      << "\" width=\"14\" height=\"12\" fill=\"" << color << "\"/>\n";
  }
  o << "<text x=\"" << detail::fmt2(bx + 18) << "\" y=\"" << detail::fmt2(top + 10) << "\">1</text>\n";
  o << "<text x=\"" << detail::fmt2(bx + 18) << "\" y=\"" << detail::fmt2(top + 118) << "\">0</text>\n";
  o << "</svg>\n";
  return o.str();
}

} // namespace bspcoa
