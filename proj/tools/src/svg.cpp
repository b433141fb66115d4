#include "gfs/cli/svg.hpp"

#include "gfs/cli/io.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gfs::cli {

namespace {

constexpr int kCell = 22;
constexpr int kMarginLeft = 64;
constexpr int kMarginTop = 36;
constexpr int kMarginBottom = 48;
constexpr int kPanelGap = 40;

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << v;
  return os.str();
}

}  // namespace

std::string heatmap_svg(const std::vector<const PhaseGrid*>& grids,
                        const std::vector<std::string>& titles) {
  int width = kMarginLeft;
  int height = kMarginTop + kMarginBottom;
  for (const PhaseGrid* g : grids) {
    width += static_cast<int>(g->rows()) * kCell + kPanelGap;
    height = std::max(height, kMarginTop + kMarginBottom + static_cast<int>(g->cols()) * kCell);
  }

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" font-family=\"sans-serif\" font-size=\"10\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  int x0 = kMarginLeft;
  for (std::size_t p = 0; p < grids.size(); ++p) {
    const PhaseGrid& g = *grids[p];
    const bool rho = g.spec.axis2_kind == SecondAxis::rho;
    const int rows = static_cast<int>(g.rows()), cols = static_cast<int>(g.cols());
    const int y_bottom = kMarginTop + cols * kCell;
    os << "<text x=\"" << x0 << "\" y=\"" << kMarginTop - 12 << "\" font-size=\"12\">"
       << (p < titles.size() ? titles[p] : std::string()) << "</text>\n";
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        const EfsEstimate& e = g.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
        const int x = x0 + r * kCell, y = y_bottom - (c + 1) * kCell;
        const int level = static_cast<int>(std::lround(255.0 * std::clamp(e.p_efs, 0.0, 1.0)));
        os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << kCell << "\" height=\""
           << kCell << "\" fill=\"rgb(" << level << ',' << level << ',' << level << ")\"";
        if (!e.valid) os << " stroke=\"red\" stroke-width=\"2\"";
        os << "><title>delta=" << format_double(g.spec.delta[r]) << ' ' << to_string(g.spec.axis2_kind)
           << '=' << format_double(g.spec.axis2[c]) << " p=" << format_double(e.p_efs)
           << "</title></rect>\n";
      }
    }
    for (int r = 0; r < rows; ++r) {
      os << "<text x=\"" << x0 + r * kCell + kCell / 2 << "\" y=\"" << y_bottom + 12
         << "\" text-anchor=\"middle\" font-size=\"8\">" << fixed(g.spec.delta[r], 2) << "</text>\n";
    }
    for (int c = 0; c < cols; ++c) {
      const double v = rho ? std::log10(g.spec.axis2[c]) : g.spec.axis2[c];
      os << "<text x=\"" << x0 - 4 << "\" y=\"" << y_bottom - c * kCell - kCell / 2 + 3
         << "\" text-anchor=\"end\" font-size=\"8\">" << fixed(v, 2) << "</text>\n";
    }
    os << "<text x=\"" << x0 + rows * kCell / 2 << "\" y=\"" << y_bottom + 30
       << "\" text-anchor=\"middle\">overlap ratio delta</text>\n";
    os << "<text x=\"" << x0 - 44 << "\" y=\"" << kMarginTop + cols * kCell / 2
       << "\" text-anchor=\"middle\" transform=\"rotate(-90 " << x0 - 44 << ' '
       << kMarginTop + cols * kCell / 2 << ")\">"
       << (rho ? "log10 oversampling ratio rho" : "common energy tau") << "</text>\n";
    x0 += rows * kCell + kPanelGap;
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace gfs::cli
