#include "sgir/plot.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "sgir/common.hpp"

namespace sgir {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf"};

std::string fmt_tick(double v) {
  std::ostringstream os;
  const double a = std::abs(v);
  if (v != 0.0 && (a < 1e-3 || a >= 1e4)) {
    os.precision(1);
    os << std::scientific << v;
  } else {
    os.precision(4);
    os << v;
  }
  return os.str();
}

}  // namespace

std::vector<std::string> emit_plot(std::ostream& os, const PlotSpec& spec,
                                   const std::vector<PlotSeries>& series) {
  if (series.empty()) throw ParameterError("emit_plot: no series");
  std::vector<std::string> warnings;

  // Collect plot-space points (log10 of y when requested).
  struct Pt { double x, y, lo, hi; };
  std::vector<std::vector<Pt>> data(series.size());
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    if (s.xs.size() != s.ys.size()) throw ParameterError("emit_plot: ragged series");
    for (std::size_t i = 0; i < s.xs.size(); ++i) {
      double y = s.ys[i];
      double half = s.band.empty() ? 0.0 : s.band[i];
      if (spec.log_y) {
        if (y <= 0.0) {
          warnings.push_back("emit_plot: dropped non-positive point in '" + s.label +
                             "' at x=" + format_double(s.xs[i]));
          continue;
        }
        const double lo_lin = std::max(y - half, y * 1e-3);
        data[si].push_back({s.xs[i], std::log10(y), std::log10(lo_lin), std::log10(y + half)});
      } else {
        data[si].push_back({s.xs[i], y, y - half, y + half});
      }
      const auto& p = data[si].back();
      xmin = std::min(xmin, p.x); xmax = std::max(xmax, p.x);
      ymin = std::min({ymin, p.lo}); ymax = std::max({ymax, p.hi});
    }
  }
  bool any = false;
  for (const auto& d : data) any = any || !d.empty();
  if (!any) throw ParameterError("emit_plot: every point was dropped");
  if (xmin == xmax) { xmin -= 0.5; xmax += 0.5; }
  if (ymin == ymax) { ymin -= 0.5; ymax += 0.5; }
  const double xpad = 0.05 * (xmax - xmin), ypad = 0.08 * (ymax - ymin);
  xmin -= xpad; xmax += xpad; ymin -= ypad; ymax += ypad;

  const double ml = 70, mr = 20, mt = 36, mb = 52;
  const double pw = spec.width - ml - mr, ph = spec.height - mt - mb;
  auto X = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
  auto Y = [&](double y) { return mt + (ymax - y) / (ymax - ymin) * ph; };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\""
     << spec.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << spec.width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
     << spec.title << "</text>\n";

  // Axes + ticks
  os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  const int nticks = 6;
  for (int t = 0; t <= nticks; ++t) {
    const double fx = xmin + (xmax - xmin) * t / nticks;
    const double fy = ymin + (ymax - ymin) * t / nticks;
    os << "<line x1=\"" << X(fx) << "\" y1=\"" << mt + ph << "\" x2=\"" << X(fx) << "\" y2=\""
       << mt + ph + 5 << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << X(fx) << "\" y=\"" << mt + ph + 18
       << "\" text-anchor=\"middle\">" << fmt_tick(fx) << "</text>\n";
    os << "<line x1=\"" << ml - 5 << "\" y1=\"" << Y(fy) << "\" x2=\"" << ml << "\" y2=\""
       << Y(fy) << "\" stroke=\"black\"/>\n";
    const std::string ylab = spec.log_y ? ("1e" + fmt_tick(fy)) : fmt_tick(fy);
    os << "<text x=\"" << ml - 8 << "\" y=\"" << Y(fy) + 4 << "\" text-anchor=\"end\">" << ylab
       << "</text>\n";
  }
  os << "<text x=\"" << ml + pw / 2 << "\" y=\"" << spec.height - 12
     << "\" text-anchor=\"middle\">" << spec.x_label << "</text>\n";
  os << "<text x=\"16\" y=\"" << mt + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
     << mt + ph / 2 << ")\">" << spec.y_label << (spec.log_y ? " (log)" : "") << "</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    if (data[si].empty()) continue;
    const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
    // band polygon
    if (!series[si].band.empty()) {
      os << "<polygon fill=\"" << color << "\" opacity=\"0.15\" points=\"";
      for (const auto& p : data[si]) os << X(p.x) << ',' << Y(p.hi) << ' ';
      for (auto it = data[si].rbegin(); it != data[si].rend(); ++it)
        os << X(it->x) << ',' << Y(it->lo) << ' ';
      os << "\"/>\n";
    }
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& p : data[si]) os << X(p.x) << ',' << Y(p.y) << ' ';
    os << "\"/>\n";
    for (const auto& p : data[si])
      os << "<circle cx=\"" << X(p.x) << "\" cy=\"" << Y(p.y) << "\" r=\"2.5\" fill=\"" << color
         << "\"/>\n";
    if (series[si].fit) {
      const auto [slope, inter] = *series[si].fit;
      os << "<line stroke=\"" << color << "\" stroke-dasharray=\"5 3\" x1=\"" << X(xmin + xpad)
         << "\" y1=\"" << Y(slope * (xmin + xpad) + inter) << "\" x2=\"" << X(xmax - xpad)
         << "\" y2=\"" << Y(slope * (xmax - xpad) + inter) << "\"/>\n";
    }
    // legend
    const double ly = mt + 16 + 16 * static_cast<double>(si);
    os << "<line x1=\"" << ml + pw - 150 << "\" y1=\"" << ly << "\" x2=\"" << ml + pw - 125
       << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << ml + pw - 120 << "\" y=\"" << ly + 4 << "\">" << series[si].label
       << "</text>\n";
  }
  os << "</svg>\n";
  return warnings;
}

}  // namespace sgir
