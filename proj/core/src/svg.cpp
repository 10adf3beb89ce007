#include "nsvfp/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace nsvfp {

namespace {

constexpr int kW = 760, kH = 480;
constexpr int kL = 70, kR = 160, kT = 40, kB = 50;  // margins (legend lives right)

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Range {
  double lo = 0.0, hi = 1.0;
  void widen(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
};

}  // namespace

void write_line_plot(const std::string& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<PlotSeries>& series, bool log_y) {
  // transformed points per series
  std::vector<std::vector<std::pair<double, double>>> pts(series.size());
  bool any = false;
  Range rx, ry;
  bool first = true;
  for (size_t s = 0; s < series.size(); ++s) {
    const auto& sr = series[s];
    for (size_t q = 0; q < sr.x.size() && q < sr.y.size(); ++q) {
      double yv = sr.y[q];
      if (log_y) {
        if (!(yv > 0.0)) continue;
        yv = std::log10(yv);
      }
      if (!std::isfinite(yv) || !std::isfinite(sr.x[q])) continue;
      pts[s].emplace_back(sr.x[q], yv);
      if (first) {
        rx = Range{sr.x[q], sr.x[q]};
        ry = Range{yv, yv};
        first = false;
      } else {
        rx.widen(sr.x[q]);
        ry.widen(yv);
      }
      any = true;
    }
  }
  if (!any) {
    rx = Range{0.0, 1.0};
    ry = Range{0.0, 1.0};
  }
  if (rx.hi - rx.lo < 1e-300) rx.hi = rx.lo + 1.0;
  if (ry.hi - ry.lo < 1e-300) ry.hi = ry.lo + 1.0;

  const auto px = [&](double x) {
    return kL + (x - rx.lo) / (rx.hi - rx.lo) * (kW - kL - kR);
  };
  const auto py = [&](double y) {
    return kH - kB - (y - ry.lo) / (ry.hi - ry.lo) * (kH - kT - kB);
  };

  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_line_plot: cannot write " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
      << "\" viewBox=\"0 0 " << kW << " " << kH << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
      << title << "</text>\n";

  // frame and ticks (5 per axis)
  out << "<rect x=\"" << kL << "\" y=\"" << kT << "\" width=\"" << kW - kL - kR
      << "\" height=\"" << kH - kT - kB << "\" fill=\"none\" stroke=\"#333\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double xv = rx.lo + (rx.hi - rx.lo) * t / 4.0;
    const double yv = ry.lo + (ry.hi - ry.lo) * t / 4.0;
    out << "<line x1=\"" << px(xv) << "\" y1=\"" << kH - kB << "\" x2=\"" << px(xv) << "\" y2=\""
        << kH - kB + 5 << "\" stroke=\"#333\"/>\n"
        << "<text x=\"" << px(xv) << "\" y=\"" << kH - kB + 18
        << "\" text-anchor=\"middle\" font-size=\"11\">" << fmt(xv) << "</text>\n"
        << "<line x1=\"" << kL - 5 << "\" y1=\"" << py(yv) << "\" x2=\"" << kL << "\" y2=\""
        << py(yv) << "\" stroke=\"#333\"/>\n"
        << "<text x=\"" << kL - 8 << "\" y=\"" << py(yv) + 4
        << "\" text-anchor=\"end\" font-size=\"11\">" << fmt(yv) << "</text>\n";
  }
  out << "<text x=\"" << (kL + kW - kR) / 2 << "\" y=\"" << kH - 12
      << "\" text-anchor=\"middle\" font-size=\"13\">" << x_label << "</text>\n"
      << "<text x=\"16\" y=\"" << (kT + kH - kB) / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
      << (kT + kH - kB) / 2 << ")\">" << (log_y ? "log10 " + y_label : y_label) << "</text>\n";

  for (size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % (sizeof kPalette / sizeof *kPalette)];
    if (!pts[s].empty()) {
      out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (const auto& [x, y] : pts[s]) out << fmt(px(x)) << ',' << fmt(py(y)) << ' ';
      out << "\"/>\n";
    }
    const int ly = kT + 16 + 18 * static_cast<int>(s);
    out << "<line x1=\"" << kW - kR + 10 << "\" y1=\"" << ly << "\" x2=\"" << kW - kR + 34
        << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << kW - kR + 40 << "\" y=\"" << ly + 4 << "\" font-size=\"12\">"
        << series[s].label << "</text>\n";
  }
  out << "</svg>\n";
  if (!out) throw std::runtime_error("write_line_plot: write failed for " + path);
}

}  // namespace nsvfp
