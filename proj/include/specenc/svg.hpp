#pragma once

// SVG rendering of enclosure boundaries.  Curves are sampled on the first
// quadrant; the full boundary is assembled from the fourfold symmetry
// lambda -> -lambda, lambda -> conj(lambda).  Curves that start and end on
// the real axis (small-Q l1 ovals) split into two mirrored lobes instead.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "domain.hpp"
#include "enclosures.hpp"

namespace specenc::svg {

struct PlotOptions {
  double width = 760.0;
  double height = 560.0;
  double margin = 40.0;
  bool legend = true;
};

namespace detail {

inline bool near_real_axis(Complex z, double scale) {
  return std::abs(z.imag()) <= 1e-7 * (1.0 + scale);
}
inline bool near_imag_axis(Complex z, double scale) {
  return std::abs(z.real()) <= 1e-7 * (1.0 + scale);
}

/// Closed loops (in curve order) covering the full boundary of one curve.
inline std::vector<std::vector<Complex>> assemble_loops(const BoundaryCurve& c) {
  std::vector<Complex> p = c.points;
  if (p.size() < 2) return {};
  double scale = 0.0;
  for (const Complex& z : p) scale = std::max(scale, std::abs(z));
  const Complex e0 = p.front(), e1 = p.back();
  std::vector<std::vector<Complex>> loops;
  if (near_real_axis(e0, scale) && near_real_axis(e1, scale) &&
      !near_imag_axis(e0, scale) && !near_imag_axis(e1, scale)) {
    // both ends on the positive real axis: a lobe plus its mirror image
    std::vector<Complex> lobe = p;
    for (std::size_t i = p.size() - 1; i-- > 0;) lobe.push_back(std::conj(p[i]));
    loops.push_back(lobe);
    std::vector<Complex> mirror;
    mirror.reserve(lobe.size());
    for (const Complex& z : lobe) mirror.push_back(-z);
    loops.push_back(mirror);
    return loops;
  }
  // orient from the real-axis end to the imaginary-axis end
  if (near_imag_axis(e0, scale) && !near_imag_axis(e1, scale)) {
    std::reverse(p.begin(), p.end());
  }
  std::vector<Complex> loop = p;
  for (std::size_t i = p.size(); i-- > 0;) loop.push_back(Complex(-p[i].real(), p[i].imag()));
  for (std::size_t i = 1; i < p.size(); ++i) loop.push_back(-p[i]);
  for (std::size_t i = p.size() - 1; i-- > 0;) loop.push_back(std::conj(p[i]));
  return {loop};
}

inline std::string fmt(double x) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.3f", x);
  return buf;
}

}  // namespace detail

/// Standalone SVG with the full (reflected) boundary of each curve, the
/// band [-2,2] and coordinate axes.  Labels are optional per-curve legend
/// entries.
inline std::string render(const std::vector<BoundaryCurve>& curves,
                          const std::vector<std::string>& labels = {},
                          const PlotOptions& opt = {}) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
                                  "#7f7f7f", "#bcbd22"};
  const std::size_t ncolors = sizeof(palette) / sizeof(palette[0]);

  std::vector<std::vector<std::vector<Complex>>> all;
  double xmax = 2.2, ymax = 0.6;
  for (const BoundaryCurve& c : curves) {
    all.push_back(detail::assemble_loops(c));
    for (const Complex& z : c.points) {
      xmax = std::max(xmax, std::abs(z.real()));
      ymax = std::max(ymax, std::abs(z.imag()));
    }
  }
  xmax *= 1.08;
  ymax *= 1.15;

  const double w = opt.width, h = opt.height, m = opt.margin;
  const double sx = (w - 2.0 * m) / (2.0 * xmax);
  const double sy = (h - 2.0 * m) / (2.0 * ymax);
  auto X = [&](double x) { return m + (x + xmax) * sx; };
  auto Y = [&](double y) { return h - m - (y + ymax) * sy; };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " + detail::fmt(w) + " " +
       detail::fmt(h) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  // axes and integer ticks
  s += "<line x1=\"" + detail::fmt(X(-xmax)) + "\" y1=\"" + detail::fmt(Y(0)) + "\" x2=\"" +
       detail::fmt(X(xmax)) + "\" y2=\"" + detail::fmt(Y(0)) +
       "\" stroke=\"#999\" stroke-width=\"1\"/>\n";
  s += "<line x1=\"" + detail::fmt(X(0)) + "\" y1=\"" + detail::fmt(Y(-ymax)) + "\" x2=\"" +
       detail::fmt(X(0)) + "\" y2=\"" + detail::fmt(Y(ymax)) +
       "\" stroke=\"#999\" stroke-width=\"1\"/>\n";
  for (int tx = static_cast<int>(-xmax); tx <= static_cast<int>(xmax); ++tx) {
    if (tx == 0) continue;
    s += "<line x1=\"" + detail::fmt(X(tx)) + "\" y1=\"" + detail::fmt(Y(0) - 3) + "\" x2=\"" +
         detail::fmt(X(tx)) + "\" y2=\"" + detail::fmt(Y(0) + 3) +
         "\" stroke=\"#999\" stroke-width=\"1\"/>\n";
  }
  // the band [-2, 2]
  s += "<line x1=\"" + detail::fmt(X(-2)) + "\" y1=\"" + detail::fmt(Y(0)) + "\" x2=\"" +
       detail::fmt(X(2)) + "\" y2=\"" + detail::fmt(Y(0)) +
       "\" stroke=\"#222\" stroke-width=\"3\"/>\n";

  for (std::size_t ci = 0; ci < all.size(); ++ci) {
    const char* color = palette[ci % ncolors];
    for (const std::vector<Complex>& loop : all[ci]) {
      s += "<polyline fill=\"none\" stroke=\"";
      s += color;
      s += "\" stroke-width=\"1.5\" points=\"";
      for (const Complex& z : loop) {
        s += detail::fmt(X(z.real())) + "," + detail::fmt(Y(z.imag())) + " ";
      }
      s += "\"/>\n";
    }
    if (opt.legend && ci < labels.size() && !labels[ci].empty()) {
      const double ly = m + 16.0 * static_cast<double>(ci + 1);
      s += "<line x1=\"" + detail::fmt(m) + "\" y1=\"" + detail::fmt(ly - 4) + "\" x2=\"" +
           detail::fmt(m + 22) + "\" y2=\"" + detail::fmt(ly - 4) + "\" stroke=\"";
      s += color;
      s += "\" stroke-width=\"2\"/>\n";
      s += "<text x=\"" + detail::fmt(m + 28) + "\" y=\"" + detail::fmt(ly) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + labels[ci] + "</text>\n";
    }
  }
  s += "</svg>\n";
  return s;
}

}  // namespace specenc::svg
