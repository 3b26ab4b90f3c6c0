// SVG rendering: tessellations with cells shaded by area quantile, and
// step-function plots (thin realizations, thick pointwise average, dashed
// reference). Text output so goldens diff cleanly.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "lagtess/geometry.hpp"
#include "lagtess/stepcdf.hpp"

namespace lagtess {

namespace detail {

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

// five-anchor sequential ramp, dark violet to yellow
inline std::string ramp_color(double t) {
  static const int anchors[5][3] = {
      {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
  t = std::clamp(t, 0.0, 1.0) * 4.0;
  const int i = std::min(3, static_cast<int>(t));
  const double u = t - i;
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                static_cast<int>(anchors[i][0] + u * (anchors[i + 1][0] - anchors[i][0])),
                static_cast<int>(anchors[i][1] + u * (anchors[i + 1][1] - anchors[i][1])),
                static_cast<int>(anchors[i][2] + u * (anchors[i + 1][2] - anchors[i][2])));
  return buf;
}

}  // namespace detail

struct TessellationSvgOptions {
  double canvas = 800.0;
  bool generator_circles = false;  // circle of radius proportional to the weight
};

inline std::string tessellation_to_svg(const Tessellation& tess,
                                       const std::vector<WeightedPoint>& points,
                                       const TessellationSvgOptions& opt = {}) {
  const Rect& box = tess.clip;
  const double scale = opt.canvas / std::max(box.width(), box.height());
  const double w = box.width() * scale;
  const double h = box.height() * scale;
  const auto tx = [&](Vec2 p) {
    return Vec2{(p.x - box.lo.x) * scale, h - (p.y - box.lo.y) * scale};
  };

  std::vector<double> areas;
  for (const auto& c : tess.cells)
    if (!c.is_empty) areas.push_back(c.area);
  std::sort(areas.begin(), areas.end());
  const auto quantile_rank = [&](double a) {
    if (areas.size() < 2) return 0.5;
    const auto it = std::lower_bound(areas.begin(), areas.end(), a);
    return static_cast<double>(it - areas.begin()) / static_cast<double>(areas.size() - 1);
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::fmt(w) + "\" height=\"" +
         detail::fmt(h) + "\" viewBox=\"0 0 " + detail::fmt(w) + " " + detail::fmt(h) + "\">\n";
  for (const auto& cell : tess.cells) {
    if (cell.is_empty) continue;
    std::string d;
    for (std::size_t i = 0; i < cell.polygon.size(); ++i) {
      const Vec2 p = tx(cell.polygon[i]);
      d += (i == 0 ? "M" : "L");
      d += detail::fmt(p.x) + " " + detail::fmt(p.y);
    }
    d += "Z";
    svg += "<path d=\"" + d + "\" fill=\"" + detail::ramp_color(quantile_rank(cell.area)) +
           "\" stroke=\"black\" stroke-width=\"0.6\"/>\n";
  }
  if (opt.generator_circles && !points.empty()) {
    double max_h = 0.0;
    for (const auto& p : points) max_h = std::max(max_h, p.h);
    const double r_scale = max_h > 0.0 ? 0.05 * std::min(w, h) / max_h : 0.0;
    for (const auto& p : points) {
      if (!box.contains(p.x)) continue;
      const Vec2 q = tx(p.x);
      svg += "<circle cx=\"" + detail::fmt(q.x) + "\" cy=\"" + detail::fmt(q.y) + "\" r=\"" +
             detail::fmt(p.h * r_scale) + "\" fill=\"none\" stroke=\"black\" stroke-width=\"0.8\"/>\n";
    }
  }
  svg += "</svg>\n";
  return svg;
}

// Plot styling follows the simulation figures: thin blue realizations, a
// thick black pointwise average, a dashed red reference curve.
struct PlotSpec {
  std::vector<StepCdf> curves;
  StepCdf average;        // optional: empty means absent
  StepCdf reference;      // optional: empty means absent
  bool has_average = false;
  bool has_reference = false;
  double x_max = 0.0;     // 0 = automatic
  double y_max = 0.0;     // 0 = automatic
  double width = 720.0;
  double height = 480.0;
};

inline std::string curves_to_svg(const PlotSpec& spec) {
  if (spec.curves.empty() && !spec.has_average && !spec.has_reference)
    throw std::invalid_argument("curves_to_svg: nothing to plot");
  double x_max = spec.x_max;
  double y_max = spec.y_max;
  const auto consider = [&](const StepCdf& f) {
    if (f.jump_count() == 0) return;
    if (spec.x_max <= 0.0) x_max = std::max(x_max, 1.05 * f.locations().back());
    if (spec.y_max <= 0.0) y_max = std::max(y_max, 1.05 * f.terminal());
  };
  for (const auto& f : spec.curves) consider(f);
  if (spec.has_average) consider(spec.average);
  if (spec.has_reference) consider(spec.reference);
  if (!(x_max > 0.0)) x_max = 1.0;
  if (!(y_max > 0.0)) y_max = 1.0;

  const double margin = 40.0;
  const double pw = spec.width - 2 * margin;
  const double ph = spec.height - 2 * margin;
  const auto tx = [&](double x, double y) {
    return Vec2{margin + x / x_max * pw, margin + ph - y / y_max * ph};
  };
  const auto path_for = [&](const StepCdf& f) {
    std::string d;
    Vec2 p = tx(0.0, 0.0);
    d += "M" + detail::fmt(p.x) + " " + detail::fmt(p.y);
    for (std::size_t i = 0; i < f.jump_count(); ++i) {
      const double hx = std::min(f.locations()[i], x_max);
      const double before = i == 0 ? 0.0 : f.values()[i - 1];
      p = tx(hx, before);
      d += "L" + detail::fmt(p.x) + " " + detail::fmt(p.y);
      p = tx(hx, f.values()[i]);
      d += "L" + detail::fmt(p.x) + " " + detail::fmt(p.y);
      if (f.locations()[i] >= x_max) break;
    }
    p = tx(x_max, f.value(x_max));
    d += "L" + detail::fmt(p.x) + " " + detail::fmt(p.y);
    return d;
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::fmt(spec.width) +
         "\" height=\"" + detail::fmt(spec.height) + "\">\n";
  svg += "<rect x=\"" + detail::fmt(margin) + "\" y=\"" + detail::fmt(margin) + "\" width=\"" +
         detail::fmt(pw) + "\" height=\"" + detail::fmt(ph) +
         "\" fill=\"white\" stroke=\"black\" stroke-width=\"1\"/>\n";
  for (const auto& f : spec.curves)
    svg += "<path d=\"" + path_for(f) +
           "\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"0.7\" opacity=\"0.5\"/>\n";
  if (spec.has_reference)
    svg += "<path d=\"" + path_for(spec.reference) +
           "\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\"/>\n";
  if (spec.has_average)
    svg += "<path d=\"" + path_for(spec.average) +
           "\" fill=\"none\" stroke=\"black\" stroke-width=\"2.2\"/>\n";
  svg += "</svg>\n";
  return svg;
}

}  // namespace lagtess
