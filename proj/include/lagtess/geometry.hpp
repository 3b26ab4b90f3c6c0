// Planar Laguerre (power) diagram kernel. Each cell is cut out of a clip
// rectangle by incremental half-plane clipping against the weighted
// bisectors to all other generators: O(n) per cell, O(n^2) total, which is
// the right trade at the instance sizes this library targets and keeps the
// code auditable. Floating-point predicates use an epsilon of 1e-9; there
// is no exact arithmetic.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "lagtess/parallel.hpp"

namespace lagtess {

inline constexpr double kGeomEps = 1e-9;
inline constexpr double kSliverArea = 1e-12;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double norm2() const { return x * x + y * y; }
  double norm() const { return std::sqrt(norm2()); }
};

struct Rect {
  Vec2 lo;
  Vec2 hi;

  double width() const { return hi.x - lo.x; }
  double height() const { return hi.y - lo.y; }
  double area() const { return width() * height(); }
  bool contains(Vec2 p) const {
    return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
  }
  Rect dilated(double margin) const {
    return {{lo.x - margin, lo.y - margin}, {hi.x + margin, hi.y + margin}};
  }
  Rect eroded(double margin) const { return dilated(-margin); }
  bool degenerate() const { return !(width() > 0.0) || !(height() > 0.0); }
};

// Generator of a Laguerre cell: position x and weight h > 0 (squared-length
// units). Smaller weights grow earlier in the crystallization picture.
struct WeightedPoint {
  Vec2 x;
  double h = 0.0;
};

// Closed half-plane {y : normal . y <= offset} with unit normal.
struct HalfPlane {
  Vec2 normal;
  double offset = 0.0;

  double signed_excess(Vec2 p) const { return normal.dot(p) - offset; }
};

// Half-plane of points weakly closer in power distance to a than to b:
// ||y-a.x||^2 + a.h <= ||y-b.x||^2 + b.h  rearranges to
// 2(b.x-a.x).y <= |b.x|^2 - |a.x|^2 + b.h - a.h.
inline HalfPlane power_bisector(const WeightedPoint& a, const WeightedPoint& b) {
  const Vec2 d = b.x - a.x;
  const double dist = d.norm();
  if (!(dist > 0.0)) throw std::invalid_argument("power_bisector: coincident positions");
  const Vec2 n{d.x / dist, d.y / dist};
  const double offset = (b.x.norm2() - a.x.norm2() + b.h - a.h) / (2.0 * dist);
  return {n, offset};
}

struct LaguerreCell {
  std::size_t generator = 0;
  std::vector<Vec2> polygon;  // counterclockwise; empty if the cell is empty
  double area = 0.0;
  bool is_empty = true;
  bool contains_own_generator = false;
  bool touches_clip_boundary = false;
};

struct GeneratorSet {
  int dim = 2;
  std::vector<WeightedPoint> points;
  Rect window;        // observation window
  double guard = 0.0; // simulation margin; points live in window dilated by guard

  Rect simulation_region() const { return window.dilated(guard); }
};

struct Tessellation {
  std::vector<LaguerreCell> cells;  // aligned index-for-index with the generators
  Rect clip;
};

namespace detail {

inline double polygon_area(const std::vector<Vec2>& poly) {
  double twice = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    twice += a.x * b.y - a.y * b.x;
  }
  return 0.5 * twice;
}

inline void clip_by_halfplane(std::vector<Vec2>& poly, const HalfPlane& hp,
                              std::vector<Vec2>& scratch) {
  const std::size_t n = poly.size();
  if (n == 0) return;
  scratch.clear();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 cur = poly[i];
    const Vec2 nxt = poly[(i + 1) % n];
    const double dc = hp.signed_excess(cur);
    const double dn = hp.signed_excess(nxt);
    const bool cur_in = dc <= kGeomEps;
    const bool nxt_in = dn <= kGeomEps;
    if (cur_in) scratch.push_back(cur);
    if (cur_in != nxt_in) {
      const double t = dc / (dc - dn);
      scratch.push_back(cur + (nxt - cur) * t);
    }
  }
  // drop duplicate vertices introduced by near-tangent cuts
  poly.clear();
  for (const Vec2& p : scratch) {
    if (!poly.empty() && (p - poly.back()).norm() <= kGeomEps) continue;
    poly.push_back(p);
  }
  while (poly.size() >= 2 && (poly.front() - poly.back()).norm() <= kGeomEps) poly.pop_back();
  if (poly.size() < 3) poly.clear();
}

inline double max_dist(const std::vector<Vec2>& poly, Vec2 c) {
  double best = 0.0;
  for (const Vec2& p : poly) best = std::max(best, (p - c).norm());
  return best;
}

}  // namespace detail

// True iff generator i lies inside its own cell: no competitor j with
// h_i - h_j > ||x_i - x_j||^2. O(n) scan, independent of any clipping.
inline bool contains_own_generator(std::size_t i, std::span<const WeightedPoint> pts) {
  const WeightedPoint& g = pts[i];
  for (std::size_t j = 0; j < pts.size(); ++j) {
    if (j == i) continue;
    const double slack = g.h - pts[j].h;
    if (slack > 0.0 && slack > (g.x - pts[j].x).norm2()) return false;
  }
  return true;
}

// Cell of generator i intersected with the clip rectangle. Bisectors that
// provably cannot reach the current polygon (line farther from x_i than the
// polygon's bounding radius) are skipped without clipping.
inline LaguerreCell laguerre_cell(std::size_t i, std::span<const WeightedPoint> pts,
                                  const Rect& clip) {
  if (clip.degenerate()) throw std::invalid_argument("laguerre_cell: degenerate clip rectangle");
  LaguerreCell cell;
  cell.generator = i;
  const WeightedPoint& g = pts[i];
  std::vector<Vec2>& poly = cell.polygon;
  poly = {clip.lo, {clip.hi.x, clip.lo.y}, clip.hi, {clip.lo.x, clip.hi.y}};
  std::vector<Vec2> scratch;
  scratch.reserve(16);
  double radius = detail::max_dist(poly, g.x);
  for (std::size_t j = 0; j < pts.size(); ++j) {
    if (j == i) continue;
    const Vec2 d = pts[j].x - g.x;
    const double d2 = d.norm2();
    if (!(d2 > 0.0)) throw std::invalid_argument("laguerre_cell: coincident generator positions");
    const double dist = std::sqrt(d2);
    // signed distance from x_i to the bisector line along d
    const double s = (d2 + pts[j].h - g.h) / (2.0 * dist);
    if (s >= radius + kGeomEps) continue;
    detail::clip_by_halfplane(poly, power_bisector(g, pts[j]), scratch);
    if (poly.empty()) break;
    radius = detail::max_dist(poly, g.x);
  }
  double area = poly.empty() ? 0.0 : detail::polygon_area(poly);
  if (area < kSliverArea) {
    poly.clear();
    area = 0.0;
  }
  cell.area = area;
  cell.is_empty = poly.empty();
  if (!cell.is_empty) {
    const double tol = kGeomEps * std::max({1.0, clip.width(), clip.height()});
    for (const Vec2& p : poly) {
      if (p.x <= clip.lo.x + tol || p.x >= clip.hi.x - tol || p.y <= clip.lo.y + tol ||
          p.y >= clip.hi.y - tol) {
        cell.touches_clip_boundary = true;
        break;
      }
    }
  }
  return cell;
}

// Index minimizing the power distance ||y - x_i||^2 + h_i; ties go to the
// lowest index.
inline std::size_t locate(Vec2 y, std::span<const WeightedPoint> pts) {
  if (pts.empty()) throw std::invalid_argument("locate: empty generator set");
  std::size_t best = 0;
  double best_power = (y - pts[0].x).norm2() + pts[0].h;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double p = (y - pts[i].x).norm2() + pts[i].h;
    if (p < best_power) {
      best_power = p;
      best = i;
    }
  }
  return best;
}

namespace detail {

inline void check_distinct_positions(std::span<const WeightedPoint> pts) {
  std::vector<Vec2> xs(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) xs[i] = pts[i].x;
  std::sort(xs.begin(), xs.end(), [](Vec2 a, Vec2 b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (xs[i].x == xs[i - 1].x && xs[i].y == xs[i - 1].y)
      throw std::invalid_argument("tessellate: duplicate generator positions");
}

}  // namespace detail

// One cell per generator, clipped to `clip`. Cells whose generator lies
// outside the clip are still computed since they may intersect it. Cell
// construction is distributed across workers; results are deterministic
// regardless of schedule.
inline Tessellation tessellate(std::span<const WeightedPoint> pts, const Rect& clip) {
  if (clip.degenerate()) throw std::invalid_argument("tessellate: degenerate clip rectangle");
  detail::check_distinct_positions(pts);
  Tessellation tess;
  tess.clip = clip;
  tess.cells.resize(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    tess.cells[i] = laguerre_cell(i, pts, clip);
    tess.cells[i].contains_own_generator = contains_own_generator(i, pts);
  });
  return tess;
}

// Convenience overload: clip to the generator set's simulation region.
inline Tessellation tessellate(const GeneratorSet& gens) {
  return tessellate(gens.points, gens.simulation_region());
}

// Convex-polygon membership with boundary tolerance.
inline bool polygon_contains(const std::vector<Vec2>& poly, Vec2 p, double tol = kGeomEps) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = poly[i];
    const Vec2 b = poly[(i + 1) % n];
    const Vec2 e = b - a;
    const double cross = e.x * (p.y - a.y) - e.y * (p.x - a.x);
    if (cross < -tol * std::max(1.0, e.norm())) return false;
  }
  return true;
}

}  // namespace lagtess
