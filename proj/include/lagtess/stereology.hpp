// Stereological unfolding: the planar weight CDF F of a sectional
// tessellation determines the spatial weight CDF H through the Abel
// relation F(z) = 2 int_0^z sqrt(z-h) dH(h). The plugin inverse
// (1/pi) int_0^z (z-t)^{-1/2} dF(t) is exact in the limit but wildly
// non-monotone for a step F (it blows up just past every jump), so the
// usable estimator is the right-derivative of the greatest convex minorant
// of its running integral U — a weighted isotonic regression on the chord
// slopes of U, solved by pool-adjacent-violators.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lagtess/stepcdf.hpp"

namespace lagtess {

// F(z) = 2 sum_j dH_j sqrt((z - h_j)_+); continuous and nondecreasing in z.
inline double abel_transform(const StepCdf& h, double z) {
  return 2.0 * stieltjes_sum(h, z, [&](double t) { return std::sqrt(z - t); });
}

// Plugin inverse (1/pi) sum_{h_j < z} dF_j (z - h_j)^{-1/2}. At a jump
// location the value is a deliberate +inf sentinel; between jumps it is
// finite but not monotone.
inline double abel_plugin(const StepCdf& f, double z) {
  const auto& h = f.locations();
  CompensatedSum acc;
  for (std::size_t j = 0; j < h.size(); ++j) {
    if (h[j] > z) break;
    if (h[j] == z) return std::numeric_limits<double>::infinity();
    acc.add(f.jump_mass(j) / std::sqrt(z - h[j]));
  }
  return acc.value() / std::numbers::pi;
}

// U(z) = int_0^z plugin = (2/pi) sum_j dF_j sqrt((z - h_j)_+); continuous,
// nondecreasing, and concave past the last jump.
inline double abel_primitive(const StepCdf& f, double z) {
  return (2.0 / std::numbers::pi) *
         stieltjes_sum(f, z, [&](double t) { return std::sqrt(z - t); });
}

// Weighted isotonic regression data: minimize sum_i w_i (beta_i - y_i)^2
// over nonnegative nondecreasing beta.
struct IsotonicProblem {
  std::vector<double> y;
  std::vector<double> w;
};

struct IsotonicResult {
  std::vector<double> beta;                            // fitted values
  std::vector<std::pair<std::size_t, std::size_t>> blocks;  // pooled [begin, end) ranges
  StepCdf estimate;   // step-CDF form (filled by isotonic_unfold)
  double z_m = 0.0;   // truncation point (filled by isotonic_unfold)
};

// Chord slopes of U between consecutive jump locations of f:
//   y_i = (U(h_{i+1}) - U(h_i)) / (h_{i+1} - h_i),  w_i = h_{i+1} - h_i,
// for i = 1..k-1. The leading segment [0, h_1) has slope 0 and enters only
// through the anchoring of the convex minorant at the origin.
inline IsotonicProblem chord_slopes(const StepCdf& f) {
  const auto& h = f.locations();
  if (h.size() < 2) throw std::invalid_argument("chord_slopes: need at least 2 jumps");
  IsotonicProblem p;
  p.y.reserve(h.size() - 1);
  p.w.reserve(h.size() - 1);
  double u_prev = abel_primitive(f, h[0]);  // = 0
  for (std::size_t i = 1; i < h.size(); ++i) {
    const double u_cur = abel_primitive(f, h[i]);
    const double w = h[i] - h[i - 1];
    p.y.push_back((u_cur - u_prev) / w);
    p.w.push_back(w);
    u_prev = u_cur;
  }
  return p;
}

// Pool-adjacent-violators for the nonnegative nondecreasing cone: merge
// violating neighbors into weighted-mean blocks, then clamp negative block
// values to zero (the clamp is the exact projection because the fit is
// already nondecreasing).
inline IsotonicResult pava(const IsotonicProblem& p) {
  if (p.y.size() != p.w.size()) throw std::invalid_argument("pava: length mismatch");
  const std::size_t n = p.y.size();
  struct Block {
    double wy, w;
    std::size_t begin, end;
    double mean() const { return wy / w; }
  };
  std::vector<Block> stack;
  stack.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(p.w[i] > 0.0)) throw std::invalid_argument("pava: weights must be positive");
    Block b{p.y[i] * p.w[i], p.w[i], i, i + 1};
    while (!stack.empty() && stack.back().mean() >= b.mean()) {
      b.wy += stack.back().wy;
      b.w += stack.back().w;
      b.begin = stack.back().begin;
      stack.pop_back();
    }
    stack.push_back(b);
  }
  IsotonicResult r;
  r.beta.resize(n);
  for (const Block& b : stack) {
    const double val = std::max(0.0, b.mean());
    for (std::size_t i = b.begin; i < b.end; ++i) r.beta[i] = val;
    r.blocks.emplace_back(b.begin, b.end);
  }
  return r;
}

// Isotonic estimate of H from a sectional step CDF f: right-derivative of
// the greatest convex minorant of U on [0, z_m] with z_m = min(h_k, m),
// held at the left-derivative value beyond z_m. Computed from the chord
// slopes of U (U and its piecewise-linear interpolant share the minorant),
// with a zero-slope anchor segment [0, h_1) so the minorant starts at the
// origin. The step form carries the value at h_k equal to the value at
// h_{k-1}.
inline IsotonicResult isotonic_unfold(const StepCdf& f,
                                      double m = std::numeric_limits<double>::infinity()) {
  const auto& h = f.locations();
  if (h.size() < 2) throw std::invalid_argument("isotonic_unfold: need at least 2 jumps");
  const double z_m = std::min(h.back(), m);

  IsotonicProblem anchored;
  std::vector<double> starts;  // left endpoint of each fitted segment
  anchored.y.push_back(0.0);
  anchored.w.push_back(std::min(h[0], z_m));
  starts.push_back(0.0);
  double u_prev = 0.0;
  for (std::size_t i = 0; i + 1 < h.size(); ++i) {
    if (h[i] >= z_m) break;
    const double seg_end = std::min(h[i + 1], z_m);
    const double u_cur = abel_primitive(f, seg_end);
    anchored.y.push_back((u_cur - u_prev) / (seg_end - h[i]));
    anchored.w.push_back(seg_end - h[i]);
    starts.push_back(h[i]);
    u_prev = u_cur;
  }

  IsotonicResult fit = pava(anchored);
  IsotonicResult r;
  r.z_m = z_m;
  // drop the anchor entry from the reported fit
  r.beta.assign(fit.beta.begin() + 1, fit.beta.end());
  for (auto [b, e] : fit.blocks) {
    const std::size_t lo = b > 0 ? b - 1 : 0;
    const std::size_t hi = e - 1;
    if (hi > lo || b > 0) r.blocks.emplace_back(lo, hi);
  }
  std::vector<std::pair<double, double>> jumps;
  jumps.reserve(r.beta.size());
  for (std::size_t i = 0; i < r.beta.size(); ++i) jumps.emplace_back(starts[i + 1], r.beta[i]);
  r.estimate = StepCdf::from_points(std::move(jumps));
  return r;
}

}  // namespace lagtess
