// Forward operators of the Poisson-Laguerre model and the two inverse
// estimators of the driving distribution function F.
//
// The thinned transform of F,
//   G(z) = int_0^z exp(-kappa_d int_0^h (h-t)^{d/2} dF(t)) dF(h),
// is the per-unit-area CDF of generators that lie in their own cell. For a
// step F both integrals collapse to finite sums, and the transform is
// invertible by a forward recursion over the jump locations. The planar
// volume-biased CDF
//   V(z; F, m) = 1 - exp(-pi int_0^z F) + pi F(z) (m - int_0^z exp(-pi int_0^u F) du)
// with m = m_F = int_0^inf exp(-pi int_0^u F) du is the weight CDF of a
// cell sampled proportionally to its area; it is inverted the same way.
#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "lagtess/geometry.hpp"
#include "lagtess/stepcdf.hpp"

namespace lagtess {

struct DimensionParams {
  int d = 2;
  double kappa = std::numbers::pi;  // volume of the unit ball
  double omega = 2.0 * std::numbers::pi;  // surface measure of the unit sphere, = d * kappa
};

inline DimensionParams dimension_params(int d) {
  if (d < 2) throw std::invalid_argument("dimension_params: d must be >= 2");
  const double kappa = std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(1.0 + 0.5 * d);
  return {d, kappa, d * kappa};
}

namespace detail {

// x^{d/2} with fast paths for the dimensions in actual use.
inline double half_power(double x, int d) {
  if (x <= 0.0) return 0.0;
  if (d == 2) return x;
  if (d == 3) return x * std::sqrt(x);
  if (d == 4) return x * x;
  return std::pow(x, 0.5 * d);
}

}  // namespace detail

// G(z) for step F, exactly: the self-term of the inner sum vanishes, so
//   G(h_i) = G(h_{i-1}) + dF_i * exp(-kappa_d sum_{j<i} (h_i-h_j)^{d/2} dF_j).
// For d = 2 the exponent telescopes: S_i = S_{i-1} + kappa (h_i - h_{i-1}) F(h_{i-1}).
inline StepCdf thinned_cdf(const StepCdf& f, const DimensionParams& dim) {
  const auto& h = f.locations();
  const auto& v = f.values();
  const std::size_t k = h.size();
  std::vector<std::pair<double, double>> out;
  out.reserve(k);
  CompensatedSum g;
  CompensatedSum expo;  // d = 2 telescoped exponent
  for (std::size_t i = 0; i < k; ++i) {
    double s;
    if (dim.d == 2) {
      if (i > 0) expo.add(dim.kappa * (h[i] - h[i - 1]) * v[i - 1]);
      s = expo.value();
    } else {
      CompensatedSum acc;
      for (std::size_t j = 0; j < i; ++j)
        acc.add(detail::half_power(h[i] - h[j], dim.d) * f.jump_mass(j));
      s = dim.kappa * acc.value();
    }
    g.add(f.jump_mass(i) * std::exp(-s));
    out.emplace_back(h[i], g.value());
  }
  return StepCdf::from_points(std::move(out));
}

// Intensity density (per unit area) of the thinning toward offset y:
//   int_0^z exp(-kappa_d int_0^{q+h} (q+h-t)^{d/2} dF(t)) dF(h),  q = |y|^2.
// At q = 0 this is exactly thinned_cdf evaluated at z.
inline double thinned_intensity(const StepCdf& f, const DimensionParams& dim, double y_norm_sq,
                                double z) {
  if (y_norm_sq < 0.0) throw std::invalid_argument("thinned_intensity: negative |y|^2");
  const auto& h = f.locations();
  CompensatedSum total;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (h[i] > z) break;
    const double cap = y_norm_sq + h[i];
    CompensatedSum acc;
    for (std::size_t j = 0; j < h.size(); ++j) {
      if (h[j] > cap) break;
      acc.add(detail::half_power(cap - h[j], dim.d) * f.jump_mass(j));
    }
    total.add(f.jump_mass(i) * std::exp(-dim.kappa * acc.value()));
  }
  return total.value();
}

// The unique step F with thinned_cdf(F) = g, by the forward recursion
//   dF_i = dG_i * exp(+kappa_d sum_{j<i} (h_i-h_j)^{d/2} dF_j).
inline StepCdf invert_thinned_cdf(const StepCdf& g, const DimensionParams& dim) {
  const auto& h = g.locations();
  const std::size_t k = h.size();
  std::vector<std::pair<double, double>> out;
  out.reserve(k);
  std::vector<double> df(k);
  CompensatedSum cum;
  CompensatedSum expo;  // d = 2 telescoped exponent of the reconstruction
  for (std::size_t i = 0; i < k; ++i) {
    double s;
    if (dim.d == 2) {
      if (i > 0) expo.add(dim.kappa * (h[i] - h[i - 1]) * cum.value());
      s = expo.value();
    } else {
      CompensatedSum acc;
      for (std::size_t j = 0; j < i; ++j) acc.add(detail::half_power(h[i] - h[j], dim.d) * df[j]);
      s = dim.kappa * acc.value();
    }
    df[i] = g.jump_mass(i) * std::exp(s);
    if (!std::isfinite(df[i]))
      throw std::runtime_error("invert_thinned_cdf: reconstruction overflowed");
    cum.add(df[i]);
    out.emplace_back(h[i], cum.value());
  }
  return StepCdf::from_points(std::move(out));
}

// Generator set plus its tessellation, restricted to an eroded counting
// window so that no partially observed cell enters an estimator.
struct EmpiricalInputs {
  const GeneratorSet* gens = nullptr;
  const Tessellation* tess = nullptr;
  Rect eroded_window;
};

inline EmpiricalInputs make_empirical_inputs(const GeneratorSet& gens, const Tessellation& tess,
                                             double erode_margin) {
  if (tess.cells.size() != gens.points.size())
    throw std::invalid_argument("EmpiricalInputs: tessellation not aligned with generators");
  if (erode_margin < 0.0) throw std::invalid_argument("EmpiricalInputs: negative erosion");
  const Rect eroded = gens.window.eroded(erode_margin);
  if (eroded.degenerate())
    throw std::invalid_argument("EmpiricalInputs: erosion leaves an empty window");
  return {&gens, &tess, eroded};
}

// Empirical thinned CDF: jumps at the distinct weights of generators inside
// the eroded window that contain their own generator, each of mass
// 1/area(eroded window) per generator. Unbiased for G.
inline StepCdf empirical_thinned_cdf(const EmpiricalInputs& inp) {
  const double w = 1.0 / inp.eroded_window.area();
  std::vector<std::pair<double, double>> atoms;
  for (std::size_t i = 0; i < inp.gens->points.size(); ++i) {
    const WeightedPoint& p = inp.gens->points[i];
    if (!inp.eroded_window.contains(p.x)) continue;
    if (!inp.tess->cells[i].contains_own_generator) continue;
    atoms.emplace_back(p.h, w);
  }
  return StepCdf::from_atoms(std::move(atoms));
}

struct EmpiricalVolumeCdfs {
  StepCdf tilde;                // normalized by window area; terminal ~ 1 up to edge effects
  std::optional<StepCdf> hat;   // normalized by total observed volume; terminal exactly 1
};

// Volume-weighted weight CDFs over cells of generators in the eroded window,
// excluding cells that touch the clip boundary. With no qualifying cell the
// ratio form is undefined and `hat` is absent.
inline EmpiricalVolumeCdfs empirical_volume_cdfs(const EmpiricalInputs& inp) {
  if (inp.gens->dim != 2)
    throw std::invalid_argument("empirical_volume_cdfs: planar generators required");
  std::vector<std::pair<double, double>> atoms;
  CompensatedSum total;
  for (std::size_t i = 0; i < inp.gens->points.size(); ++i) {
    const WeightedPoint& p = inp.gens->points[i];
    const LaguerreCell& cell = inp.tess->cells[i];
    if (cell.is_empty || cell.touches_clip_boundary) continue;
    if (!inp.eroded_window.contains(p.x)) continue;
    atoms.emplace_back(p.h, cell.area);
    total.add(cell.area);
  }
  EmpiricalVolumeCdfs out;
  if (atoms.empty()) return out;  // tilde is the zero function, hat undefined
  std::vector<std::pair<double, double>> scaled = atoms;
  const double inv_area = 1.0 / inp.eroded_window.area();
  for (auto& a : scaled) a.second *= inv_area;
  out.tilde = StepCdf::from_atoms(std::move(scaled));
  const double inv_total = 1.0 / total.value();
  for (auto& a : atoms) a.second *= inv_total;
  out.hat = StepCdf::from_atoms(std::move(atoms));
  return out;
}

// Normalizing constant m_F = int_0^inf exp(-pi int_0^u F) du of the planar
// volume-biased CDF. Infinite (error) for the zero function; always greater
// than the first jump location, whose segment contributes exactly h_1.
inline double tail_mass(const StepCdf& f) {
  if (f.is_zero()) throw std::invalid_argument("tail_mass: zero function has infinite mass");
  return exp_tail_integral(f, 0.0, std::numbers::pi);
}

// V(z; F, m), exact for step F.
inline double volume_biased_value(const StepCdf& f, double m, double z) {
  const double pi = std::numbers::pi;
  const double head = exp_integral_range(f, 0.0, z, pi);
  return -std::expm1(-pi * f.integral_to(z)) + pi * f.value(z) * (m - head);
}

namespace detail {

// Adaptive Simpson with interval splits; used only by the general-d
// quadrature route of volume_biased_cdf.
template <class Fn>
double adaptive_simpson_rec(Fn& fn, double a, double b, double fa, double fm, double fb,
                            double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = fn(lm);
  const double frm = fn(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson_rec(fn, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_rec(fn, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <class Fn>
double adaptive_simpson(Fn fn, double a, double b, double tol, int depth = 40) {
  if (!(b > a)) return 0.0;
  const double fa = fn(a);
  const double fb = fn(b);
  const double m = 0.5 * (a + b);
  const double fm = fn(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson_rec(fn, a, m, fa, fm, fb, whole, tol, depth);
}

}  // namespace detail

// Volume-biased CDF F^V(z) in [0, 1]. d = 2 uses the closed form through
// exp_integral_range; other dimensions integrate
//   1 - exp(-kappa A(z)) + (omega/2) int_z^inf exp(-kappa A(u)) B_z(u) du,
// with A, B_z exact step sums, adaptively to 1e-8 and truncated once the
// integrand falls below 1e-14 of its peak. The quadrature route exists as
// an oracle; production paths are planar.
inline double volume_biased_cdf(const StepCdf& f, const DimensionParams& dim, double z) {
  if (f.is_zero()) throw std::invalid_argument("volume_biased_cdf: zero F");
  if (dim.d == 2) return volume_biased_value(f, tail_mass(f), z);

  const auto inner_a = [&](double u) {
    CompensatedSum acc;
    for (std::size_t j = 0; j < f.jump_count(); ++j) {
      if (f.locations()[j] > u) break;
      acc.add(detail::half_power(u - f.locations()[j], dim.d) * f.jump_mass(j));
    }
    return acc.value();
  };
  const auto inner_b = [&](double u) {
    const double cap = std::min(u, z);
    CompensatedSum acc;
    for (std::size_t j = 0; j < f.jump_count(); ++j) {
      if (f.locations()[j] > cap) break;
      acc.add(detail::half_power(u - f.locations()[j], dim.d - 2) * f.jump_mass(j));
    }
    return acc.value();
  };
  const auto integrand = [&](double u) { return std::exp(-dim.kappa * inner_a(u)) * inner_b(u); };

  const double head = -std::expm1(-dim.kappa * inner_a(z));
  // truncate the improper integral where the integrand is negligible
  double peak = 0.0;
  double upper = z;
  const double hk = f.locations().back();
  double step = std::max(1.0, hk - z > 0.0 ? (hk - z) : hk);
  while (true) {
    const double val = integrand(upper);
    peak = std::max(peak, val);
    if (upper > z && peak > 0.0 && val < 1e-14 * peak) break;
    upper += step;
    if (upper > z + 1e6) break;
  }
  // split at jump locations (integrand kinks there)
  std::vector<double> cuts{z};
  for (double hj : f.locations())
    if (hj > z && hj < upper) cuts.push_back(hj);
  cuts.push_back(upper);
  double tail = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    tail += detail::adaptive_simpson(integrand, cuts[i], cuts[i + 1], 1e-9);
  return head + 0.5 * dim.omega * tail;
}

struct VolumeInversion {
  StepCdf f;
  std::vector<std::size_t> clamped;  // jump indices where monotonicity was enforced
};

// The unique step F with V(.; F, m_F) equal to the given volume-biased step
// CDF, assuming its terminal value is 1 and m exceeds the first jump
// location. The ratio recursion
//   F(h_i) = F(h_{i-1}) * (FV(h_i) - 1 + E_i) / (FV(h_{i-1}) - 1 + E_i),
//   E_i = exp(-pi int_0^{h_i} F),
// is evaluated in log space. Whenever the denominator is not positive the
// recursion has no valid continuation (the overflow pathology of the ratio
// form); the value is clamped to the previous level and the jump index is
// recorded, never silently.
inline VolumeInversion invert_volume_biased(const StepCdf& fv, double m_hat) {
  const double pi = std::numbers::pi;
  const auto& h = fv.locations();
  const auto& v = fv.values();
  const std::size_t k = h.size();
  if (k == 0) throw std::invalid_argument("invert_volume_biased: empty input");
  if (std::abs(fv.terminal() - 1.0) > 1e-8)
    throw std::invalid_argument("invert_volume_biased: terminal value must be 1");
  if (!(m_hat > h[0])) throw std::invalid_argument("invert_volume_biased: m <= first jump");

  VolumeInversion result;
  std::vector<double> fvals(k);
  CompensatedSum expo;  // pi * int_0^{h_i} F of the reconstruction
  double prev = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    if (i > 0) expo.add(pi * (h[i] - h[i - 1]) * prev);
    double cur;
    if (prev == 0.0) {
      // all-zero prefix: exp_tail of the reconstruction from h_i is m - h_i
      if (v[i] > 0.0 && !(m_hat > h[i]))
        throw std::invalid_argument("invert_volume_biased: m too small for first positive jump");
      cur = v[i] > 0.0 ? v[i] / (pi * (m_hat - h[i])) : 0.0;
    } else {
      const double log_e = -expo.value();
      const double delta_cur = std::max(0.0, 1.0 - v[i]);
      const double delta_prev = std::max(0.0, 1.0 - v[i - 1]);
      const double q_prev = delta_prev > 0.0 ? std::exp(std::log(delta_prev) - log_e) : 0.0;
      if (q_prev >= 1.0) {
        result.clamped.push_back(i);
        cur = prev;
      } else {
        const double q_cur = delta_cur > 0.0 ? std::exp(std::log(delta_cur) - log_e) : 0.0;
        const double ratio = std::exp(std::log1p(-q_cur) - std::log1p(-q_prev));
        cur = prev * ratio;
      }
    }
    if (cur < prev) cur = prev;  // guard roundoff
    fvals[i] = cur;
    prev = cur;
  }
  std::vector<std::pair<double, double>> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = {h[i], fvals[i]};
  result.f = StepCdf::from_points(std::move(out));
  return result;
}

}  // namespace lagtess
