// Sampling of Poisson generator sets driven by a weight distribution model,
// the slab-and-project construction of sectional generator sets, and window
// sizing for a target expected count of own-cell points.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lagtess/estimators.hpp"
#include "lagtess/geometry.hpp"
#include "lagtess/rng.hpp"
#include "lagtess/stepcdf.hpp"
#include "lagtess/stereology.hpp"

namespace lagtess {

// Sampling-capable weight distribution: a step CDF, the truncated-identity
// CDF z -> min(z, M), or a scaled wrapper. Total mass must be finite and
// positive to sample; quantile is the generalized inverse of value().
class CdfModel {
 public:
  static CdfModel step(StepCdf f) {
    CdfModel m;
    m.kind_ = Kind::kStep;
    m.step_ = std::move(f);
    return m;
  }
  static CdfModel uniform_identity(double max) {
    if (!(max > 0.0)) throw std::invalid_argument("CdfModel: M must be positive");
    CdfModel m;
    m.kind_ = Kind::kUniform;
    m.uniform_max_ = max;
    return m;
  }
  static CdfModel scaled(CdfModel base, double factor) {
    if (!(factor > 0.0)) throw std::invalid_argument("CdfModel: scale factor must be positive");
    CdfModel m;
    m.kind_ = Kind::kScaled;
    m.base_ = std::make_shared<CdfModel>(std::move(base));
    m.factor_ = factor;
    return m;
  }

  double value(double z) const {
    switch (kind_) {
      case Kind::kStep: return step_.value(z);
      case Kind::kUniform: return std::clamp(z, 0.0, uniform_max_);
      case Kind::kScaled: return factor_ * base_->value(z);
    }
    return 0.0;
  }

  double total_mass() const {
    switch (kind_) {
      case Kind::kStep: return step_.terminal();
      case Kind::kUniform: return uniform_max_;
      case Kind::kScaled: return factor_ * base_->total_mass();
    }
    return 0.0;
  }

  // Smallest z with value(z) >= u, for u in (0, total_mass].
  double quantile(double u) const {
    if (!(u > 0.0) || u > total_mass())
      throw std::invalid_argument("CdfModel: quantile argument out of range");
    switch (kind_) {
      case Kind::kStep: {
        const auto& v = step_.values();
        const auto it = std::lower_bound(v.begin(), v.end(), u);
        return step_.locations()[static_cast<std::size_t>(it - v.begin())];
      }
      case Kind::kUniform: return u;
      case Kind::kScaled: return base_->quantile(u / factor_);
    }
    return 0.0;
  }

  double support_min() const {
    switch (kind_) {
      case Kind::kStep: return step_.jump_count() ? step_.locations().front() : 0.0;
      case Kind::kUniform: return 0.0;
      case Kind::kScaled: return base_->support_min();
    }
    return 0.0;
  }

  double support_max() const {
    switch (kind_) {
      case Kind::kStep: return step_.jump_count() ? step_.locations().back() : 0.0;
      case Kind::kUniform: return uniform_max_;
      case Kind::kScaled: return base_->support_max();
    }
    return 0.0;
  }

  // Step representation; exact for step models, a k-point right-endpoint
  // grid discretization otherwise.
  StepCdf as_step(std::size_t k = 10000) const {
    switch (kind_) {
      case Kind::kStep: return step_;
      case Kind::kScaled: {
        StepCdf base = base_->as_step(k);
        std::vector<std::pair<double, double>> pts(base.jump_count());
        for (std::size_t i = 0; i < base.jump_count(); ++i)
          pts[i] = {base.locations()[i], factor_ * base.values()[i]};
        return StepCdf::from_points(std::move(pts));
      }
      case Kind::kUniform: {
        std::vector<std::pair<double, double>> pts(k);
        for (std::size_t i = 1; i <= k; ++i) {
          const double z = uniform_max_ * static_cast<double>(i) / static_cast<double>(k);
          pts[i - 1] = {z, value(z)};
        }
        return StepCdf::from_points(std::move(pts));
      }
    }
    return {};
  }

 private:
  enum class Kind { kStep, kUniform, kScaled };
  CdfModel() = default;
  Kind kind_ = Kind::kStep;
  StepCdf step_;
  double uniform_max_ = 0.0;
  std::shared_ptr<const CdfModel> base_;
  double factor_ = 1.0;
};

// Homogeneous Poisson sample of rate total_mass * area on the window
// dilated by the guard margin, weights i.i.d. by inverse CDF. Identical
// seed, identical output.
inline GeneratorSet sample_generators(const CdfModel& model, const Rect& window, double guard,
                                      std::uint64_t seed) {
  const double mass = model.total_mass();
  if (!(mass > 0.0) || !std::isfinite(mass))
    throw std::invalid_argument("sample_generators: model mass must be finite and positive");
  if (guard < 0.0) throw std::invalid_argument("sample_generators: negative guard");
  if (window.degenerate()) throw std::invalid_argument("sample_generators: degenerate window");
  GeneratorSet gens;
  gens.dim = 2;
  gens.window = window;
  gens.guard = guard;
  const Rect region = window.dilated(guard);
  Rng rng(seed);
  const std::uint64_t n = rng.poisson(mass * region.area());
  gens.points.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    WeightedPoint p;
    p.x.x = rng.uniform(region.lo.x, region.hi.x);
    p.x.y = rng.uniform(region.lo.y, region.hi.y);
    p.h = model.quantile(mass * (1.0 - rng.uniform01()));  // u in (0, mass]
    gens.points.push_back(p);
  }
  return gens;
}

// Documented guard heuristic: sqrt(support span) + 5 / sqrt(total mass).
// The first term bounds the reach of bisectors between extreme weights, the
// second scales with the typical inter-point distance.
inline double default_guard(const CdfModel& model, const Rect& /*window*/) {
  const double mass = model.total_mass();
  if (!(mass > 0.0)) throw std::invalid_argument("default_guard: model mass must be positive");
  const double span = model.support_max() - model.support_min();
  return std::sqrt(std::max(0.0, span)) + 5.0 / std::sqrt(mass);
}

// Planar weight CDF of the sectional tessellation driven by H:
//   F(z) = 2 int_0^z sqrt(z - h) dH(h),
// evaluated on a step representation of H.
inline double sectional_cdf(const CdfModel& model_h, double z, std::size_t grid = 2000) {
  return abel_transform(model_h.as_step(grid), z);
}

// Truncation point for sectional sampling: smallest h_max past the support
// of H at which a planar point of that weight lies in its own cell with
// probability at most 1e-3, i.e. exp(-pi int_0^{h_max} F) <= 1e-3 — beyond
// it, discarded weights essentially never produce cells.
inline double default_section_truncation(const CdfModel& model_h, std::size_t grid = 2000) {
  const StepCdf hs = model_h.as_step(grid);
  if (hs.is_zero()) throw std::invalid_argument("default_section_truncation: zero H");
  const double target = std::log(1000.0) / std::numbers::pi;  // int_0^{h_max} F must reach this
  const auto f_integral = [&](double z) {
    // int_0^z F(u) du = (4/3) sum_j dH_j (z - h_j)_+^{3/2}
    CompensatedSum acc;
    for (std::size_t j = 0; j < hs.jump_count(); ++j) {
      const double gap = z - hs.locations()[j];
      if (gap <= 0.0) break;
      acc.add(hs.jump_mass(j) * gap * std::sqrt(gap));
    }
    return (4.0 / 3.0) * acc.value();
  };
  double lo = hs.locations().back();
  double hi = lo + 1.0;
  while (f_integral(hi) < target) hi += (hi - lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f_integral(mid) < target ? lo : hi) = mid;
  }
  return hi;
}

// Sectional generator sample: a 3D Poisson slab of half-thickness
// sqrt(h_max) over the dilated window, projected through
// (x1, x2, x3, h) -> (x1, x2, h + x3^2), keeping transformed weights
// <= h_max. Up to that truncation the output is the planar Poisson process
// with weight CDF sectional_cdf.
inline GeneratorSet section_sample(const CdfModel& model_h, const Rect& window, double guard,
                                   double h_max, std::uint64_t seed) {
  const double mass = model_h.total_mass();
  if (!(mass > 0.0) || !std::isfinite(mass))
    throw std::invalid_argument("section_sample: model mass must be finite and positive");
  if (!(h_max >= model_h.support_max()))
    throw std::invalid_argument("section_sample: h_max below the support of H");
  if (guard < 0.0) throw std::invalid_argument("section_sample: negative guard");
  GeneratorSet gens;
  gens.dim = 2;
  gens.window = window;
  gens.guard = guard;
  const Rect region = window.dilated(guard);
  const double half_thickness = std::sqrt(h_max);
  Rng rng(seed);
  const std::uint64_t n = rng.poisson(mass * region.area() * 2.0 * half_thickness);
  gens.points.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const double x1 = rng.uniform(region.lo.x, region.hi.x);
    const double x2 = rng.uniform(region.lo.y, region.hi.y);
    const double x3 = rng.uniform(-half_thickness, half_thickness);
    const double h = model_h.quantile(mass * (1.0 - rng.uniform01()));
    const double w = h + x3 * x3;
    if (w > h_max) continue;
    gens.points.push_back({{x1, x2}, w});
  }
  return gens;
}

// Square window, centered at the origin, whose area makes the expected
// number of own-cell points equal to `target`: area = target / G(inf).
inline Rect window_for_target_count(const CdfModel& model, int d, double target,
                                    std::size_t grid = 10000) {
  if (!(target > 0.0)) throw std::invalid_argument("window_for_target_count: target must be positive");
  const StepCdf f = model.as_step(grid);
  const StepCdf g = thinned_cdf(f, dimension_params(d));
  const double g_inf = g.terminal();
  if (!(g_inf > 0.0))
    throw std::invalid_argument("window_for_target_count: thinned mass is zero");
  const double side = std::sqrt(target / g_inf);
  return {{-0.5 * side, -0.5 * side}, {0.5 * side, 0.5 * side}};
}

}  // namespace lagtess
