// Random-input generators for the property tests. Scales are chosen so the
// forward/inverse recursions stay within double range: the reconstruction
// exponent is bounded by kappa * (location span) * (total value), which the
// joint draws keep moderate.
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "lagtess/geometry.hpp"
#include "lagtess/rng.hpp"
#include "lagtess/stepcdf.hpp"

namespace testgen {

using lagtess::Rng;
using lagtess::StepCdf;

// Step CDF with k jumps in (0, span], total value up to `total`.
inline StepCdf random_step_cdf(Rng& rng, std::size_t max_jumps, double span, double total) {
  const std::size_t k = 1 + static_cast<std::size_t>(rng.uniform01() * max_jumps);
  std::vector<double> locs(k);
  for (auto& h : locs) h = span * (1.0 - rng.uniform01());  // (0, span]
  std::vector<double> masses(k);
  double sum = 0.0;
  for (auto& m : masses) {
    m = rng.uniform01();
    sum += m;
  }
  const double scale = total * rng.uniform01() / (sum > 0.0 ? sum : 1.0);
  std::vector<std::pair<double, double>> atoms(k);
  for (std::size_t i = 0; i < k; ++i) atoms[i] = {locs[i], masses[i] * scale};
  return StepCdf::from_atoms(std::move(atoms));
}

// Mixture used by the inversion round trips: mostly wide/low, sometimes
// narrow/tall, never both wide and tall.
inline StepCdf random_round_trip_cdf(Rng& rng, std::size_t max_jumps = 50) {
  if (rng.uniform01() < 0.7) return random_step_cdf(rng, max_jumps, 10.0, 2.0);
  return random_step_cdf(rng, max_jumps, 0.5, 10.0);
}

// Step CDF guaranteed nonzero with at least `min_jumps` jumps.
inline StepCdf random_nonzero_step_cdf(Rng& rng, std::size_t min_jumps, std::size_t max_jumps,
                                       double span, double total) {
  while (true) {
    StepCdf f = random_step_cdf(rng, max_jumps, span, total);
    if (f.jump_count() >= min_jumps && !f.is_zero()) return f;
  }
}

// Random planar generator set with distinct positions.
inline lagtess::GeneratorSet random_generator_set(Rng& rng, std::size_t n, double box_side,
                                                  double weight_span) {
  lagtess::GeneratorSet gens;
  gens.dim = 2;
  gens.window = {{0.0, 0.0}, {box_side, box_side}};
  gens.guard = 0.0;
  gens.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    lagtess::WeightedPoint p;
    p.x = {rng.uniform(0.0, box_side), rng.uniform(0.0, box_side)};
    // a third of the instances get heavily tied weights
    if (rng.uniform01() < 0.33) {
      p.h = weight_span * (1.0 + static_cast<double>(rng.next_u64() % 4)) / 4.0;
    } else {
      p.h = weight_span * (1.0 - rng.uniform01());
    }
    gens.points.push_back(p);
  }
  return gens;
}

}  // namespace testgen
