// Monte Carlo study runner: repeated sample -> tessellate -> estimate
// pipelines with per-replication child seeds, signed-error statistics at
// probe locations (error convention: truth minus estimate), and pointwise
// average curves on a fixed grid. Replications run concurrently; the
// aggregation is a sequential reduce over the replication index, so output
// is deterministic for a given config.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lagtess/estimators.hpp"
#include "lagtess/parallel.hpp"
#include "lagtess/process.hpp"
#include "lagtess/stereology.hpp"

namespace lagtess {

enum class EstimatorKind { kThinned, kVolume, kStereo };  // f0 | f | stereo

struct StudyConfig {
  CdfModel dist = CdfModel::uniform_identity(1.0);  // F, or H for the stereo pipeline
  EstimatorKind estimator = EstimatorKind::kThinned;
  double target_count = 1000.0;     // expected own-cell points in the window
  std::size_t replications = 100;
  std::vector<double> probes;       // probe locations, all > 0
  std::uint64_t seed = 1;
  double guard = -1.0;              // < 0: automatic
  double erode = -1.0;              // < 0: use the guard
  double h_max = -1.0;              // stereo truncation; < 0: automatic
  std::size_t grid_points = 512;
};

struct ProbeStats {
  double z = 0.0;
  double mean_abs_err = 0.0;
  double q025 = 0.0;
  double q975 = 0.0;
};

struct EstimatorStats {
  std::string name;
  std::vector<ProbeStats> probes;
  std::vector<double> average_curve;   // on StudyStats::grid
  std::vector<StepCdf> realizations;
  std::size_t clamp_count = 0;
};

struct StudyStats {
  std::vector<double> grid;
  std::vector<EstimatorStats> estimators;
  std::size_t replications = 0;
  std::size_t excluded = 0;
  std::vector<std::string> warnings;
  double window_area = 0.0;
  double guard = 0.0;
  double erode = 0.0;
};

// Arithmetic mean of right-continuous evaluations at each grid point.
inline std::vector<double> average_curve(const std::vector<StepCdf>& realizations,
                                         const std::vector<double>& grid) {
  if (realizations.empty()) throw std::invalid_argument("average_curve: no realizations");
  std::vector<double> out(grid.size(), 0.0);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    CompensatedSum acc;
    for (const StepCdf& f : realizations) acc.add(f.value(grid[g]));
    out[g] = acc.value() / static_cast<double>(realizations.size());
  }
  return out;
}

namespace detail {

// linear-interpolation empirical quantile
inline double quantile_of(std::vector<double> sorted, double p) {
  const std::size_t n = sorted.size();
  if (n == 0) return 0.0;
  const double idx = p * static_cast<double>(n - 1);
  const std::size_t lo = static_cast<std::size_t>(idx);
  const std::size_t hi = std::min(lo + 1, n - 1);
  const double frac = idx - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

inline std::vector<double> make_grid(double z_max, std::size_t n) {
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i)
    grid[i] = z_max * static_cast<double>(i + 1) / static_cast<double>(n);
  return grid;
}

struct Replication {
  bool ok = false;
  std::string error;
  StepCdf f0;
  StepCdf f;
  StepCdf h_iso;
  std::size_t clamps = 0;
};

inline void fill_probe_stats(EstimatorStats& est, const std::vector<double>& probes,
                             const std::vector<double>& truth_at_probes) {
  const std::size_t reps = est.realizations.size();
  est.probes.clear();
  for (std::size_t p = 0; p < probes.size(); ++p) {
    std::vector<double> errors(reps);
    for (std::size_t r = 0; r < reps; ++r)
      errors[r] = truth_at_probes[p] - est.realizations[r].value(probes[p]);
    std::vector<double> abs_errors = errors;
    for (double& e : abs_errors) e = std::abs(e);
    CompensatedSum mean;
    for (double e : abs_errors) mean.add(e);
    std::sort(errors.begin(), errors.end());
    ProbeStats ps;
    ps.z = probes[p];
    ps.mean_abs_err = mean.value() / static_cast<double>(reps);
    ps.q025 = quantile_of(errors, 0.025);
    ps.q975 = quantile_of(errors, 0.975);
    est.probes.push_back(ps);
  }
}

}  // namespace detail

// Direct (planar) study: per replication, the first inverse estimator is
// always computed; the second is added for EstimatorKind::kVolume. A
// replication that cannot produce an estimate (no own-cell point in the
// eroded window) is recorded and excluded, never silently dropped.
inline StudyStats run_study(const StudyConfig& cfg) {
  if (cfg.replications < 1) throw std::invalid_argument("run_study: need at least one replication");
  for (double z : cfg.probes)
    if (!(z > 0.0)) throw std::invalid_argument("run_study: probes must be positive");
  if (cfg.estimator == EstimatorKind::kStereo)
    throw std::invalid_argument("run_study: use stereo_study for the sectional pipeline");

  const DimensionParams dim = dimension_params(2);
  const Rect window = window_for_target_count(cfg.dist, 2, cfg.target_count);
  const double guard = cfg.guard >= 0.0 ? cfg.guard : default_guard(cfg.dist, window);
  const double erode = cfg.erode >= 0.0 ? cfg.erode : guard;
  const bool want_volume = cfg.estimator == EstimatorKind::kVolume;

  std::vector<detail::Replication> reps(cfg.replications);
  parallel_for(cfg.replications, [&](std::size_t r) {
    detail::Replication& rep = reps[r];
    try {
      const GeneratorSet gens =
          sample_generators(cfg.dist, window, guard, Rng::child(cfg.seed, "study-rep", r).next_u64());
      const Tessellation tess = tessellate(gens);
      const EmpiricalInputs inp = make_empirical_inputs(gens, tess, erode);
      const StepCdf g_hat = empirical_thinned_cdf(inp);
      if (g_hat.jump_count() == 0) throw std::runtime_error("no own-cell point in eroded window");
      rep.f0 = invert_thinned_cdf(g_hat, dim);
      if (want_volume) {
        const EmpiricalVolumeCdfs vols = empirical_volume_cdfs(inp);
        if (!vols.hat) throw std::runtime_error("no qualifying cell for the volume estimator");
        const double m_hat = tail_mass(rep.f0);
        VolumeInversion inv = invert_volume_biased(*vols.hat, m_hat);
        rep.f = std::move(inv.f);
        rep.clamps = inv.clamped.size();
      }
      rep.ok = true;
    } catch (const std::exception& e) {
      rep.error = e.what();
    }
  });

  StudyStats stats;
  stats.window_area = window.area();
  stats.guard = guard;
  stats.erode = erode;
  stats.grid = detail::make_grid(1.05 * cfg.dist.support_max(), cfg.grid_points);

  EstimatorStats f0_stats;
  f0_stats.name = "f0";
  EstimatorStats f_stats;
  f_stats.name = "f";
  for (std::size_t r = 0; r < reps.size(); ++r) {
    if (!reps[r].ok) {
      ++stats.excluded;
      stats.warnings.push_back("replication " + std::to_string(r) + " excluded: " + reps[r].error);
      continue;
    }
    f0_stats.realizations.push_back(reps[r].f0);
    if (want_volume) {
      f_stats.realizations.push_back(reps[r].f);
      f_stats.clamp_count += reps[r].clamps;
      if (reps[r].clamps > 0)
        stats.warnings.push_back("replication " + std::to_string(r) + ": " +
                                 std::to_string(reps[r].clamps) + " monotonicity clamp(s)");
    }
  }
  stats.replications = f0_stats.realizations.size();
  if (stats.replications == 0) throw std::runtime_error("run_study: every replication failed");

  std::vector<double> truth(cfg.probes.size());
  for (std::size_t p = 0; p < cfg.probes.size(); ++p) truth[p] = cfg.dist.value(cfg.probes[p]);
  detail::fill_probe_stats(f0_stats, cfg.probes, truth);
  f0_stats.average_curve = average_curve(f0_stats.realizations, stats.grid);
  stats.estimators.push_back(std::move(f0_stats));
  if (want_volume) {
    detail::fill_probe_stats(f_stats, cfg.probes, truth);
    f_stats.average_curve = average_curve(f_stats.realizations, stats.grid);
    stats.estimators.push_back(std::move(f_stats));
  }
  return stats;
}

// Sectional (d = 3) study: the config distribution is H. Each replication
// samples the slab process, estimates the planar F by the first inverse
// estimator, and unfolds it isotonically.
inline StudyStats stereo_study(const StudyConfig& cfg) {
  if (cfg.replications < 1) throw std::invalid_argument("stereo_study: need at least one replication");
  const DimensionParams dim = dimension_params(2);
  const double h_max = cfg.h_max > 0.0 ? cfg.h_max : default_section_truncation(cfg.dist);

  // window sized through the truncated planar weight CDF
  std::vector<std::pair<double, double>> pts(2000);
  for (std::size_t i = 1; i <= pts.size(); ++i) {
    const double z = h_max * static_cast<double>(i) / static_cast<double>(pts.size());
    pts[i - 1] = {z, sectional_cdf(cfg.dist, z)};
  }
  const CdfModel planar = CdfModel::step(StepCdf::from_points(std::move(pts)));
  const Rect window = window_for_target_count(planar, 2, cfg.target_count, 2000);
  const double guard = cfg.guard >= 0.0 ? cfg.guard : default_guard(planar, window);
  const double erode = cfg.erode >= 0.0 ? cfg.erode : guard;

  std::vector<detail::Replication> reps(cfg.replications);
  parallel_for(cfg.replications, [&](std::size_t r) {
    detail::Replication& rep = reps[r];
    try {
      const GeneratorSet gens = section_sample(cfg.dist, window, guard, h_max,
                                               Rng::child(cfg.seed, "stereo-rep", r).next_u64());
      const Tessellation tess = tessellate(gens);
      const EmpiricalInputs inp = make_empirical_inputs(gens, tess, erode);
      const StepCdf g_hat = empirical_thinned_cdf(inp);
      if (g_hat.jump_count() < 2) throw std::runtime_error("fewer than 2 own-cell weights");
      rep.f0 = invert_thinned_cdf(g_hat, dim);
      rep.h_iso = isotonic_unfold(rep.f0).estimate;
      rep.ok = true;
    } catch (const std::exception& e) {
      rep.error = e.what();
    }
  });

  StudyStats stats;
  stats.window_area = window.area();
  stats.guard = guard;
  stats.erode = erode;
  stats.grid = detail::make_grid(1.05 * cfg.dist.support_max(), cfg.grid_points);

  EstimatorStats h_stats;
  h_stats.name = "stereo";
  for (std::size_t r = 0; r < reps.size(); ++r) {
    if (!reps[r].ok) {
      ++stats.excluded;
      stats.warnings.push_back("replication " + std::to_string(r) + " excluded: " + reps[r].error);
      continue;
    }
    h_stats.realizations.push_back(reps[r].h_iso);
  }
  stats.replications = h_stats.realizations.size();
  if (stats.replications == 0) throw std::runtime_error("stereo_study: every replication failed");

  std::vector<double> truth(cfg.probes.size());
  for (std::size_t p = 0; p < cfg.probes.size(); ++p) truth[p] = cfg.dist.value(cfg.probes[p]);
  detail::fill_probe_stats(h_stats, cfg.probes, truth);
  h_stats.average_curve = average_curve(h_stats.realizations, stats.grid);
  stats.estimators.push_back(std::move(h_stats));
  return stats;
}

}  // namespace lagtess
