// Command-line front end: simulate / section / tessellate / estimate /
// stereo / study / plot, all pure file-to-file transforms (any randomness
// is seeded explicitly). Kept in a header so tests can drive the dispatcher
// in-process.
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lagtess/harness.hpp"
#include "lagtess/io.hpp"
#include "lagtess/svg.hpp"

namespace lagtess {

namespace cli_detail {

// --dist step:<csv> | discrete:<csv> | uniform:M=<v>
inline CdfModel parse_dist_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw std::runtime_error("distribution spec must be step:<file>, discrete:<file> or uniform:M=<v>");
  const std::string kind = spec.substr(0, colon);
  const std::string rest = spec.substr(colon + 1);
  if (kind == "step" || kind == "discrete") return CdfModel::step(read_step_cdf(rest));
  if (kind == "uniform") {
    if (rest.rfind("M=", 0) != 0) throw std::runtime_error("uniform spec must be uniform:M=<v>");
    return CdfModel::uniform_identity(std::stod(rest.substr(2)));
  }
  throw std::runtime_error("unknown distribution kind: " + kind);
}

inline CdfModel parse_dist_json(const nlohmann::json& j) {
  if (j.is_string()) return parse_dist_spec(j.get<std::string>());
  const std::string type = j.at("type").get<std::string>();
  if (type == "uniform") return CdfModel::uniform_identity(json_number(j.at("M")));
  if (type == "step" || type == "discrete") {
    if (j.contains("file")) return CdfModel::step(read_step_cdf(j.at("file").get<std::string>()));
    std::vector<std::pair<double, double>> pts;
    for (const auto& row : j.at("jumps")) pts.emplace_back(json_number(row[0]), json_number(row[1]));
    return CdfModel::step(StepCdf::from_points(std::move(pts)));
  }
  if (type == "scaled")
    return CdfModel::scaled(parse_dist_json(j.at("base")), json_number(j.at("factor")));
  throw std::runtime_error("unknown distribution type: " + type);
}

inline double parse_auto_or_value(const std::string& s, double auto_value) {
  if (s == "auto") return auto_value;
  return std::stod(s);
}

inline Rect parse_window(const std::string& s) {
  double v[4];
  std::size_t pos = 0;
  for (int i = 0; i < 4; ++i) {
    std::size_t used = 0;
    v[i] = std::stod(s.substr(pos), &used);
    pos += used;
    if (i < 3) {
      if (pos >= s.size() || s[pos] != ',') throw std::runtime_error("window must be xmin,ymin,xmax,ymax");
      ++pos;
    }
  }
  return {{v[0], v[1]}, {v[2], v[3]}};
}

inline nlohmann::json tessellation_to_json(const Tessellation& tess) {
  nlohmann::json j;
  j["clip"] = {tess.clip.lo.x, tess.clip.lo.y, tess.clip.hi.x, tess.clip.hi.y};
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : tess.cells) {
    nlohmann::json cj;
    cj["generator"] = c.generator;
    cj["area"] = c.area;
    cj["empty"] = c.is_empty;
    cj["own"] = c.contains_own_generator;
    cj["boundary"] = c.touches_clip_boundary;
    nlohmann::json poly = nlohmann::json::array();
    for (const Vec2& p : c.polygon) poly.push_back({p.x, p.y});
    cj["polygon"] = std::move(poly);
    cells.push_back(std::move(cj));
  }
  j["cells"] = std::move(cells);
  return j;
}

inline std::string results_csv(const StudyStats& stats, double pn) {
  std::string out = "estimator,P_n,probe_z,mean_abs_err,q025,q975,n_reps,n_excluded\n";
  for (const auto& est : stats.estimators) {
    for (const auto& ps : est.probes) {
      out += est.name + "," + format_double(pn) + "," + format_double(ps.z) + "," +
             format_double(ps.mean_abs_err) + "," + format_double(ps.q025) + "," +
             format_double(ps.q975) + "," + std::to_string(stats.replications) + "," +
             std::to_string(stats.excluded) + "\n";
    }
  }
  return out;
}

inline std::string curves_csv(const StudyStats& stats) {
  std::string out = "estimator,z,average\n";
  for (const auto& est : stats.estimators)
    for (std::size_t g = 0; g < stats.grid.size(); ++g)
      out += est.name + "," + format_double(stats.grid[g]) + "," +
             format_double(est.average_curve[g]) + "\n";
  return out;
}

}  // namespace cli_detail

inline int run_cli(std::vector<std::string> args) {
  using cli_detail::parse_auto_or_value;
  CLI::App app{"Poisson-Laguerre tessellation simulation and inference"};
  app.require_subcommand(1);

  // ---- simulate ----
  auto* sim = app.add_subcommand("simulate", "sample a weighted Poisson generator set");
  std::string sim_dist, sim_guard = "auto", sim_window, sim_out;
  double sim_pn = 0.0;
  std::uint64_t sim_seed = 1;
  sim->add_option("--dist", sim_dist, "step:<csv> | discrete:<csv> | uniform:M=<v>")->required();
  sim->add_option("--pn", sim_pn, "target expected own-cell count (sizes the window)");
  sim->add_option("--window", sim_window, "explicit window xmin,ymin,xmax,ymax");
  sim->add_option("--guard", sim_guard, "simulation margin, or auto");
  sim->add_option("--seed", sim_seed, "RNG seed");
  sim->add_option("--out", sim_out, "output generator JSON")->required();

  // ---- section ----
  auto* sec = app.add_subcommand("section", "sample a sectional (d=3 slab) generator set");
  std::string sec_dist, sec_guard = "auto", sec_window, sec_out, sec_hmax = "auto";
  double sec_pn = 0.0;
  std::uint64_t sec_seed = 1;
  sec->add_option("--distH", sec_dist, "spatial weight distribution H")->required();
  sec->add_option("--hmax", sec_hmax, "weight truncation, or auto");
  sec->add_option("--pn", sec_pn, "target expected own-cell count (sizes the window)");
  sec->add_option("--window", sec_window, "explicit window xmin,ymin,xmax,ymax");
  sec->add_option("--guard", sec_guard, "simulation margin, or auto");
  sec->add_option("--seed", sec_seed, "RNG seed");
  sec->add_option("--out", sec_out, "output generator JSON")->required();

  // ---- tessellate ----
  auto* tes = app.add_subcommand("tessellate", "compute the Laguerre diagram of a generator set");
  std::string tes_gens, tes_out, tes_svg;
  bool tes_circles = false;
  tes->add_option("--gens", tes_gens, "generator JSON")->required();
  tes->add_option("--out", tes_out, "cell records JSON");
  tes->add_option("--svg", tes_svg, "SVG rendering");
  tes->add_flag("--circles", tes_circles, "draw generator circles with radius proportional to weight");

  // ---- estimate ----
  auto* est = app.add_subcommand("estimate", "estimate a distribution function from generators");
  std::string est_mode, est_gens, est_erode = "auto", est_out;
  bool est_tilde = false;
  est->add_option("mode", est_mode, "g | f0 | fv | f")->required();
  est->add_option("--gens", est_gens, "generator JSON")->required();
  est->add_option("--erode", est_erode, "erosion margin, or auto (= guard)");
  est->add_flag("--tilde", est_tilde, "for fv: write the window-normalized variant");
  est->add_option("--out", est_out, "output step-CDF CSV")->required();

  // ---- stereo ----
  auto* ste = app.add_subcommand("stereo", "unfold a sectional step CDF into the spatial weight CDF");
  std::string ste_fbar, ste_m = "inf", ste_out, ste_plugin;
  std::size_t ste_grid = 512;
  ste->add_option("--fbar", ste_fbar, "sectional step-CDF CSV")->required();
  ste->add_option("--M", ste_m, "truncation point, or inf");
  ste->add_option("--out", ste_out, "isotonic estimate CSV")->required();
  ste->add_option("--plugin", ste_plugin, "also write the raw plugin inverse on a grid");
  ste->add_option("--grid", ste_grid, "plugin grid size");

  // ---- study ----
  auto* stu = app.add_subcommand("study", "run a Monte Carlo study from a JSON config");
  std::string stu_config, stu_out, stu_curves;
  stu->add_option("--config", stu_config, "study config JSON")->required();
  stu->add_option("--out", stu_out, "results CSV")->required();
  stu->add_option("--curves", stu_curves, "pointwise-average curves CSV");

  // ---- plot ----
  auto* plt = app.add_subcommand("plot", "render step-CDF curves to SVG");
  std::vector<std::string> plt_in;
  std::string plt_avg, plt_ref, plt_out;
  double plt_xmax = 0.0, plt_ymax = 0.0;
  plt->add_option("--in", plt_in, "realization curves (thin)");
  plt->add_option("--avg", plt_avg, "pointwise-average curve (thick)");
  plt->add_option("--ref", plt_ref, "reference curve (dashed)");
  plt->add_option("--out", plt_out, "output SVG")->required();
  plt->add_option("--xmax", plt_xmax, "x-axis maximum");
  plt->add_option("--ymax", plt_ymax, "y-axis maximum");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*sim) {
      const CdfModel model = cli_detail::parse_dist_spec(sim_dist);
      Rect window;
      if (!sim_window.empty())
        window = cli_detail::parse_window(sim_window);
      else if (sim_pn > 0.0)
        window = window_for_target_count(model, 2, sim_pn);
      else
        throw std::runtime_error("simulate: need --pn or --window");
      const double guard = parse_auto_or_value(sim_guard, default_guard(model, window));
      write_generator_set(sim_out, sample_generators(model, window, guard, sim_seed));
    } else if (*sec) {
      const CdfModel model_h = cli_detail::parse_dist_spec(sec_dist);
      const double h_max =
          sec_hmax == "auto" ? default_section_truncation(model_h) : std::stod(sec_hmax);
      std::vector<std::pair<double, double>> pts(2000);
      for (std::size_t i = 1; i <= pts.size(); ++i) {
        const double z = h_max * static_cast<double>(i) / static_cast<double>(pts.size());
        pts[i - 1] = {z, sectional_cdf(model_h, z)};
      }
      const CdfModel planar = CdfModel::step(StepCdf::from_points(std::move(pts)));
      Rect window;
      if (!sec_window.empty())
        window = cli_detail::parse_window(sec_window);
      else if (sec_pn > 0.0)
        window = window_for_target_count(planar, 2, sec_pn, 2000);
      else
        throw std::runtime_error("section: need --pn or --window");
      const double guard = parse_auto_or_value(sec_guard, default_guard(planar, window));
      write_generator_set(sec_out, section_sample(model_h, window, guard, h_max, sec_seed));
    } else if (*tes) {
      const GeneratorSet gens = read_generator_set(tes_gens);
      const Tessellation tess = tessellate(gens);
      if (!tes_out.empty())
        write_text_file(tes_out, cli_detail::tessellation_to_json(tess).dump(1) + "\n");
      if (!tes_svg.empty()) {
        TessellationSvgOptions opt;
        opt.generator_circles = tes_circles;
        write_text_file(tes_svg, tessellation_to_svg(tess, gens.points, opt));
      }
      if (tes_out.empty() && tes_svg.empty())
        throw std::runtime_error("tessellate: need --out or --svg");
    } else if (*est) {
      const GeneratorSet gens = read_generator_set(est_gens);
      const Tessellation tess = tessellate(gens);
      const double erode = parse_auto_or_value(est_erode, gens.guard);
      const EmpiricalInputs inp = make_empirical_inputs(gens, tess, erode);
      const DimensionParams dim = dimension_params(2);
      if (est_mode == "g") {
        write_step_cdf(est_out, empirical_thinned_cdf(inp));
      } else if (est_mode == "f0") {
        write_step_cdf(est_out, invert_thinned_cdf(empirical_thinned_cdf(inp), dim));
      } else if (est_mode == "fv") {
        const EmpiricalVolumeCdfs vols = empirical_volume_cdfs(inp);
        if (est_tilde) {
          write_step_cdf(est_out, vols.tilde);
        } else {
          if (!vols.hat) throw std::runtime_error("estimate fv: no qualifying cell");
          write_step_cdf(est_out, *vols.hat);
        }
      } else if (est_mode == "f") {
        const StepCdf f0 = invert_thinned_cdf(empirical_thinned_cdf(inp), dim);
        const EmpiricalVolumeCdfs vols = empirical_volume_cdfs(inp);
        if (!vols.hat) throw std::runtime_error("estimate f: no qualifying cell");
        const double m_hat = tail_mass(f0);
        const VolumeInversion inv = invert_volume_biased(*vols.hat, m_hat);
        write_step_cdf(est_out, inv.f);
        nlohmann::json meta;
        meta["m_hat"] = m_hat;
        meta["clamp_count"] = inv.clamped.size();
        nlohmann::json clamped = nlohmann::json::array();
        for (std::size_t idx : inv.clamped) clamped.push_back(inv.f.locations()[idx]);
        meta["clamped_jumps"] = std::move(clamped);
        meta["erode"] = erode;
        write_text_file(est_out + ".meta.json", meta.dump(1) + "\n");
      } else {
        throw std::runtime_error("estimate: mode must be g, f0, fv or f");
      }
    } else if (*ste) {
      const StepCdf fbar = read_step_cdf(ste_fbar);
      const double m = ste_m == "inf" ? std::numeric_limits<double>::infinity() : std::stod(ste_m);
      const IsotonicResult iso = isotonic_unfold(fbar, m);
      write_step_cdf(ste_out, iso.estimate);
      if (!ste_plugin.empty()) {
        // user grid plus the jump locations, where the plugin blows up
        std::vector<double> zs;
        const double z_hi = 1.05 * fbar.locations().back();
        for (std::size_t i = 1; i <= ste_grid; ++i)
          zs.push_back(z_hi * static_cast<double>(i) / static_cast<double>(ste_grid));
        for (double hj : fbar.locations()) zs.push_back(hj);
        std::sort(zs.begin(), zs.end());
        zs.erase(std::unique(zs.begin(), zs.end()), zs.end());
        std::string out = "z,value\n";
        for (double z : zs) {
          const double v = abel_plugin(fbar, z);
          out += format_double(z) + ",";
          out += std::isinf(v) ? "inf" : format_double(v);
          out += "\n";
        }
        write_text_file(ste_plugin, out);
      }
    } else if (*stu) {
      const nlohmann::json j = nlohmann::json::parse(read_text_file(stu_config));
      StudyConfig cfg;
      cfg.dist = cli_detail::parse_dist_json(j.at("dist"));
      const std::string kind = j.at("estimator").get<std::string>();
      if (kind == "f0")
        cfg.estimator = EstimatorKind::kThinned;
      else if (kind == "f")
        cfg.estimator = EstimatorKind::kVolume;
      else if (kind == "stereo")
        cfg.estimator = EstimatorKind::kStereo;
      else
        throw std::runtime_error("study: estimator must be f0, f or stereo");
      cfg.target_count = json_number(j.at("pn"));
      cfg.replications = static_cast<std::size_t>(json_number(j.at("reps")));
      if (j.contains("probes"))
        for (const auto& p : j.at("probes")) cfg.probes.push_back(json_number(p));
      if (j.contains("seed")) cfg.seed = static_cast<std::uint64_t>(json_number(j.at("seed")));
      if (j.contains("guard") && j.at("guard") != "auto") cfg.guard = json_number(j.at("guard"));
      if (j.contains("erode") && j.at("erode") != "auto") cfg.erode = json_number(j.at("erode"));
      if (j.contains("hmax") && j.at("hmax") != "auto") cfg.h_max = json_number(j.at("hmax"));
      if (j.contains("grid_points"))
        cfg.grid_points = static_cast<std::size_t>(json_number(j.at("grid_points")));
      const StudyStats stats = cfg.estimator == EstimatorKind::kStereo ? stereo_study(cfg)
                                                                       : run_study(cfg);
      write_text_file(stu_out, cli_detail::results_csv(stats, cfg.target_count));
      if (!stu_curves.empty()) write_text_file(stu_curves, cli_detail::curves_csv(stats));
      for (const std::string& w : stats.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    } else if (*plt) {
      PlotSpec spec;
      for (const std::string& path : plt_in) spec.curves.push_back(read_step_cdf(path));
      if (!plt_avg.empty()) {
        spec.average = read_step_cdf(plt_avg);
        spec.has_average = true;
      }
      if (!plt_ref.empty()) {
        spec.reference = read_step_cdf(plt_ref);
        spec.has_reference = true;
      }
      spec.x_max = plt_xmax;
      spec.y_max = plt_ymax;
      write_text_file(plt_out, curves_to_svg(spec));
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}

}  // namespace lagtess
