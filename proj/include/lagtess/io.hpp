// File formats: step-CDF CSV (header "h,value", ascending rows), generator
// set JSON, and the results/curves CSVs of the study runner. Doubles are
// written with 17 significant digits so write-then-read is exact.
#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lagtess/geometry.hpp"
#include "lagtess/stepcdf.hpp"

namespace lagtess {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string step_cdf_to_csv(const StepCdf& f) {
  std::string out = "h,value\n";
  for (std::size_t i = 0; i < f.jump_count(); ++i) {
    out += format_double(f.locations()[i]);
    out += ',';
    out += format_double(f.values()[i]);
    out += '\n';
  }
  return out;
}

inline StepCdf step_cdf_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("step CDF CSV: empty file");
  std::vector<std::pair<double, double>> pts;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::runtime_error("step CDF CSV: malformed row");
    pts.emplace_back(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
  }
  return StepCdf::from_points(std::move(pts));
}

inline void write_step_cdf(const std::string& path, const StepCdf& f) {
  write_text_file(path, step_cdf_to_csv(f));
}

inline StepCdf read_step_cdf(const std::string& path) {
  return step_cdf_from_csv(read_text_file(path));
}

inline nlohmann::json generator_set_to_json(const GeneratorSet& gens) {
  nlohmann::json j;
  j["d"] = gens.dim;
  j["window"] = {gens.window.lo.x, gens.window.lo.y, gens.window.hi.x, gens.window.hi.y};
  j["guard"] = gens.guard;
  nlohmann::json pts = nlohmann::json::array();
  for (const WeightedPoint& p : gens.points)
    pts.push_back({{"x", {p.x.x, p.x.y}}, {"h", p.h}});
  j["points"] = std::move(pts);
  return j;
}

inline GeneratorSet generator_set_from_json(const nlohmann::json& j) {
  GeneratorSet gens;
  gens.dim = j.at("d").get<int>();
  if (gens.dim != 2) throw std::runtime_error("generator set: only d = 2 sets are stored");
  const auto& w = j.at("window");
  if (w.size() != 4) throw std::runtime_error("generator set: window must be [xmin,ymin,xmax,ymax]");
  gens.window = {{w[0].get<double>(), w[1].get<double>()}, {w[2].get<double>(), w[3].get<double>()}};
  gens.guard = j.at("guard").get<double>();
  const Rect region = gens.simulation_region();
  for (const auto& pj : j.at("points")) {
    WeightedPoint p;
    const auto& x = pj.at("x");
    if (x.size() != 2) throw std::runtime_error("generator set: point must have 2 coordinates");
    p.x = {x[0].get<double>(), x[1].get<double>()};
    p.h = pj.at("h").get<double>();
    if (!(p.h > 0.0)) throw std::runtime_error("generator set: weights must be positive");
    if (!region.contains(p.x))
      throw std::runtime_error("generator set: point outside the dilated window");
    gens.points.push_back(p);
  }
  return gens;
}

inline void write_generator_set(const std::string& path, const GeneratorSet& gens) {
  write_text_file(path, generator_set_to_json(gens).dump(1) + "\n");
}

inline GeneratorSet read_generator_set(const std::string& path) {
  return generator_set_from_json(nlohmann::json::parse(read_text_file(path)));
}

// Numeric config fields may be JSON numbers or decimal strings.
inline double json_number(const nlohmann::json& j) {
  if (j.is_string()) return std::stod(j.get<std::string>());
  return j.get<double>();
}

}  // namespace lagtess
