// Nonnegative, nondecreasing, right-continuous step functions on (0, inf)
// and the exact calculus the estimators are built on: pointwise evaluation,
// Lebesgue integrals, Stieltjes sums against a kernel, and closed-form
// integrals of exp(-c * int_0^u f) over segments and tails.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace lagtess {

// Kahan-compensated accumulator for long sums of small terms.
class CompensatedSum {
 public:
  void add(double x) {
    const double y = x - carry_;
    const double t = sum_ + y;
    carry_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

// A step CDF is stored as ascending jump locations (all > 0) together with
// the cumulative value attained at each jump. The value before the first
// jump is 0. The empty object is the zero function.
class StepCdf {
 public:
  StepCdf() = default;

  // Build from (location, cumulative value) pairs. Input may be unsorted;
  // equal locations are merged keeping the last value seen in input order.
  // Throws std::invalid_argument if the merged sequence is not a valid step
  // CDF (nonpositive location, negative value, decreasing values).
  static StepCdf from_points(std::vector<std::pair<double, double>> pts) {
    std::stable_sort(pts.begin(), pts.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    StepCdf f;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i + 1 < pts.size() && pts[i + 1].first == pts[i].first) continue;
      f.h_.push_back(pts[i].first);
      f.v_.push_back(pts[i].second);
    }
    f.validate();
    return f;
  }

  // Build from (location, mass) atoms; masses at equal locations accumulate.
  static StepCdf from_atoms(std::vector<std::pair<double, double>> atoms) {
    std::sort(atoms.begin(), atoms.end());
    StepCdf f;
    CompensatedSum total;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      if (atoms[i].second < 0.0) throw std::invalid_argument("StepCdf: negative atom mass");
      total.add(atoms[i].second);
      if (i + 1 < atoms.size() && atoms[i + 1].first == atoms[i].first) continue;
      f.h_.push_back(atoms[i].first);
      f.v_.push_back(total.value());
    }
    f.validate();
    return f;
  }

  std::size_t jump_count() const { return h_.size(); }
  bool is_zero() const { return h_.empty() || v_.back() <= 0.0; }
  const std::vector<double>& locations() const { return h_; }
  const std::vector<double>& values() const { return v_; }
  double terminal() const { return h_.empty() ? 0.0 : v_.back(); }
  double jump_mass(std::size_t i) const { return i == 0 ? v_[0] : v_[i] - v_[i - 1]; }

  // Right-continuous evaluation; 0 below the first jump.
  double value(double z) const {
    const auto it = std::upper_bound(h_.begin(), h_.end(), z);
    if (it == h_.begin()) return 0.0;
    return v_[static_cast<std::size_t>(it - h_.begin()) - 1];
  }

  // Exact int_0^z f(t) dt: a sum of rectangle areas, piecewise linear and
  // convex in z with kinks exactly at the jump locations.
  double integral_to(double z) const {
    if (z <= 0.0 || h_.empty()) return 0.0;
    CompensatedSum acc;
    for (std::size_t i = 0; i < h_.size(); ++i) {
      if (h_[i] >= z) break;
      const double seg_end = (i + 1 < h_.size()) ? std::min(h_[i + 1], z) : z;
      acc.add(v_[i] * (seg_end - h_[i]));
    }
    return acc.value();
  }

  bool operator==(const StepCdf& o) const { return h_ == o.h_ && v_ == o.v_; }

 private:
  void validate() const {
    double prev_h = 0.0;
    double prev_v = 0.0;
    for (std::size_t i = 0; i < h_.size(); ++i) {
      if (!(h_[i] > prev_h)) throw std::invalid_argument("StepCdf: locations must be ascending and > 0");
      if (!(v_[i] >= prev_v)) throw std::invalid_argument("StepCdf: values must be nondecreasing and >= 0");
      if (!std::isfinite(h_[i]) || !std::isfinite(v_[i]))
        throw std::invalid_argument("StepCdf: nonfinite entry");
      prev_h = h_[i];
      prev_v = v_[i];
    }
  }

  std::vector<double> h_;
  std::vector<double> v_;
};

// Atomic Stieltjes sum  sum_{h_j <= z} kernel(h_j) * (f(h_j) - f(h_j-)).
// With kernel == 1 this is exactly f(z).
template <class Kernel>
double stieltjes_sum(const StepCdf& f, double z, Kernel kernel) {
  CompensatedSum acc;
  const auto& h = f.locations();
  for (std::size_t j = 0; j < h.size(); ++j) {
    if (h[j] > z) break;
    const double dm = f.jump_mass(j);
    if (dm != 0.0) acc.add(kernel(h[j]) * dm);
  }
  return acc.value();
}

// int_a^b exp(-c * int_0^u f(t) dt) du, evaluated segment by segment. The
// integrand is a pure exponential between consecutive jumps, so every
// segment has a closed form. Exponents are accumulated (compensated) rather
// than re-exponentiated, and e^{-x} underflow to 0 is benign.
inline double exp_integral_range(const StepCdf& f, double a, double b, double c) {
  if (b <= a) return 0.0;
  const auto& h = f.locations();
  const auto& v = f.values();
  CompensatedSum acc;        // value of the integral
  CompensatedSum expo;       // int_0^{seg start} f, the running exponent
  expo.add(f.integral_to(a));
  double start = a;
  auto it = std::upper_bound(h.begin(), h.end(), a);
  std::size_t i = static_cast<std::size_t>(it - h.begin());  // first jump > a
  double level = (i == 0) ? 0.0 : v[i - 1];
  while (true) {
    const double end = (i < h.size()) ? std::min(h[i], b) : b;
    if (end > start) {
      const double width = end - start;
      const double e0 = std::exp(-c * expo.value());
      if (level > 0.0) {
        acc.add(e0 * (-std::expm1(-c * level * width)) / (c * level));
      } else {
        acc.add(e0 * width);
      }
      expo.add(level * width);
      start = end;
    }
    if (start >= b) break;
    level = v[i];
    ++i;
  }
  return acc.value();
}

// int_z^inf exp(-c * int_0^u f(t) dt) du. Finite iff the terminal value of
// f is positive; the zero function integrates exp(0) forever, so the result
// is a deliberate +inf sentinel, never a floating overflow. With z = 0 and
// c = pi this is the normalizing constant of the planar volume-biased CDF.
inline double exp_tail_integral(const StepCdf& f, double z, double c) {
  if (f.is_zero()) return std::numeric_limits<double>::infinity();
  const auto& h = f.locations();
  const double hk = h.back();
  double head = 0.0;
  if (z < hk) head = exp_integral_range(f, z, hk, c);
  const double tail_start = std::max(z, hk);
  const double level = f.terminal();
  const double expo = f.integral_to(tail_start);
  return head + std::exp(-c * expo) / (c * level);
}

}  // namespace lagtess
