#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "lagtess/geometry.hpp"
#include "lagtess/rng.hpp"
#include "support/generators.hpp"

using namespace lagtess;
using Catch::Approx;

namespace {

double cyclic_polygon_distance(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  const std::size_t n = a.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t shift = 0; shift < n; ++shift) {
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      worst = std::max(worst, (a[i] - b[(i + shift) % n]).norm());
    best = std::min(best, worst);
  }
  return best;
}

}  // namespace

TEST_CASE("power bisector") {
  const HalfPlane equal = power_bisector({{0, 0}, 1.0}, {{2, 0}, 1.0});
  CHECK(equal.normal.x == Approx(1.0));
  CHECK(equal.normal.y == Approx(0.0));
  CHECK(equal.offset == Approx(1.0));  // perpendicular bisector x = 1

  CHECK(power_bisector({{0, 0}, 1e-12}, {{2, 0}, 2.0}).offset == Approx(1.5));
  CHECK(power_bisector({{0, 0}, 2.0}, {{2, 0}, 1e-12}).offset == Approx(0.5));
  CHECK_THROWS_AS(power_bisector({{1, 1}, 1.0}, {{1, 1}, 2.0}), std::invalid_argument);
}

TEST_CASE("single generator fills the clip box") {
  const std::vector<WeightedPoint> pts{{{5, 5}, 1.0}};
  const Rect clip{{0, 0}, {10, 10}};
  const LaguerreCell cell = laguerre_cell(0, pts, clip);
  CHECK(!cell.is_empty);
  CHECK(cell.area == Approx(100.0));
  CHECK(cell.touches_clip_boundary);
}

TEST_CASE("a late generator between two early ones has an empty cell") {
  const std::vector<WeightedPoint> pts{{{0, 0}, 1e-9}, {{2, 0}, 1e-9}, {{1, 0}, 10.0}};
  const Rect clip{{-20, -20}, {20, 20}};
  const Tessellation tess = tessellate(pts, clip);
  CHECK(tess.cells[2].is_empty);
  CHECK(!tess.cells[0].is_empty);
  CHECK(!tess.cells[1].is_empty);
  CHECK(tess.cells[0].area + tess.cells[1].area == Approx(clip.area()).epsilon(1e-9));
}

TEST_CASE("two equal-weight generators split the box at the bisector") {
  const std::vector<WeightedPoint> pts{{{0, 0}, 1.0}, {{2, 0}, 1.0}};
  const Rect clip{{-5, -5}, {5, 5}};
  const LaguerreCell cell = laguerre_cell(0, pts, clip);
  CHECK(cell.area == Approx(60.0).epsilon(1e-12));
  // Monte Carlo point-location agreement
  Rng rng(17);
  for (int i = 0; i < 2000; ++i) {
    const Vec2 y{rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)};
    const bool in_poly = polygon_contains(cell.polygon, y, 1e-9);
    const bool closer = (y - pts[0].x).norm2() + pts[0].h <= (y - pts[1].x).norm2() + pts[1].h + 1e-9;
    CHECK(in_poly == closer);
  }
}

TEST_CASE("partition: cell areas sum to the clip area") {
  Rng rng(2024);
  GeneratorSet gens = testgen::random_generator_set(rng, 2000, 40.0, 1.0);
  for (auto& p : gens.points) p.h = 1.0;  // equal weights
  const Rect clip = gens.window;
  const Tessellation tess = tessellate(gens.points, clip);
  double sum = 0.0;
  for (const auto& c : tess.cells) sum += c.area;
  CHECK(std::abs(sum - clip.area()) <= 1e-6 * clip.area());
}

TEST_CASE("locate minimizes power distance with lowest-index ties") {
  const std::vector<WeightedPoint> pts{{{0, 0}, 1.0}, {{5, 5}, 1.0}};
  CHECK(locate({0, 0}, pts) == 0);
  const std::vector<WeightedPoint> pair{{{0, 0}, 1.0}, {{2, 0}, 1.0}};
  CHECK(locate({1, 0}, pair) == 0);  // exactly on the bisector

  Rng rng(7);
  for (int inst = 0; inst < 5; ++inst) {
    const GeneratorSet gens = testgen::random_generator_set(rng, 150, 10.0, 2.0);
    const Tessellation tess = tessellate(gens.points, gens.window);
    for (int probe = 0; probe < 400; ++probe) {
      const Vec2 y{rng.uniform(0.0, 10.0), rng.uniform(0.0, 10.0)};
      const std::size_t idx = locate(y, gens.points);
      CHECK(polygon_contains(tess.cells[idx].polygon, y, 1e-9));
    }
  }
}

TEST_CASE("own-generator containment predicate") {
  const std::vector<WeightedPoint> pts{{{0, 0}, 5.0}, {{1, 0}, 1.0}};
  CHECK(!contains_own_generator(0, pts));  // 5 - 1 > 1
  CHECK(contains_own_generator(1, pts));   // 1 - 5 < 1
  const std::vector<WeightedPoint> single{{{3, 3}, 42.0}};
  CHECK(contains_own_generator(0, single));
}

TEST_CASE("own-cell containment implies a nonempty cell") {
  Rng rng(55);
  for (int inst = 0; inst < 10; ++inst) {
    const GeneratorSet gens = testgen::random_generator_set(rng, 200, 8.0, 3.0);
    const Tessellation tess = tessellate(gens.points, gens.window);
    for (const auto& cell : tess.cells) {
      if (cell.contains_own_generator) {
        CHECK(!cell.is_empty);
        CHECK(polygon_contains(cell.polygon, gens.points[cell.generator].x, 1e-9));
      }
    }
  }
}

TEST_CASE("raising a weight never enlarges the cell") {
  Rng rng(91);
  for (int inst = 0; inst < 10; ++inst) {
    GeneratorSet gens = testgen::random_generator_set(rng, 100, 8.0, 2.0);
    const std::size_t i = rng.next_u64() % gens.points.size();
    const double base_area = laguerre_cell(i, gens.points, gens.window).area;
    gens.points[i].h += rng.uniform(0.1, 2.0);
    const double raised_area = laguerre_cell(i, gens.points, gens.window).area;
    CHECK(raised_area <= base_area + 1e-9);
  }
}

TEST_CASE("tessellate rejects duplicate positions") {
  const std::vector<WeightedPoint> pts{{{1, 1}, 1.0}, {{1, 1}, 2.0}};
  CHECK_THROWS_AS(tessellate(pts, Rect{{0, 0}, {2, 2}}), std::invalid_argument);
}

// Generators interior to the window must have identical cells whether the
// exterior process is known up to guard rho or up to 2 rho: the guard
// contract that makes finite simulations faithful.
TEST_CASE("interior cells are stable under guard doubling") {
  Rng rng(1234);
  int checked = 0;
  for (int inst = 0; inst < 25; ++inst) {
    const double side = 8.0;
    const double span = rng.uniform(0.5, 2.0);
    const double guard = std::sqrt(span) + 5.0 / std::sqrt(1.0);  // heuristic at unit intensity
    const Rect window{{0, 0}, {side, side}};
    const Rect region1 = window.dilated(guard);
    const Rect region2 = window.dilated(2.0 * guard);

    // one draw on the big region; the small run sees the inner subset
    std::vector<WeightedPoint> all;
    Rng draw(rng.next_u64());
    const std::uint64_t n = draw.poisson(region2.area());
    for (std::uint64_t i = 0; i < n; ++i) {
      WeightedPoint p;
      p.x = {draw.uniform(region2.lo.x, region2.hi.x), draw.uniform(region2.lo.y, region2.hi.y)};
      p.h = span * (1.0 - draw.uniform01());
      all.push_back(p);
    }
    std::vector<WeightedPoint> inner;
    std::vector<std::size_t> inner_index;
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (region1.contains(all[i].x)) {
        inner.push_back(all[i]);
        inner_index.push_back(i);
      }
    }
    if (inner.empty()) continue;
    const Tessellation small = tessellate(inner, region1);
    const Tessellation big = tessellate(all, region2);
    for (std::size_t j = 0; j < inner.size(); ++j) {
      if (!window.contains(inner[j].x)) continue;
      const auto& pa = small.cells[j].polygon;
      const auto& pb = big.cells[inner_index[j]].polygon;
      if (small.cells[j].is_empty && big.cells[inner_index[j]].is_empty) continue;
      CHECK(cyclic_polygon_distance(pa, pb) <= 1e-9);
      ++checked;
    }
  }
  CHECK(checked > 100);
}
