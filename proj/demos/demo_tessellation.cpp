// Samples a discrete-weight Poisson generator set, tessellates it, and
// writes the diagram plus the extreme-point picture as SVG.
#include <cstdio>

#include "lagtess/io.hpp"
#include "lagtess/process.hpp"
#include "lagtess/svg.hpp"

int main() {
  using namespace lagtess;
  const StepCdf f2 = StepCdf::from_points({{1.0, 0.01}, {8.0, 0.05}, {10.0, 1.0}});
  const CdfModel model = CdfModel::step(f2);
  const Rect window{{-20.0, -20.0}, {20.0, 20.0}};
  const GeneratorSet gens = sample_generators(model, window, default_guard(model, window), 42);
  const Tessellation tess = tessellate(gens);

  write_text_file("tessellation.svg", tessellation_to_svg(tess, gens.points));
  TessellationSvgOptions opt;
  opt.generator_circles = true;
  write_text_file("tessellation_circles.svg", tessellation_to_svg(tess, gens.points, opt));

  std::size_t nonempty = 0;
  std::size_t own = 0;
  for (const auto& c : tess.cells) {
    nonempty += !c.is_empty;
    own += c.contains_own_generator;
  }
  std::printf("%zu generators, %zu nonempty cells, %zu own-cell points\n", gens.points.size(),
              nonempty, own);
  std::printf("wrote tessellation.svg and tessellation_circles.svg\n");
  return 0;
}
