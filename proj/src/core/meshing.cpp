#include "core/meshing.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace rvelab {

namespace {

int divide_exactly(double length, double h, const char* what) {
  const double q = length / h;
  const int n = static_cast<int>(std::lround(q));
  if (n < 1 || std::abs(n * h - length) > 1e-12 * length)
    throw NonconformingMeshError(std::string("element size does not divide ") + what);
  return n;
}

} // namespace

Mesh rasterize(const Microstructure& m, double h) {
  if (!(h > 0.0)) throw NonconformingMeshError("element size must be positive");
  Mesh mesh;
  mesh.h = h;
  mesh.nx = divide_exactly(m.l, h, "domain length l");
  mesh.ny = divide_exactly(m.b, h, "domain breadth b");
  mesh.element_phase.assign(static_cast<std::size_t>(mesh.element_count()), Phase::Matrix);

  for (int j = 0; j < mesh.ny; ++j) {
    for (int i = 0; i < mesh.nx; ++i) {
      const Vec2 c = mesh.element_centroid(i, j);
      for (const auto& f : m.fibers) {
        const double dx = c.x - f.center.x;
        const double dy = c.y - f.center.y;
        if (dx * dx + dy * dy <= f.radius * f.radius) {
          mesh.element_phase[static_cast<std::size_t>(mesh.element_index(i, j))] = Phase::Fiber;
          break;
        }
      }
    }
  }
  return mesh;
}

} // namespace rvelab
