#pragma once

#include <cstdint>
#include <vector>

#include "core/microstructure.hpp"

namespace rvelab {

enum class Phase : std::uint8_t { Matrix = 0, Fiber = 1 };

// Uniform grid of bilinear quads over [0, l] x [0, b]. Nodes and elements
// are indexed row-major: node(i, j) = j * (nx + 1) + i with i along x,
// element(i, j) = j * nx + i. Element (i, j) spans
// [i*h, (i+1)*h] x [j*h, (j+1)*h].
struct Mesh {
  double h = 0.0;
  int nx = 0;
  int ny = 0;
  std::vector<Phase> element_phase; // nx * ny entries, row-major

  int node_count() const { return (nx + 1) * (ny + 1); }
  int element_count() const { return nx * ny; }
  int node_index(int i, int j) const { return j * (nx + 1) + i; }
  int element_index(int i, int j) const { return j * nx + i; }
  Vec2 node_coord(int i, int j) const { return {i * h, j * h}; }
  Vec2 element_centroid(int i, int j) const { return {(i + 0.5) * h, (j + 0.5) * h}; }
  double length() const { return nx * h; }
  double breadth() const { return ny * h; }
};

// Phase assignment by centroid: an element is Fiber iff its centroid lies
// inside (or on) any fibre circle, ghosts included. `h` must divide both
// domain dimensions to 1e-12 relative.
Mesh rasterize(const Microstructure& m, double h);

} // namespace rvelab
