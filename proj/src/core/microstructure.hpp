#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "core/geometry.hpp"

namespace rvelab {

// One circle of the packing. Ghost copies mirror a parent fibre across the
// periodic boundary; they share its radius and carry the parent index.
struct FiberPlacement {
  Vec2 center;
  double radius = 0.0;
  int ghost_of = -1; // -1: real fibre, otherwise index of the parent

  bool is_ghost() const { return ghost_of >= 0; }
};

// Periodic fibre packing over a rectangular domain [0,l) x [0,b).
// Real fibres come first in `fibers`, ghost copies after them.
struct Microstructure {
  double l = 1.0;
  double b = 1.0;
  double target_vf = 0.0;
  std::uint64_t seed = 0;
  std::vector<FiberPlacement> fibers;

  int fiber_count() const; // real fibres only
  double achieved_vf() const;
};

struct FiberPairMetric {
  int i = -1;
  int j = -1;
  double freepath = 0.0;
  double theta_deg = 0.0;
};

// Radius giving exactly `target_vf` total area for n equal circles.
double radius_for_volume_fraction(double target_vf, double l, double b, int n_fibers);

// Periodic images required so that tiling the domain leaves no trace of
// fibre discontinuity: one image per cut edge, a third diagonal image when
// a corner region is cut. Returns an empty list for interior fibres.
std::vector<FiberPlacement> ghost_images(const FiberPlacement& f, double l, double b, int parent_index);

// Random sequential adsorption of n equal non-overlapping circles with
// wall-effect elimination. Candidate centres are drawn uniformly over the
// domain; a candidate is accepted iff it and all its periodic images clear
// every previously accepted circle and image. `max_attempts` bounds the
// number of consecutive rejections per fibre; exceeding it raises
// JammingError.
Microstructure generate_rsa(int n_fibers, double target_vf, double l, double b,
                            std::uint64_t seed, long max_attempts = 100000);

// rows x cols fibres of radius r on a regular grid with uniform pitch.
// When `pair_gap` is set, the two middle fibres of the centre row are moved
// toward each other along x until their surface gap equals it.
Microstructure regular_grid(int rows, int cols, double r, double l, double b,
                            std::optional<double> pair_gap = std::nullopt);

// Angle in degrees, folded into [0, 90], between the load direction and the
// segment joining both centres.
double pair_angle(const Vec2& ci, const Vec2& cj, const Vec2& load_direction);

// Shortest surface-to-surface gap over all circle pairs whose connecting
// segment is not crossed by a third circle. Ghosts participate; pairs of
// two ghosts of the same parent are skipped. Ties resolve to the lowest
// (i, j) pair. `load_direction` is only used to report the pair angle.
FiberPairMetric min_freepath(const Microstructure& m, const Vec2& load_direction = {1.0, 0.0});

} // namespace rvelab
