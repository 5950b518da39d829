#include "core/microstructure.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "core/errors.hpp"

namespace rvelab {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Uniform double in [0, 1) built from the top 53 bits of the generator
// output, so streams do not depend on the standard library's
// uniform_real_distribution implementation.
double next_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double min_image(double d, double period) {
  d = std::fmod(d, period);
  if (d > 0.5 * period) d -= period;
  if (d < -0.5 * period) d += period;
  return d;
}

// Surface gap on the torus; ghosts make the plain Euclidean test
// equivalent, but generation uses the periodic metric directly.
double periodic_gap(const Vec2& a, double ra, const Vec2& c, double rc, double l, double b) {
  const double dx = min_image(a.x - c.x, l);
  const double dy = min_image(a.y - c.y, b);
  return std::sqrt(dx * dx + dy * dy) - ra - rc;
}

} // namespace

int Microstructure::fiber_count() const {
  int n = 0;
  for (const auto& f : fibers)
    if (!f.is_ghost()) ++n;
  return n;
}

double Microstructure::achieved_vf() const {
  double area = 0.0;
  for (const auto& f : fibers)
    if (!f.is_ghost()) area += kPi * f.radius * f.radius;
  return area / (l * b);
}

double radius_for_volume_fraction(double target_vf, double l, double b, int n_fibers) {
  if (n_fibers < 1) throw InvalidSpecError("n_fibers must be >= 1");
  if (!(target_vf > 0.0) || target_vf > 0.70)
    throw InvalidSpecError("target_vf must lie in (0, 0.70]");
  if (!(l > 0.0) || !(b > 0.0)) throw InvalidSpecError("domain lengths must be positive");
  return std::sqrt(target_vf * l * b / (n_fibers * kPi));
}

std::vector<FiberPlacement> ghost_images(const FiberPlacement& f, double l, double b,
                                         int parent_index) {
  const double x = f.center.x;
  const double y = f.center.y;
  const double r = f.radius;

  double ox = 0.0;
  if (x < r) ox = l;
  else if (x > l - r) ox = -l;

  double oy = 0.0;
  if (y < r) oy = b;
  else if (y > b - r) oy = -b;

  std::vector<FiberPlacement> ghosts;
  if (ox != 0.0) ghosts.push_back({{x + ox, y}, r, parent_index});
  if (oy != 0.0) ghosts.push_back({{x, y + oy}, r, parent_index});
  if (ox != 0.0 && oy != 0.0) ghosts.push_back({{x + ox, y + oy}, r, parent_index});
  return ghosts;
}

Microstructure generate_rsa(int n_fibers, double target_vf, double l, double b,
                            std::uint64_t seed, long max_attempts) {
  const double r = radius_for_volume_fraction(target_vf, l, b, n_fibers);
  if (!(2.0 * r < std::min(l, b)))
    throw InvalidSpecError("derived radius too large for the domain: 2r must be < min(l, b)");
  if (max_attempts < 1) throw InvalidSpecError("max_attempts must be >= 1");

  std::mt19937_64 rng(seed);

  Microstructure m;
  m.l = l;
  m.b = b;
  m.target_vf = target_vf;
  m.seed = seed;

  std::vector<FiberPlacement> placed; // real fibres, in placement order
  placed.reserve(static_cast<std::size_t>(n_fibers));

  for (int k = 0; k < n_fibers; ++k) {
    long rejects = 0;
    for (;;) {
      const Vec2 c{l * next_unit(rng), b * next_unit(rng)};
      bool clear = true;
      for (const auto& p : placed) {
        if (periodic_gap(c, r, p.center, p.radius, l, b) < 0.0) {
          clear = false;
          break;
        }
      }
      if (clear) {
        placed.push_back({c, r, -1});
        break;
      }
      if (++rejects >= max_attempts)
        throw JammingError("packing jammed: " + std::to_string(max_attempts) +
                           " consecutive rejections after placing " + std::to_string(k) +
                           " of " + std::to_string(n_fibers) + " fibres");
    }
  }

  m.fibers = placed;
  for (int i = 0; i < n_fibers; ++i) {
    auto ghosts = ghost_images(placed[static_cast<std::size_t>(i)], l, b, i);
    m.fibers.insert(m.fibers.end(), ghosts.begin(), ghosts.end());
  }
  return m;
}

Microstructure regular_grid(int rows, int cols, double r, double l, double b,
                            std::optional<double> pair_gap) {
  if (rows < 1 || cols < 1) throw InvalidSpecError("grid needs rows, cols >= 1");
  const double px = l / cols;
  const double py = b / rows;
  if (!(r > 0.0) || 2.0 * r >= std::min(px, py))
    throw InvalidSpecError("fibre radius incompatible with grid pitch");

  Microstructure m;
  m.l = l;
  m.b = b;
  m.seed = 0;
  for (int j = 0; j < rows; ++j)
    for (int i = 0; i < cols; ++i)
      m.fibers.push_back({{(i + 0.5) * px, (j + 0.5) * py}, r, -1});
  m.target_vf = m.achieved_vf();

  if (pair_gap) {
    if (cols < 2) throw InvalidSpecError("pair_gap needs at least two columns");
    const double gap = *pair_gap;
    if (!(gap >= 0.0) || gap > px - 2.0 * r)
      throw InvalidSpecError("pair_gap must lie in [0, pitch - 2r]");
    const int row = rows / 2;
    const int ca = cols / 2 - 1;
    const int cb = cols / 2;
    const double shift = 0.5 * ((px - 2.0 * r) - gap);
    m.fibers[static_cast<std::size_t>(row * cols + ca)].center.x += shift;
    m.fibers[static_cast<std::size_t>(row * cols + cb)].center.x -= shift;
  }

  const int n = static_cast<int>(m.fibers.size());
  for (int i = 0; i < n; ++i) {
    auto ghosts = ghost_images(m.fibers[static_cast<std::size_t>(i)], l, b, i);
    m.fibers.insert(m.fibers.end(), ghosts.begin(), ghosts.end());
  }
  return m;
}

double pair_angle(const Vec2& ci, const Vec2& cj, const Vec2& load_direction) {
  const Vec2 d = cj - ci;
  const double dn = d.norm();
  if (dn == 0.0) throw DegenerateError("pair_angle: coincident centres");
  const double ln = load_direction.norm();
  if (ln == 0.0) throw DegenerateError("pair_angle: zero load direction");
  double c = std::abs(d.dot(load_direction)) / (dn * ln);
  c = std::clamp(c, 0.0, 1.0);
  return std::acos(c) * 180.0 / kPi;
}

FiberPairMetric min_freepath(const Microstructure& m, const Vec2& load_direction) {
  const int n = static_cast<int>(m.fibers.size());
  if (m.fiber_count() < 2 && n < 2)
    throw InvalidSpecError("min_freepath needs at least two fibres");

  FiberPairMetric best;
  bool found = false;

  for (int i = 0; i < n; ++i) {
    const auto& fi = m.fibers[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < n; ++j) {
      const auto& fj = m.fibers[static_cast<std::size_t>(j)];
      if (fi.is_ghost() && fj.is_ghost() && fi.ghost_of == fj.ghost_of) continue;

      const Vec2 d = fj.center - fi.center;
      const double dist = d.norm();
      if (dist == 0.0) continue;
      const double gap = dist - fi.radius - fj.radius;
      if (found && gap >= best.freepath) continue;

      // Surface-to-surface segment between the nearest boundary points.
      const Vec2 u = d * (1.0 / dist);
      const Vec2 pi = fi.center + u * fi.radius;
      const Vec2 pj = fj.center - u * fj.radius;

      bool occluded = false;
      for (int k = 0; k < n && !occluded; ++k) {
        if (k == i || k == j) continue;
        const auto& fk = m.fibers[static_cast<std::size_t>(k)];
        if (point_segment_distance(fk.center, pi, pj) < fk.radius) occluded = true;
      }
      if (occluded) continue;

      best.i = i;
      best.j = j;
      best.freepath = std::max(gap, 0.0);
      best.theta_deg = pair_angle(fi.center, fj.center, load_direction);
      found = true;
    }
  }

  if (!found) throw NoPairError("min_freepath: every pair is occluded");
  return best;
}

} // namespace rvelab
