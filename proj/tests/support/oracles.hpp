// Independent reference computations used by the unit and acceptance
// suites. Everything here recomputes from first principles and must not
// call the library code paths it is checking.
#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

struct Circle {
  double x = 0.0;
  double y = 0.0;
  double r = 0.0;
  int parent = -1; // index of the real fibre this copy belongs to
};

// Expands each real fibre into its nine lattice translates and keeps those
// that intersect the open domain neighbourhood. This reproduces the ghost
// construction from the tiling definition alone.
inline std::vector<Circle> tiling_expansion(const std::vector<Circle>& reals, double l, double b) {
  std::vector<Circle> out;
  for (std::size_t k = 0; k < reals.size(); ++k) {
    for (int dx = -1; dx <= 1; ++dx) {
      for (int dy = -1; dy <= 1; ++dy) {
        Circle c = reals[k];
        c.x += dx * l;
        c.y += dy * b;
        c.parent = static_cast<int>(k);
        if (c.x + c.r > 0.0 && c.x - c.r < l && c.y + c.r > 0.0 && c.y - c.r < b)
          out.push_back(c);
      }
    }
  }
  return out;
}

// All-pairs Euclidean overlap count over the tiling expansion; copies of
// the same fibre are not compared with each other.
inline int overlap_count(const std::vector<Circle>& reals, double l, double b) {
  const auto all = tiling_expansion(reals, l, b);
  int bad = 0;
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      if (all[i].parent == all[j].parent) continue;
      const double dx = all[i].x - all[j].x;
      const double dy = all[i].y - all[j].y;
      if (std::sqrt(dx * dx + dy * dy) < all[i].r + all[j].r) ++bad;
    }
  return bad;
}

struct PairResult {
  std::size_t i = 0;
  std::size_t j = 0;
  double freepath = 0.0;
};

// Brute-force minimum freepath over an explicit circle list: for every pair
// check the surface-to-surface segment against every third circle.
inline std::optional<PairResult> min_freepath_brute(const std::vector<Circle>& circles,
                                                    bool skip_same_parent_ghost_pairs,
                                                    int n_reals) {
  std::optional<PairResult> best;
  for (std::size_t i = 0; i < circles.size(); ++i) {
    for (std::size_t j = i + 1; j < circles.size(); ++j) {
      if (skip_same_parent_ghost_pairs && static_cast<int>(i) >= n_reals &&
          static_cast<int>(j) >= n_reals && circles[i].parent == circles[j].parent)
        continue;
      const double dx = circles[j].x - circles[i].x;
      const double dy = circles[j].y - circles[i].y;
      const double dist = std::sqrt(dx * dx + dy * dy);
      if (dist == 0.0) continue;
      const double gap = dist - circles[i].r - circles[j].r;
      const double ux = dx / dist, uy = dy / dist;
      const double ax = circles[i].x + ux * circles[i].r;
      const double ay = circles[i].y + uy * circles[i].r;
      const double bx = circles[j].x - ux * circles[j].r;
      const double by = circles[j].y - uy * circles[j].r;
      bool occluded = false;
      for (std::size_t k = 0; k < circles.size() && !occluded; ++k) {
        if (k == i || k == j) continue;
        const double sx = bx - ax, sy = by - ay;
        const double len2 = sx * sx + sy * sy;
        double t = 0.0;
        if (len2 > 0.0) t = ((circles[k].x - ax) * sx + (circles[k].y - ay) * sy) / len2;
        t = std::clamp(t, 0.0, 1.0);
        const double px = ax + t * sx - circles[k].x;
        const double py = ay + t * sy - circles[k].y;
        if (std::sqrt(px * px + py * py) < circles[k].r) occluded = true;
      }
      if (occluded) continue;
      if (!best || gap < best->freepath) best = PairResult{i, j, std::max(gap, 0.0)};
    }
  }
  return best;
}

// Stiffness of a square bilinear quad, integrated with a dense 6x6
// Gauss-Legendre rule written out independently of the library element.
inline Eigen::Matrix<double, 8, 8> quad_stiffness_reference(const Eigen::Matrix3d& C, double h) {
  const double pts[6] = {-0.932469514203152028, -0.661209386466264514, -0.238619186083196909,
                         0.238619186083196909,  0.661209386466264514,  0.932469514203152028};
  const double wts[6] = {0.171324492379170345, 0.360761573048138608, 0.467913934572691047,
                         0.467913934572691047, 0.360761573048138608, 0.171324492379170345};
  Eigen::Matrix<double, 8, 8> K = Eigen::Matrix<double, 8, 8>::Zero();
  for (int a = 0; a < 6; ++a) {
    for (int c = 0; c < 6; ++c) {
      const double xi = pts[a], eta = pts[c];
      const double dndx[4] = {-(1.0 - eta) / (2.0 * h), (1.0 - eta) / (2.0 * h),
                              (1.0 + eta) / (2.0 * h), -(1.0 + eta) / (2.0 * h)};
      const double dndy[4] = {-(1.0 - xi) / (2.0 * h), -(1.0 + xi) / (2.0 * h),
                              (1.0 + xi) / (2.0 * h), (1.0 - xi) / (2.0 * h)};
      Eigen::Matrix<double, 3, 8> B = Eigen::Matrix<double, 3, 8>::Zero();
      for (int n = 0; n < 4; ++n) {
        B(0, 2 * n) = dndx[n];
        B(1, 2 * n + 1) = dndy[n];
        B(2, 2 * n) = dndy[n];
        B(2, 2 * n + 1) = dndx[n];
      }
      K += wts[a] * wts[c] * (h / 2.0) * (h / 2.0) * B.transpose() * C * B;
    }
  }
  return K;
}

// Post-peak stress of the localized softening rod, written straight from
// the closed-form expression.
inline double rod_stress_reference(double u, double L, double lambda, double E, double H,
                                   double eps0) {
  const double g = (lambda / L) * (1.0 + E / H);
  return E * eps0 * (u / (L * eps0) - g) / (1.0 - g);
}

// Population standard deviation.
inline double population_sd(const std::vector<double>& xs) {
  double mu = 0.0;
  for (double x : xs) mu += x;
  mu /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mu) * (x - mu);
  return std::sqrt(ss / static_cast<double>(xs.size()));
}

} // namespace oracle
