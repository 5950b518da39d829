#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/solver.hpp"

namespace rvelab {

struct CurveMetadata {
  double vf = 0.0;
  int n_fibers = 0;
  double h = 0.0;
  std::string bc_type;
  std::uint64_t seed = 0;
};

// Boundary reaction versus applied displacement; equals the macroscopic
// stress-strain response for the unit cell.
struct FdCurve {
  std::vector<double> d;
  std::vector<double> F;
  CurveMetadata meta;
};

struct CurveMetrics {
  std::optional<double> eps0_rve;  // empty: never damaged
  std::optional<double> epsf_rve;  // empty: never failed
  double peak_force = 0.0;
  double elastic_slope = 0.0;
  double dissipated_energy = 0.0; // area under the curve
};

Eigen::Vector3d volume_average_stress(const std::vector<Eigen::Vector3d>& stress);
Eigen::Vector3d volume_average_strain(const std::vector<Eigen::Vector3d>& strain);

// | mean(sigma : eps) - mean(sigma) : mean(eps) | / | mean(sigma) : mean(eps) |
// over element fields in Voigt form with engineering shear.
double hill_mandel_residual(const std::vector<Eigen::Vector3d>& stress,
                            const std::vector<Eigen::Vector3d>& strain);

FdCurve curve_from_trace(const SolveTrace& trace, const CurveMetadata& meta);

// Macroscopic strain at the first increment that damaged any element.
std::optional<double> detect_initiation(const SolveTrace& trace, double domain_length);

// Macroscopic strain at the first post-peak sample whose force drops to
// f_fail of the peak.
std::optional<double> detect_failure(const FdCurve& curve, double domain_length,
                                     double f_fail = 0.01);

// Least-squares slope through the origin over the pre-initiation segment
// (up to 80% of the initiation displacement; the whole curve when it never
// damages).
double elastic_slope(const FdCurve& curve, std::optional<double> initiation_displacement);

CurveMetrics curve_metrics(const SolveTrace& trace, const FdCurve& curve, double domain_length,
                           double f_fail = 0.01);

// Post-peak stress of a softening rod of length L with a localized band of
// width lambda: sigma = E eps0 * (u/(L eps0) - (lambda/L)(1 + E/H)) /
// (1 - (lambda/L)(1 + E/H)), H being the magnitude of the softening slope.
double rod_stress_analytic(double u, double L, double lambda, double E, double H, double eps0);

} // namespace rvelab
