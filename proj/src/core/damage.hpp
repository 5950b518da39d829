#pragma once

#include <Eigen/Dense>

namespace rvelab {

// Scalar isotropic damage with bilinear softening. The secant stress
// (1 - D) * E * kappa follows the straight line from the initiation point
// (eps0, E * eps0) down to zero at the failure strain epsf.
struct PhaseMaterial {
  double E = 1.0;
  double nu = 0.0;
  double eps0 = 0.0; // damage initiation strain (kappa_D)
  double epsf = 0.0; // complete failure strain (kappa_F)
  bool damageable = false;

  void validate() const;
};

// Per-element damage record. Both members are non-decreasing in time.
struct DamageState {
  double D = 0.0;
  double kappa_hist = 0.0;
};

// Damage is capped short of 1 so fully failed elements keep a sliver of
// stiffness and the global system stays definite.
inline constexpr double kDamageCap = 1.0 - 1e-6;

struct EnergyBudget {
  double U_d = 0.0;          // dissipated energy per unit crack area
  double lambda = 0.0;       // localization bandwidth
  double lambda_x = 0.0;
  double lambda_z = 0.0;
  double lambda_modified = 0.0; // sqrt(lambda_x * lambda_z)
};

EnergyBudget make_energy_budget(const PhaseMaterial& mat, double lambda_x, double lambda_z);

// Damage driven by the largest positive principal strain ever attained.
// Linear softening in closed form, uncapped: 0 at kappa <= eps0, exactly 1
// at kappa = epsf, clamped to 1 beyond.
double damage_at(double kappa, const PhaseMaterial& mat);

// History update under Kuhn-Tucker loading/unloading: kappa ratchets up to
// the largest Macaulay-bracketed principal strain; D follows the closed
// form, never decreases, and is capped at kDamageCap.
DamageState damage_update(const Eigen::Vector3d& principal_strains, const DamageState& state,
                          const PhaseMaterial& mat);

// Plane-stress constitutive matrix in Voigt order (xx, yy, xy) with
// engineering shear, scaled by (1 - D).
Eigen::Matrix3d secant_stiffness(double D, const PhaseMaterial& mat);

// out-of-plane strain estimate under plane stress; the secant scaling
// cancels, so only nu enters.
inline double plane_stress_ezz(double exx, double eyy, double nu) {
  return -nu / (1.0 - nu) * (exx + eyy);
}

// (E/2) * lambda * eps0 * epsf: energy dissipated per unit crack area by a
// fully softened band of width lambda.
double dissipated_energy_per_area(const PhaseMaterial& mat, double lambda);

// Failure-strain rescaling keeping sqrt(h) * epsf invariant.
double regularize_sqrt(double epsf_original, double lambda, double h);

// Failure-strain rescaling keeping h * epsf invariant. Retained as the
// baseline this rescaling family is compared against.
double regularize_brekelmans(double epsf_original, double lambda, double h);

// Energy per unit volume dissipated by an element whose history variable
// reached kappa, loading monotonically along the capped envelope.
double dissipation_density(double kappa, const PhaseMaterial& mat);

} // namespace rvelab
