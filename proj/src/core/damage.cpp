#include "core/damage.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"

namespace rvelab {

void PhaseMaterial::validate() const {
  if (!(E > 0.0)) throw InvalidSpecError("material: E must be positive");
  if (!(nu >= 0.0) || !(nu < 0.5)) throw InvalidSpecError("material: nu must lie in [0, 0.5)");
  if (damageable && !(0.0 < eps0 && eps0 < epsf))
    throw InvalidSpecError("material: need 0 < eps0 < epsf for a damageable phase");
}

EnergyBudget make_energy_budget(const PhaseMaterial& mat, double lambda_x, double lambda_z) {
  if (!(lambda_x > 0.0) || !(lambda_z > 0.0))
    throw InvalidSpecError("bandwidths must be positive");
  EnergyBudget e;
  e.lambda_x = lambda_x;
  e.lambda_z = lambda_z;
  e.lambda_modified = std::sqrt(lambda_x * lambda_z);
  e.lambda = e.lambda_modified;
  e.U_d = dissipated_energy_per_area(mat, e.lambda);
  return e;
}

double damage_at(double kappa, const PhaseMaterial& mat) {
  if (kappa <= mat.eps0) return 0.0;
  if (kappa >= mat.epsf) return 1.0;
  return mat.epsf * (kappa - mat.eps0) / (kappa * (mat.epsf - mat.eps0));
}

DamageState damage_update(const Eigen::Vector3d& principal_strains, const DamageState& state,
                          const PhaseMaterial& mat) {
  const double driving = std::max({principal_strains[0], principal_strains[1],
                                   principal_strains[2], 0.0});
  DamageState out;
  out.kappa_hist = std::max(state.kappa_hist, driving);
  out.D = state.D;
  if (out.kappa_hist > mat.eps0)
    out.D = std::min(kDamageCap, std::max(state.D, damage_at(out.kappa_hist, mat)));
  return out;
}

Eigen::Matrix3d secant_stiffness(double D, const PhaseMaterial& mat) {
  const double f = mat.E / (1.0 - mat.nu * mat.nu);
  Eigen::Matrix3d L;
  L << f, f * mat.nu, 0.0,
       f * mat.nu, f, 0.0,
       0.0, 0.0, f * (1.0 - mat.nu) / 2.0;
  return (1.0 - D) * L;
}

double dissipated_energy_per_area(const PhaseMaterial& mat, double lambda) {
  if (!(lambda > 0.0)) throw InvalidSpecError("lambda must be positive");
  return 0.5 * mat.E * lambda * mat.eps0 * mat.epsf;
}

double regularize_sqrt(double epsf_original, double lambda, double h) {
  if (!(lambda > 0.0) || !(h > 0.0)) throw InvalidSpecError("lambda and h must be positive");
  return epsf_original * std::sqrt(lambda / h);
}

double regularize_brekelmans(double epsf_original, double lambda, double h) {
  if (!(lambda > 0.0) || !(h > 0.0)) throw InvalidSpecError("lambda and h must be positive");
  return epsf_original * (lambda / h);
}

double dissipation_density(double kappa, const PhaseMaterial& mat) {
  if (!mat.damageable || kappa <= mat.eps0) return 0.0;

  const double E = mat.E;
  const double k0 = mat.eps0;
  const double kf = mat.epsf;

  // kappa where the closed form reaches the cap; the envelope continues as
  // the capped secant beyond it.
  const double kcap = kf * k0 / (k0 + (1.0 - kDamageCap) * (kf - k0));
  const double kc = std::min(kappa, kcap);

  // Area under the loading envelope up to kappa.
  double area = 0.5 * E * k0 * k0;
  area += E * k0 / (kf - k0) * (kf * (kc - k0) - 0.5 * (kc * kc - k0 * k0));
  if (kappa > kcap)
    area += 0.5 * (1.0 - kDamageCap) * E * (kappa * kappa - kcap * kcap);

  // Subtract what a secant unload from (kappa, sigma(kappa)) recovers.
  const double D = std::min(kDamageCap, damage_at(kappa, mat));
  const double recoverable = 0.5 * (1.0 - D) * E * kappa * kappa;
  return area - recoverable;
}

} // namespace rvelab
