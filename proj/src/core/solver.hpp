#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "core/assembly.hpp"
#include "core/constraints.hpp"

namespace rvelab {

struct TraceRow {
  double applied_u = 0.0;
  // Reactions along the load direction, from the operator the increment was
  // solved with: reaction_sum over the constrained edge (sign flipped so
  // tension is positive), reaction_sum_loaded over the displaced edge. They
  // agree to solver accuracy by global balance.
  double reaction_sum = 0.0;
  double reaction_sum_loaded = 0.0;
  Eigen::Vector3d avg_stress = Eigen::Vector3d::Zero();
  Eigen::Vector3d avg_strain = Eigen::Vector3d::Zero();
  int n_damaged = 0;
  double max_D = 0.0;
  bool step_warning = false; // max element damage jump above 0.5
};

struct DamageSnapshot {
  std::string tag;
  int increment = 0;
  std::vector<double> field; // element damage, row-major
};

struct SolveTrace {
  std::vector<TraceRow> rows;
  std::vector<DamageSnapshot> snapshots;

  // Final converged state.
  std::vector<DamageState> final_states;
  Eigen::VectorXd final_displacement;
  std::vector<Eigen::Vector3d> final_strain;
  std::vector<Eigen::Vector3d> final_stress;

  // Energy summary over the whole program.
  double external_work = 0.0;
  double recoverable_energy_end = 0.0;
  double dissipated_energy_end = 0.0;

  int step_warning_count = 0;
};

struct SnapshotPlan {
  bool at_first_damage = true;
  bool at_peak_force = true;
  bool at_final = true;
  double every_fraction = 0.1; // 0 disables periodic snapshots
};

struct SolveOptions {
  // One pass reproduces the explicit staggered scheme; more passes repeat
  // solve/update within the increment until the damage field settles.
  int staggered_passes = 1;
  double staggered_tol = 0.0;
  SnapshotPlan snapshots;
};

// Quasi-static incremental solve: prescribed displacements ramp linearly to
// full load over n increments; each increment solves the secant-stiffness
// system under the constraint set, then updates element damage from the
// centroid principal strains. Deterministic for identical inputs.
SolveTrace solve_quasistatic(const Mesh& mesh, const PhaseMaterials& mats,
                             const ConstraintSet& cs, const LoadProgram& load,
                             const SolveOptions& opts = {});

// Width in elements of the localized band in a damage snapshot: scanlines
// perpendicular to the dominant crack direction contribute their longest
// contiguous run of elements with D >= threshold; the median over scanlines
// that cross the crack is returned.
int crack_band_width(const std::vector<double>& damage_field, int nx, int ny, double threshold);

} // namespace rvelab
