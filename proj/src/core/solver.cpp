#include "core/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/errors.hpp"

namespace rvelab {

namespace {

Eigen::Vector3d principal_strains(const Eigen::Vector3d& voigt, double nu) {
  const double exx = voigt[0], eyy = voigt[1], gxy = voigt[2];
  const double mean = 0.5 * (exx + eyy);
  const double rad = std::hypot(0.5 * (exx - eyy), 0.5 * gxy);
  return {mean + rad, mean - rad, plane_stress_ezz(exx, eyy, nu)};
}

std::vector<double> damage_field_of(const std::vector<DamageState>& states) {
  std::vector<double> d(states.size());
  for (std::size_t e = 0; e < states.size(); ++e) d[e] = states[e].D;
  return d;
}

} // namespace

SolveTrace solve_quasistatic(const Mesh& mesh, const PhaseMaterials& mats,
                             const ConstraintSet& cs, const LoadProgram& load,
                             const SolveOptions& opts) {
  load.validate();
  mats.matrix.validate();
  mats.fiber.validate();
  if (opts.staggered_passes < 1) throw InvalidSpecError("solver: staggered_passes must be >= 1");

  const int nel = mesh.element_count();
  const int n_dofs = 2 * mesh.node_count();
  const int n_inc = load.n_increments;
  const Vec2 dir = load.direction();

  ConstraintEliminator elim(n_dofs, cs);
  Eigen::SimplicialLDLT<SparseMat> chol;
  bool pattern_ready = false;

  const BMatrix Bc = centroid_strain_operator(mesh.h);
  const Eigen::Matrix3d C_matrix = secant_stiffness(0.0, mats.matrix);
  const Eigen::Matrix3d C_fiber = secant_stiffness(0.0, mats.fiber);

  std::vector<DamageState> states(static_cast<std::size_t>(nel));
  std::vector<Eigen::Vector3d> strain(static_cast<std::size_t>(nel));
  std::vector<Eigen::Vector3d> stress(static_cast<std::size_t>(nel));

  std::vector<int> right_nodes, left_nodes;
  for (int j = 0; j <= mesh.ny; ++j) {
    right_nodes.push_back(mesh.node_index(mesh.nx, j));
    left_nodes.push_back(mesh.node_index(0, j));
  }

  SolveTrace trace;
  trace.rows.reserve(static_cast<std::size_t>(n_inc));

  // The factorized operator always corresponds to the current damage field.
  SparseMat K = assemble_global_stiffness(mesh, mats, states);
  bool stiffness_current = false;
  auto ensure_factorized = [&]() {
    if (stiffness_current) return;
    K = assemble_global_stiffness(mesh, mats, states);
    SparseMat K_red = elim.reduce_matrix(K);
    if (!pattern_ready) {
      chol.analyzePattern(K_red);
      pattern_ready = true;
    }
    chol.factorize(K_red);
    const Eigen::VectorXd& d = chol.vectorD();
    if (chol.info() != Eigen::Success || !(d.minCoeff() > 0.0) ||
        d.minCoeff() <= 1e-14 * d.maxCoeff())
      throw SingularSystemError("reduced stiffness lost positive definiteness");
    stiffness_current = true;
  };
  ensure_factorized();

  bool first_damage_taken = false;
  double peak_force = -std::numeric_limits<double>::infinity();
  DamageSnapshot peak_snapshot;
  const Eigen::VectorXd zero_f = Eigen::VectorXd::Zero(n_dofs);

  Eigen::VectorXd u = Eigen::VectorXd::Zero(n_dofs);
  double reaction_fixed = 0.0;
  double reaction_loaded = 0.0;
  double prev_applied = 0.0;
  double prev_force = 0.0;

  for (int inc = 1; inc <= n_inc; ++inc) {
    const double scale = static_cast<double>(inc) / static_cast<double>(n_inc);
    const double applied_u = scale * load.total_displacement;

    double delta_d_increment = 0.0;
    for (int pass = 0;;) {
      ensure_factorized();
      const Eigen::VectorXd f_red = elim.reduce_rhs(K, zero_f, scale);
      const Eigen::VectorXd q = chol.solve(f_red);
      u = elim.recover(q, scale);

      // Fields consistent with the operator just solved.
      const Eigen::VectorXd R = K * u;
      reaction_fixed = 0.0;
      reaction_loaded = 0.0;
      for (int node : right_nodes)
        reaction_loaded += R[dof_index(node, 0)] * dir.x + R[dof_index(node, 1)] * dir.y;
      for (int node : left_nodes)
        reaction_fixed -= R[dof_index(node, 0)] * dir.x + R[dof_index(node, 1)] * dir.y;

      double delta_d_pass = 0.0;
      int e = 0;
      for (int j = 0; j < mesh.ny; ++j) {
        for (int i = 0; i < mesh.nx; ++i, ++e) {
          const auto dofs = element_dofs(mesh, i, j);
          Eigen::Matrix<double, 8, 1> ue;
          for (int a = 0; a < 8; ++a) ue[a] = u[dofs[static_cast<std::size_t>(a)]];
          const Eigen::Vector3d eps = Bc * ue;
          strain[static_cast<std::size_t>(e)] = eps;
          const Phase ph = mesh.element_phase[static_cast<std::size_t>(e)];
          const Eigen::Matrix3d& C0 = ph == Phase::Fiber ? C_fiber : C_matrix;
          stress[static_cast<std::size_t>(e)] = (1.0 - states[static_cast<std::size_t>(e)].D) * C0 * eps;
        }
      }

      // Single staggered update per pass; loading only ratchets damage up.
      e = 0;
      for (int j = 0; j < mesh.ny; ++j) {
        for (int i = 0; i < mesh.nx; ++i, ++e) {
          const Phase ph = mesh.element_phase[static_cast<std::size_t>(e)];
          const PhaseMaterial& mat = mats.of(ph);
          if (!mat.damageable) continue;
          DamageState& st = states[static_cast<std::size_t>(e)];
          const DamageState next =
              damage_update(principal_strains(strain[static_cast<std::size_t>(e)], mat.nu), st, mat);
          delta_d_pass = std::max(delta_d_pass, next.D - st.D);
          st = next;
        }
      }
      delta_d_increment = std::max(delta_d_increment, delta_d_pass);
      if (delta_d_pass > 0.0) stiffness_current = false;
      ++pass;
      if (pass >= opts.staggered_passes || delta_d_pass <= opts.staggered_tol) break;
    }

    TraceRow row;
    row.applied_u = applied_u;
    row.reaction_sum = reaction_fixed;
    row.reaction_sum_loaded = reaction_loaded;
    row.avg_stress.setZero();
    row.avg_strain.setZero();
    for (int e = 0; e < nel; ++e) {
      row.avg_stress += stress[static_cast<std::size_t>(e)];
      row.avg_strain += strain[static_cast<std::size_t>(e)];
    }
    row.avg_stress /= nel;
    row.avg_strain /= nel;

    row.max_D = 0.0;
    row.n_damaged = 0;
    for (const auto& st : states) {
      row.max_D = std::max(row.max_D, st.D);
      if (st.D > 0.0) ++row.n_damaged;
    }
    row.step_warning = delta_d_increment > 0.5;
    if (row.step_warning) ++trace.step_warning_count;

    trace.external_work +=
        0.5 * (prev_force + row.reaction_sum_loaded) * (applied_u - prev_applied);
    prev_force = row.reaction_sum_loaded;
    prev_applied = applied_u;

    if (!first_damage_taken && row.n_damaged > 0) {
      if (opts.snapshots.at_first_damage)
        trace.snapshots.push_back({"first_damage", inc, damage_field_of(states)});
      first_damage_taken = true;
    }
    if (row.reaction_sum > peak_force) {
      peak_force = row.reaction_sum;
      if (opts.snapshots.at_peak_force) peak_snapshot = {"peak_force", inc, damage_field_of(states)};
    }
    if (opts.snapshots.every_fraction > 0.0) {
      const int stride =
          std::max(1, static_cast<int>(std::lround(opts.snapshots.every_fraction * n_inc)));
      if (inc % stride == 0 && inc != n_inc) {
        const int pct = static_cast<int>(std::lround(100.0 * inc / n_inc));
        trace.snapshots.push_back({std::to_string(pct) + "pct", inc, damage_field_of(states)});
      }
    }

    trace.rows.push_back(row);
  }

  if (opts.snapshots.at_peak_force && !peak_snapshot.field.empty())
    trace.snapshots.push_back(peak_snapshot);
  if (opts.snapshots.at_final)
    trace.snapshots.push_back({"final", n_inc, damage_field_of(states)});

  trace.final_states = states;
  trace.final_displacement = u;
  trace.final_strain = strain;
  trace.final_stress = stress;

  if (!stiffness_current) K = assemble_global_stiffness(mesh, mats, states);
  trace.recoverable_energy_end = 0.5 * u.dot(K * u);
  const double ve = mesh.h * mesh.h;
  for (int e = 0; e < nel; ++e) {
    const Phase ph = mesh.element_phase[static_cast<std::size_t>(e)];
    trace.dissipated_energy_end +=
        ve * dissipation_density(states[static_cast<std::size_t>(e)].kappa_hist, mats.of(ph));
  }
  return trace;
}

int crack_band_width(const std::vector<double>& damage_field, int nx, int ny, double threshold) {
  if (damage_field.size() != static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny))
    throw InvalidSpecError("crack_band_width: field size mismatch");

  int min_i = nx, max_i = -1, min_j = ny, max_j = -1;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      if (damage_field[static_cast<std::size_t>(j) * nx + i] >= threshold) {
        min_i = std::min(min_i, i);
        max_i = std::max(max_i, i);
        min_j = std::min(min_j, j);
        max_j = std::max(max_j, j);
      }
  if (max_i < 0) throw NoCrackError("no element reaches the damage threshold");

  const bool vertical = (max_j - min_j) >= (max_i - min_i);
  std::vector<int> runs;
  const int n_scan = vertical ? ny : nx;
  const int n_along = vertical ? nx : ny;
  for (int s = 0; s < n_scan; ++s) {
    int best = 0, cur = 0;
    for (int a = 0; a < n_along; ++a) {
      const int i = vertical ? a : s;
      const int j = vertical ? s : a;
      if (damage_field[static_cast<std::size_t>(j) * nx + i] >= threshold) {
        ++cur;
        best = std::max(best, cur);
      } else {
        cur = 0;
      }
    }
    if (best > 0) runs.push_back(best);
  }
  std::sort(runs.begin(), runs.end());
  return runs[(runs.size() - 1) / 2];
}

} // namespace rvelab
