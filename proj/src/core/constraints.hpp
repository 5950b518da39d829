#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <vector>

#include "core/meshing.hpp"

namespace rvelab {

using SparseMat = Eigen::SparseMatrix<double>;

// Degrees of freedom interleave as (ux, uy) per node: dof = 2*node + comp.
inline int dof_index(int node, int comp) { return 2 * node + comp; }

struct ConstraintTerm {
  int dof = -1;
  double coeff = 0.0;
};

// sum_k coeff_k * u[dof_k] = rhs, terms stored in ascending dof order.
struct LinearConstraint {
  std::vector<ConstraintTerm> terms;
  double rhs = 0.0;
};

struct PrescribedDof {
  int dof = -1;
  double value = 0.0;
};

struct ConstraintSet {
  std::vector<LinearConstraint> constraints;
  std::vector<PrescribedDof> prescribed;
};

enum class LoadMode { AxialXX, Angled };

struct LoadProgram {
  LoadMode mode = LoadMode::AxialXX;
  double theta_deg = 0.0; // used by Angled only
  double total_displacement = 0.0;
  int n_increments = 1;

  Vec2 direction() const;
  void validate() const;
};

// Displacement-periodic boundary conditions for transverse loading of the
// unit cell. Axial mode: left edge fixed in x, right edge pulled in x,
// left/right y-displacements tied pairwise, top/bottom tied pairwise in
// both components, one reference node pinned in y. Angled mode: left edge
// fixed in x, both components prescribed on the right edge as
// (u cos(theta), u sin(theta)), top/bottom tied pairwise in both
// components. Prescribed values are taken at full load; the solver scales
// them per increment.
ConstraintSet build_dpbc(const Mesh& mesh, const LoadProgram& load);

// Everything build_dpbc emits, plus difference ties that equate nodal
// displacement differences across each of the `band_width_elems` interior
// node layers adjacent to a boundary with those on the opposite layer,
// enforcing strain periodicity over the band. Components prescribed on the
// loaded/constrained edges are exempt from the left/right layer ties.
// `antisymmetric_ties` switches the opposite-layer difference to the
// swapped-sign form.
ConstraintSet build_mpbc(const Mesh& mesh, int band_width_elems, const LoadProgram& load,
                         bool antisymmetric_ties = false);

// Master-slave elimination of a constraint set. Full displacement vectors
// are recovered as u = T q + c where q holds the master dofs. Redundant
// rows are dropped; inconsistent rows raise RankDeficiencyError.
class ConstraintEliminator {
public:
  ConstraintEliminator(int n_dofs, const ConstraintSet& cs);

  int full_size() const { return n_dofs_; }
  int reduced_size() const { return static_cast<int>(masters_.size()); }
  const SparseMat& transform() const { return T_; }
  const Eigen::VectorXd& particular() const { return c_; }

  // Particular solution with all inhomogeneous terms scaled by `s`.
  Eigen::VectorXd particular_scaled(double s) const { return c_ * s; }

  Eigen::VectorXd recover(const Eigen::VectorXd& q, double scale = 1.0) const;

  SparseMat reduce_matrix(const SparseMat& K) const;       // T' K T
  Eigen::VectorXd reduce_rhs(const SparseMat& K, const Eigen::VectorXd& f, double scale) const;

private:
  int n_dofs_ = 0;
  std::vector<int> masters_;
  SparseMat T_;
  Eigen::VectorXd c_;
};

struct ReducedSystem {
  SparseMat K_red;
  Eigen::VectorXd f_red;
  ConstraintEliminator eliminator;
};

// Reduce (K, f) under cs and verify the reduced operator is SPD by
// attempting a Cholesky-type factorization; throws SingularSystemError when
// it is not.
ReducedSystem apply_constraints(const SparseMat& K, const Eigen::VectorXd& f,
                                const ConstraintSet& cs);

// Largest violation of the set over a displacement field, with prescribed
// values scaled by `scale`.
double constraint_residual(const ConstraintSet& cs, const Eigen::VectorXd& u, double scale = 1.0);

} // namespace rvelab
