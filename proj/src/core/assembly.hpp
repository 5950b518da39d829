#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "core/constraints.hpp"
#include "core/damage.hpp"
#include "core/meshing.hpp"

namespace rvelab {

using ElementMatrix = Eigen::Matrix<double, 8, 8>;
using BMatrix = Eigen::Matrix<double, 3, 8>;

struct PhaseMaterials {
  PhaseMaterial matrix;
  PhaseMaterial fiber;

  const PhaseMaterial& of(Phase p) const { return p == Phase::Fiber ? fiber : matrix; }
};

// Stiffness of one square bilinear quad of side h under plane stress with
// unit thickness, integrated with 2x2 Gauss quadrature.
ElementMatrix element_stiffness(const Eigen::Matrix3d& C, double h);

// Strain-displacement operator evaluated at the element centroid.
BMatrix centroid_strain_operator(double h);

// Local-to-global dof map of element (i, j): nodes ordered counterclockwise
// from the lower-left corner, (ux, uy) per node.
std::array<int, 8> element_dofs(const Mesh& mesh, int i, int j);

// Global secant stiffness: every element contributes
// (1 - D_e) * K0(phase(e)).
SparseMat assemble_global_stiffness(const Mesh& mesh, const PhaseMaterials& mats,
                                    const std::vector<DamageState>& states);

} // namespace rvelab
