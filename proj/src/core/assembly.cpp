#include "core/assembly.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace rvelab {

namespace {

BMatrix strain_operator_at(double xi, double eta, double h) {
  // Shape function gradients on the parent square, chained through the
  // constant Jacobian 2/h of the physical square.
  const double s = 2.0 / h;
  const double dN_dxi[4] = {-0.25 * (1.0 - eta), 0.25 * (1.0 - eta),
                            0.25 * (1.0 + eta), -0.25 * (1.0 + eta)};
  const double dN_deta[4] = {-0.25 * (1.0 - xi), -0.25 * (1.0 + xi),
                             0.25 * (1.0 + xi), 0.25 * (1.0 - xi)};
  BMatrix B = BMatrix::Zero();
  for (int a = 0; a < 4; ++a) {
    const double dx = s * dN_dxi[a];
    const double dy = s * dN_deta[a];
    B(0, 2 * a) = dx;
    B(1, 2 * a + 1) = dy;
    B(2, 2 * a) = dy;
    B(2, 2 * a + 1) = dx;
  }
  return B;
}

} // namespace

ElementMatrix element_stiffness(const Eigen::Matrix3d& C, double h) {
  const double g = 1.0 / std::sqrt(3.0);
  const double w = (h / 2.0) * (h / 2.0); // unit gauss weights times |J|
  ElementMatrix K = ElementMatrix::Zero();
  for (double xi : {-g, g})
    for (double eta : {-g, g}) {
      const BMatrix B = strain_operator_at(xi, eta, h);
      K += w * B.transpose() * C * B;
    }
  return K;
}

BMatrix centroid_strain_operator(double h) { return strain_operator_at(0.0, 0.0, h); }

std::array<int, 8> element_dofs(const Mesh& mesh, int i, int j) {
  const int n0 = mesh.node_index(i, j);
  const int n1 = mesh.node_index(i + 1, j);
  const int n2 = mesh.node_index(i + 1, j + 1);
  const int n3 = mesh.node_index(i, j + 1);
  return {2 * n0, 2 * n0 + 1, 2 * n1, 2 * n1 + 1, 2 * n2, 2 * n2 + 1, 2 * n3, 2 * n3 + 1};
}

SparseMat assemble_global_stiffness(const Mesh& mesh, const PhaseMaterials& mats,
                                    const std::vector<DamageState>& states) {
  if (states.size() != static_cast<std::size_t>(mesh.element_count()))
    throw InvalidSpecError("assemble: one damage state per element required");

  const ElementMatrix K_matrix = element_stiffness(secant_stiffness(0.0, mats.matrix), mesh.h);
  const ElementMatrix K_fiber = element_stiffness(secant_stiffness(0.0, mats.fiber), mesh.h);

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(mesh.element_count()) * 64);
  for (int j = 0; j < mesh.ny; ++j) {
    for (int i = 0; i < mesh.nx; ++i) {
      const int e = mesh.element_index(i, j);
      const Phase p = mesh.element_phase[static_cast<std::size_t>(e)];
      const double scale = 1.0 - states[static_cast<std::size_t>(e)].D;
      const ElementMatrix& K0 = p == Phase::Fiber ? K_fiber : K_matrix;
      const auto dofs = element_dofs(mesh, i, j);
      for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c)
          trip.emplace_back(dofs[static_cast<std::size_t>(r)], dofs[static_cast<std::size_t>(c)],
                            scale * K0(r, c));
    }
  }
  const int n = 2 * mesh.node_count();
  SparseMat K(n, n);
  K.setFromTriplets(trip.begin(), trip.end());
  K.makeCompressed();
  return K;
}

} // namespace rvelab
