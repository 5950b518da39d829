#include "core/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "core/errors.hpp"

namespace rvelab {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

Vec2 LoadProgram::direction() const {
  if (mode == LoadMode::AxialXX) return {1.0, 0.0};
  const double t = theta_deg * kPi / 180.0;
  return {std::cos(t), std::sin(t)};
}

void LoadProgram::validate() const {
  if (n_increments < 1) throw InvalidSpecError("load: n_increments must be >= 1");
  if (!(total_displacement > 0.0)) throw InvalidSpecError("load: total displacement must be positive");
  if (mode == LoadMode::Angled && (theta_deg < 0.0 || theta_deg >= 90.0))
    throw InvalidSpecError("load: theta must lie in [0, 90)");
}

namespace {

void check_mesh(const Mesh& mesh) {
  if (mesh.nx < 1 || mesh.ny < 1) throw MeshTopologyError("mesh has no elements");
  if (mesh.element_phase.size() != static_cast<std::size_t>(mesh.element_count()))
    throw MeshTopologyError("mesh phase table does not match the grid");
}

void add_tie(ConstraintSet& cs, int dof_a, int dof_b) {
  LinearConstraint c;
  c.terms = {{std::min(dof_a, dof_b), 1.0}, {std::max(dof_a, dof_b), -1.0}};
  cs.constraints.push_back(std::move(c));
}

// (u[a0] - u[a1]) - sign * (u[b0] - u[b1]) = 0
void add_difference_tie(ConstraintSet& cs, int a0, int a1, int b0, int b1, double sign) {
  LinearConstraint c;
  c.terms = {{a0, 1.0}, {a1, -1.0}, {b0, -sign}, {b1, sign}};
  std::sort(c.terms.begin(), c.terms.end(),
            [](const ConstraintTerm& x, const ConstraintTerm& y) { return x.dof < y.dof; });
  cs.constraints.push_back(std::move(c));
}

} // namespace

ConstraintSet build_dpbc(const Mesh& mesh, const LoadProgram& load) {
  check_mesh(mesh);
  load.validate();

  const int nx = mesh.nx;
  const int ny = mesh.ny;
  ConstraintSet cs;

  const Vec2 dir = load.direction();
  const double u = load.total_displacement;

  for (int j = 0; j <= ny; ++j)
    cs.prescribed.push_back({dof_index(mesh.node_index(0, j), 0), 0.0});

  if (load.mode == LoadMode::AxialXX) {
    for (int j = 0; j <= ny; ++j)
      cs.prescribed.push_back({dof_index(mesh.node_index(nx, j), 0), u});
    // Periodic in y across the loaded pair of edges.
    for (int j = 0; j <= ny; ++j)
      add_tie(cs, dof_index(mesh.node_index(0, j), 1), dof_index(mesh.node_index(nx, j), 1));
    // Rigid-body translation in y.
    cs.prescribed.push_back({dof_index(mesh.node_index(0, 0), 1), 0.0});
  } else {
    for (int j = 0; j <= ny; ++j) {
      cs.prescribed.push_back({dof_index(mesh.node_index(nx, j), 0), u * dir.x});
      cs.prescribed.push_back({dof_index(mesh.node_index(nx, j), 1), u * dir.y});
    }
  }

  // Top/bottom periodicity in both components, written against the corner
  // reference pair so the average transverse stretch stays free:
  // u(i, ny) - u(i, 0) = u(0, ny) - u(0, 0). The corner x-values are
  // resolved by the left-edge Dirichlet entries.
  for (int i = 1; i <= nx; ++i) {
    for (int comp = 0; comp < 2; ++comp)
      add_difference_tie(cs,
                         dof_index(mesh.node_index(i, ny), comp),
                         dof_index(mesh.node_index(i, 0), comp),
                         dof_index(mesh.node_index(0, ny), comp),
                         dof_index(mesh.node_index(0, 0), comp), 1.0);
  }
  return cs;
}

ConstraintSet build_mpbc(const Mesh& mesh, int band_width_elems, const LoadProgram& load,
                         bool antisymmetric_ties) {
  check_mesh(mesh);
  const int nx = mesh.nx;
  const int ny = mesh.ny;
  if (band_width_elems < 1 || band_width_elems > std::min(nx, ny) / 4)
    throw InvalidSpecError("mpbc band width must lie in [1, min(nx, ny)/4]");

  ConstraintSet cs = build_dpbc(mesh, load);
  const double sign = antisymmetric_ties ? -1.0 : 1.0;

  for (int k = 1; k <= band_width_elems; ++k) {
    // Left/right interior layers: tie vertical differences of the component
    // not prescribed on those edges. Angled loading prescribes both
    // components on the loaded edge, so its left/right layers carry no tie.
    if (load.mode == LoadMode::AxialXX) {
      for (int j = 0; j < ny; ++j)
        add_difference_tie(cs,
                           dof_index(mesh.node_index(k, j + 1), 1),
                           dof_index(mesh.node_index(k, j), 1),
                           dof_index(mesh.node_index(nx - k, j + 1), 1),
                           dof_index(mesh.node_index(nx - k, j), 1), sign);
    }
    // Top/bottom interior layers: tie horizontal differences of both
    // components.
    for (int comp = 0; comp < 2; ++comp)
      for (int i = 0; i < nx; ++i)
        add_difference_tie(cs,
                           dof_index(mesh.node_index(i + 1, k), comp),
                           dof_index(mesh.node_index(i, k), comp),
                           dof_index(mesh.node_index(i + 1, ny - k), comp),
                           dof_index(mesh.node_index(i, ny - k), comp), sign);
  }
  return cs;
}

ConstraintEliminator::ConstraintEliminator(int n_dofs, const ConstraintSet& cs) : n_dofs_(n_dofs) {
  struct Relation {
    std::vector<ConstraintTerm> terms; // masters only
    double c = 0.0;
  };
  std::unordered_map<int, Relation> relations;
  std::unordered_map<int, std::vector<int>> dependents; // master -> slaves referencing it

  auto substitute = [&](std::vector<ConstraintTerm>& terms, double& rhs) {
    std::map<int, double> acc;
    double c = 0.0;
    for (const auto& t : terms) {
      auto it = relations.find(t.dof);
      if (it == relations.end()) {
        acc[t.dof] += t.coeff;
      } else {
        for (const auto& rt : it->second.terms) acc[rt.dof] += t.coeff * rt.coeff;
        c += t.coeff * it->second.c;
      }
    }
    terms.clear();
    double max_abs = 0.0;
    for (const auto& [d, v] : acc) max_abs = std::max(max_abs, std::abs(v));
    for (const auto& [d, v] : acc)
      if (std::abs(v) > 1e-12 * max_abs && v != 0.0) terms.push_back({d, v});
    rhs -= c;
  };

  auto process = [&](std::vector<ConstraintTerm> terms, double rhs, double scale_hint) {
    substitute(terms, rhs);
    if (terms.empty()) {
      if (std::abs(rhs) > 1e-9 * std::max(1.0, scale_hint))
        throw RankDeficiencyError("conflicting constraint rows detected during elimination");
      return; // redundant, consistent
    }
    // Pivot on the largest coefficient; break ties toward the highest dof.
    std::size_t piv = 0;
    for (std::size_t t = 1; t < terms.size(); ++t) {
      const double a = std::abs(terms[t].coeff);
      const double p = std::abs(terms[piv].coeff);
      if (a > p || (a == p && terms[t].dof > terms[piv].dof)) piv = t;
    }
    const int slave = terms[piv].dof;
    const double pc = terms[piv].coeff;
    Relation rel;
    rel.c = rhs / pc;
    for (std::size_t t = 0; t < terms.size(); ++t) {
      if (t == piv) continue;
      rel.terms.push_back({terms[t].dof, -terms[t].coeff / pc});
    }

    // Back-substitute the new relation into any relation that references
    // the new slave, keeping every stored relation in terms of masters.
    auto dep_it = dependents.find(slave);
    if (dep_it != dependents.end()) {
      for (int s : dep_it->second) {
        auto rit = relations.find(s);
        if (rit == relations.end()) continue;
        Relation& r = rit->second;
        double w = 0.0;
        std::map<int, double> acc;
        for (const auto& t : r.terms) {
          if (t.dof == slave) w = t.coeff;
          else acc[t.dof] += t.coeff;
        }
        if (w == 0.0) continue;
        for (const auto& t : rel.terms) acc[t.dof] += w * t.coeff;
        r.c += w * rel.c;
        r.terms.clear();
        for (const auto& [d, v] : acc) {
          if (v != 0.0) {
            r.terms.push_back({d, v});
            dependents[d].push_back(s);
          }
        }
      }
      dependents.erase(dep_it);
    }

    for (const auto& t : rel.terms) dependents[t.dof].push_back(slave);
    relations.emplace(slave, std::move(rel));
  };

  // Dirichlet rows first (sorted for determinism), tie rows in build order.
  std::vector<PrescribedDof> pres = cs.prescribed;
  std::sort(pres.begin(), pres.end(),
            [](const PrescribedDof& a, const PrescribedDof& b) { return a.dof < b.dof; });
  double scale_hint = 1.0;
  for (const auto& p : pres) scale_hint = std::max(scale_hint, std::abs(p.value));
  for (const auto& p : pres) process({{p.dof, 1.0}}, p.value, scale_hint);
  for (const auto& c : cs.constraints) process(c.terms, c.rhs, scale_hint);

  masters_.clear();
  std::vector<int> column_of(static_cast<std::size_t>(n_dofs_), -1);
  for (int d = 0; d < n_dofs_; ++d) {
    if (relations.find(d) == relations.end()) {
      column_of[static_cast<std::size_t>(d)] = static_cast<int>(masters_.size());
      masters_.push_back(d);
    }
  }

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(n_dofs_) * 2);
  c_ = Eigen::VectorXd::Zero(n_dofs_);
  for (int d = 0; d < n_dofs_; ++d) {
    auto it = relations.find(d);
    if (it == relations.end()) {
      trip.emplace_back(d, column_of[static_cast<std::size_t>(d)], 1.0);
    } else {
      c_[d] = it->second.c;
      for (const auto& t : it->second.terms) {
        const int col = column_of[static_cast<std::size_t>(t.dof)];
        if (col < 0) throw RankDeficiencyError("internal: relation references a slave dof");
        trip.emplace_back(d, col, t.coeff);
      }
    }
  }
  T_.resize(n_dofs_, static_cast<int>(masters_.size()));
  T_.setFromTriplets(trip.begin(), trip.end());
  T_.makeCompressed();
}

Eigen::VectorXd ConstraintEliminator::recover(const Eigen::VectorXd& q, double scale) const {
  return T_ * q + c_ * scale;
}

SparseMat ConstraintEliminator::reduce_matrix(const SparseMat& K) const {
  SparseMat KT = K * T_;
  SparseMat out = T_.transpose() * KT;
  out.makeCompressed();
  return out;
}

Eigen::VectorXd ConstraintEliminator::reduce_rhs(const SparseMat& K, const Eigen::VectorXd& f,
                                                 double scale) const {
  return T_.transpose() * (f - K * (c_ * scale));
}

ReducedSystem apply_constraints(const SparseMat& K, const Eigen::VectorXd& f,
                                const ConstraintSet& cs) {
  if (K.rows() != K.cols() || K.rows() != f.size())
    throw InvalidSpecError("apply_constraints: inconsistent system dimensions");
  ConstraintEliminator elim(static_cast<int>(K.rows()), cs);
  ReducedSystem rs{elim.reduce_matrix(K), elim.reduce_rhs(K, f, 1.0), std::move(elim)};

  Eigen::SimplicialLDLT<SparseMat> chol;
  chol.compute(rs.K_red);
  if (chol.info() != Eigen::Success)
    throw SingularSystemError("reduced stiffness is not SPD");
  const Eigen::VectorXd& d = chol.vectorD();
  if (d.size() > 0 && (!(d.minCoeff() > 0.0) || d.minCoeff() <= 1e-14 * d.maxCoeff()))
    throw SingularSystemError("reduced stiffness is not SPD (null or negative pivot)");
  return rs;
}

double constraint_residual(const ConstraintSet& cs, const Eigen::VectorXd& u, double scale) {
  double worst = 0.0;
  for (const auto& p : cs.prescribed)
    worst = std::max(worst, std::abs(u[p.dof] - scale * p.value));
  for (const auto& c : cs.constraints) {
    double s = -scale * c.rhs;
    for (const auto& t : c.terms) s += t.coeff * u[t.dof];
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

} // namespace rvelab
