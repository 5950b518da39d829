#include "rvelab/rvelab.h"

#include <cstring>
#include <memory>
#include <string>

#include "core/analysis.hpp"
#include "core/errors.hpp"
#include "core/homogenize.hpp"
#include "core/io.hpp"
#include "core/meshing.hpp"
#include "core/microstructure.hpp"
#include "core/solver.hpp"
#include "rvelab_version.hpp"

namespace {

thread_local std::string g_last_error;

rve_status classify(const std::exception& e) {
  using namespace rvelab;
  g_last_error = e.what();
  if (dynamic_cast<const JammingError*>(&e)) return RVE_ERR_JAMMING;
  if (dynamic_cast<const NonconformingMeshError*>(&e)) return RVE_ERR_NONCONFORMING_MESH;
  if (dynamic_cast<const MeshTopologyError*>(&e)) return RVE_ERR_MESH_TOPOLOGY;
  if (dynamic_cast<const RankDeficiencyError*>(&e)) return RVE_ERR_RANK_DEFICIENCY;
  if (dynamic_cast<const SingularSystemError*>(&e)) return RVE_ERR_SINGULAR_SYSTEM;
  if (dynamic_cast<const NoPairError*>(&e)) return RVE_ERR_NO_PAIR;
  if (dynamic_cast<const NoCrackError*>(&e)) return RVE_ERR_NO_CRACK;
  if (dynamic_cast<const DegenerateDenominatorError*>(&e)) return RVE_ERR_DEGENERATE_DENOMINATOR;
  if (dynamic_cast<const InadmissibleLocalizationError*>(&e))
    return RVE_ERR_INADMISSIBLE_LOCALIZATION;
  if (dynamic_cast<const NoIntersectionError*>(&e)) return RVE_ERR_NO_INTERSECTION;
  if (dynamic_cast<const DegenerateError*>(&e)) return RVE_ERR_DEGENERATE;
  if (dynamic_cast<const IoError*>(&e)) return RVE_ERR_IO;
  if (dynamic_cast<const InvalidSpecError*>(&e)) return RVE_ERR_INVALID_SPEC;
  return RVE_ERR_UNKNOWN;
}

template <typename Fn>
rve_status guarded(Fn&& fn) {
  try {
    fn();
    return RVE_OK;
  } catch (const std::exception& e) {
    return classify(e);
  } catch (...) {
    g_last_error = "unknown error";
    return RVE_ERR_UNKNOWN;
  }
}

} // namespace

struct rve_microstructure {
  rvelab::Microstructure m;
};

struct rve_mesh {
  rvelab::Mesh mesh;
};

struct rve_solution {
  rvelab::Mesh mesh;
  rvelab::SolveConfig config;
  rvelab::SolveTrace trace;
  rvelab::FdCurve curve;
  rvelab::CurveMetrics metrics;
  rvelab::CurveMetadata meta;
  std::string micro_json;
};

extern "C" {

const char* rve_version(void) { return rvelab::kVersion; }

const char* rve_status_name(rve_status status) {
  switch (status) {
    case RVE_OK: return "ok";
    case RVE_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case RVE_ERR_INVALID_SPEC: return "invalid_spec";
    case RVE_ERR_JAMMING: return "jamming";
    case RVE_ERR_NONCONFORMING_MESH: return "nonconforming_mesh";
    case RVE_ERR_MESH_TOPOLOGY: return "mesh_topology";
    case RVE_ERR_RANK_DEFICIENCY: return "rank_deficiency";
    case RVE_ERR_SINGULAR_SYSTEM: return "singular_system";
    case RVE_ERR_NO_PAIR: return "no_pair";
    case RVE_ERR_DEGENERATE: return "degenerate";
    case RVE_ERR_NO_CRACK: return "no_crack";
    case RVE_ERR_DEGENERATE_DENOMINATOR: return "degenerate_denominator";
    case RVE_ERR_INADMISSIBLE_LOCALIZATION: return "inadmissible_localization";
    case RVE_ERR_NO_INTERSECTION: return "no_intersection";
    case RVE_ERR_IO: return "io";
    case RVE_ERR_PARTIAL_FAILURE: return "partial_failure";
    default: return "unknown";
  }
}

const char* rve_last_error(void) { return g_last_error.c_str(); }

rve_status rve_microstructure_generate(int32_t n_fibers, double target_vf, double l, double b,
                                       uint64_t seed, int64_t max_attempts,
                                       rve_microstructure** out) {
  if (!out) return RVE_ERR_INVALID_ARGUMENT;
  return guarded([&]() {
    *out = new rve_microstructure{
        rvelab::generate_rsa(n_fibers, target_vf, l, b, seed, max_attempts)};
  });
}

rve_status rve_microstructure_regular_grid(int32_t rows, int32_t cols, double r, double l,
                                           double b, int has_pair_gap, double pair_gap,
                                           rve_microstructure** out) {
  if (!out) return RVE_ERR_INVALID_ARGUMENT;
  return guarded([&]() {
    std::optional<double> gap;
    if (has_pair_gap) gap = pair_gap;
    *out = new rve_microstructure{rvelab::regular_grid(rows, cols, r, l, b, gap)};
  });
}

rve_status rve_microstructure_read(const char* path, rve_microstructure** out) {
  if (!out || !path) return RVE_ERR_INVALID_ARGUMENT;
  return guarded([&]() { *out = new rve_microstructure{rvelab::read_microstructure(path)}; });
}

rve_status rve_microstructure_write(const rve_microstructure* m, const char* path) {
  if (!m || !path) return RVE_ERR_INVALID_ARGUMENT;
  return guarded([&]() { rvelab::write_microstructure(m->m, path); });
}

void rve_microstructure_free(rve_microstructure* m) { delete m; }

int32_t rve_microstructure_fiber_count(const rve_microstructure* m) {
  return m ? m->m.fiber_count() : 0;
}

int32_t rve_microstructure_circle_count(const rve_microstructure* m) {
  return m ? static_cast<int32_t>(m->m.fibers.size()) : 0;
}

rve_status rve_microstructure_circle(const rve_microstructure* m, int32_t index, double* cx,
                                     double* cy, double* r, int32_t* ghost_of) {
  if (!m || index < 0 || index >= static_cast<int32_t>(m->m.fibers.size()))
    return RVE_ERR_INVALID_ARGUMENT;
  const auto& f = m->m.fibers[static_cast<std::size_t>(index)];
  if (cx) *cx = f.center.x;
  if (cy) *cy = f.center.y;
  if (r) *r = f.radius;
  if (ghost_of) *ghost_of = f.ghost_of;
  return RVE_OK;
}

rve_status rve_microstructure_min_freepath(const rve_microstructure* m, double load_x,
                                           double load_y, int32_t* i, int32_t* j, double* freepath,
                                           double* theta_deg) {
  if (!m) return RVE_ERR_INVALID_ARGUMENT;
  return guarded([&]() {
    const auto pair = rvelab::min_freepath(m->m, {load_x, load_y});
    if (i) *i = pair.i;
    if (j) *j = pair.j;
    if (freepath) *freepath = pair.freepath;
    if (theta_deg) *theta_deg = pair.theta_deg;
  });
}

rve_status rve_mesh_rasterize(const rve_microstructure* m, double h, rve_mesh** out) {
  if (!m || !out) return RVE_ERR_INVALID_ARGUMENT;
  return guarded([&]() { *out = new rve_mesh{rvelab::rasterize(m->m, h)}; });
}

void rve_mesh_free(rve_mesh* mesh) { delete mesh; }

int32_t rve_mesh_nx(const rve_mesh* mesh) { return mesh ? mesh->mesh.nx : 0; }
int32_t rve_mesh_ny(const rve_mesh* mesh) { return mesh ? mesh->mesh.ny : 0; }

rve_status rve_mesh_phases(const rve_mesh* mesh, int32_t* out, size_t capacity) {
  if (!mesh || !out) return RVE_ERR_INVALID_ARGUMENT;
  const std::size_t n = mesh->mesh.element_phase.size();
  if (capacity < n) return RVE_ERR_INVALID_ARGUMENT;
  for (std::size_t e = 0; e < n; ++e)
    out[e] = mesh->mesh.element_phase[e] == rvelab::Phase::Fiber ? 1 : 0;
  return RVE_OK;
}

rve_status rve_mesh_write_phase_csv(const rve_mesh* mesh, const char* path) {
  if (!mesh || !path) return RVE_ERR_INVALID_ARGUMENT;
  return guarded([&]() { rvelab::write_phase_csv(mesh->mesh, path); });
}

rve_status rve_solve(const rve_microstructure* m, const char* config_json, rve_solution** out) {
  if (!m || !config_json || !out) return RVE_ERR_INVALID_ARGUMENT;
  return guarded([&]() {
    auto sol = std::make_unique<rve_solution>();
    sol->config = rvelab::parse_solve_config(config_json);
    sol->mesh = rvelab::rasterize(m->m, sol->config.h);
    const rvelab::ConstraintSet cs = sol->config.build_constraints(sol->mesh);
    const rvelab::PhaseMaterials mats = sol->config.regularized_materials();
    sol->trace = rvelab::solve_quasistatic(sol->mesh, mats, cs, sol->config.load,
                                           sol->config.solver);
    sol->meta.vf = m->m.target_vf;
    sol->meta.n_fibers = m->m.fiber_count();
    sol->meta.h = sol->config.h;
    sol->meta.bc_type = sol->config.bc.name();
    sol->meta.seed = m->m.seed;
    sol->curve = rvelab::curve_from_trace(sol->trace, sol->meta);
    sol->metrics = rvelab::curve_metrics(sol->trace, sol->curve, sol->mesh.length());
    sol->micro_json = rvelab::microstructure_to_json(m->m);
    *out = sol.release();
  });
}

void rve_solution_free(rve_solution* s) { delete s; }

int64_t rve_solution_increment_count(const rve_solution* s) {
  return s ? static_cast<int64_t>(s->trace.rows.size()) : 0;
}

rve_status rve_solution_trace_row(const rve_solution* s, int64_t increment, double out[10]) {
  if (!s || !out || increment < 1 ||
      increment > static_cast<int64_t>(s->trace.rows.size()))
    return RVE_ERR_INVALID_ARGUMENT;
  const auto& r = s->trace.rows[static_cast<std::size_t>(increment - 1)];
  out[0] = r.applied_u;
  out[1] = r.reaction_sum;
  out[2] = r.avg_stress[0];
  out[3] = r.avg_stress[1];
  out[4] = r.avg_stress[2];
  out[5] = r.avg_strain[0];
  out[6] = r.avg_strain[1];
  out[7] = r.avg_strain[2];
  out[8] = static_cast<double>(r.n_damaged);
  out[9] = r.max_D;
  return RVE_OK;
}

rve_status rve_solution_crack_band_width(const rve_solution* s, double threshold,
                                         int32_t* width_elems) {
  if (!s || !width_elems) return RVE_ERR_INVALID_ARGUMENT;
  return guarded([&]() {
    std::vector<double> field(s->trace.final_states.size());
    for (std::size_t e = 0; e < field.size(); ++e) field[e] = s->trace.final_states[e].D;
    *width_elems = rvelab::crack_band_width(field, s->mesh.nx, s->mesh.ny, threshold);
  });
}

rve_status rve_solution_write_outputs(const rve_solution* s, const char* out_dir) {
  if (!s || !out_dir) return RVE_ERR_INVALID_ARGUMENT;
  return guarded([&]() {
    const std::string dir(out_dir);
    rvelab::write_trace_csv(s->trace, dir + "/trace.csv");
    rvelab::write_curve_csv(s->curve, dir + "/curve.csv");
    rvelab::write_metrics_json(s->metrics, s->meta, dir + "/metrics.json");
    for (const auto& snap : s->trace.snapshots)
      rvelab::write_snapshot_csv(snap.field, s->mesh.nx, dir + "/snapshot_" + snap.tag + ".csv");
    rvelab::write_text_file(dir + "/micro.json", s->micro_json);
    std::string manifest = "{\n  \"version\": \"";
    manifest += rvelab::kVersion;
    manifest += "\",\n  \"config\": ";
    manifest += rvelab::solve_config_to_json(s->config);
    manifest += "}\n";
    rvelab::write_text_file(dir + "/manifest.json", manifest);
  });
}

rve_status rve_c_theta(double eps0_ref, double eps0_d_only, double eps0_theta_only,
                       double eps0_both, double* out) {
  if (!out) return RVE_ERR_INVALID_ARGUMENT;
  return guarded(
      [&]() { *out = rvelab::c_theta(eps0_ref, eps0_d_only, eps0_theta_only, eps0_both); });
}

rve_status rve_dispersion_sd_files(const char* const* curve_paths, int32_t n_curves,
                                   double slope_fraction, double* sd, int32_t* n_excluded) {
  if (!curve_paths || n_curves < 2 || !sd) return RVE_ERR_INVALID_ARGUMENT;
  return guarded([&]() {
    std::vector<rvelab::FdCurve> curves;
    for (int32_t i = 0; i < n_curves; ++i)
      curves.push_back(rvelab::read_curve_csv(curve_paths[i]));
    const auto r = rvelab::dispersion_sd(curves, slope_fraction);
    *sd = r.sd;
    if (n_excluded) *n_excluded = r.n_excluded;
  });
}

rve_status rve_curve_metrics_file(const char* curve_path, double domain_length, double f_fail,
                                  double out_metrics[5], int32_t flags[2]) {
  if (!curve_path || !out_metrics) return RVE_ERR_INVALID_ARGUMENT;
  return guarded([&]() {
    const rvelab::FdCurve curve = rvelab::read_curve_csv(curve_path);
    rvelab::SolveTrace empty_trace;
    rvelab::CurveMetrics m;
    // Without a trace the initiation strain is unavailable; report the
    // curve-level quantities and flag initiation as unknown.
    m.epsf_rve = rvelab::detect_failure(curve, domain_length, f_fail);
    m.peak_force = curve.F.empty() ? 0.0 : *std::max_element(curve.F.begin(), curve.F.end());
    m.elastic_slope = rvelab::elastic_slope(curve, std::nullopt);
    double area = 0.0, pd = 0.0, pf = 0.0;
    for (std::size_t i = 0; i < curve.d.size(); ++i) {
      area += 0.5 * (pf + curve.F[i]) * (curve.d[i] - pd);
      pd = curve.d[i];
      pf = curve.F[i];
    }
    m.dissipated_energy = area;
    out_metrics[0] = 0.0;
    out_metrics[1] = m.epsf_rve.value_or(0.0);
    out_metrics[2] = m.peak_force;
    out_metrics[3] = m.elastic_slope;
    out_metrics[4] = m.dissipated_energy;
    if (flags) {
      flags[0] = 1; // initiation unavailable from a bare curve
      flags[1] = m.epsf_rve ? 0 : 1;
    }
  });
}

rve_status rve_sweep_run(const char* plan_json_path, const char* out_dir, int32_t jobs) {
  if (!plan_json_path || !out_dir) return RVE_ERR_INVALID_ARGUMENT;
  rve_status status = RVE_OK;
  const rve_status guard = guarded([&]() {
    const rvelab::SweepPlan plan = rvelab::read_sweep_plan(plan_json_path);
    const rvelab::SweepResult result = rvelab::sweep_run(plan, out_dir, jobs);
    if (result.n_failed > 0) {
      g_last_error = std::to_string(result.n_failed) + " sample(s) failed; see manifest.json";
      status = RVE_ERR_PARTIAL_FAILURE;
    }
  });
  return guard != RVE_OK ? guard : status;
}

rve_status rve_rod_stress_analytic(double u, double L, double lambda, double E, double H,
                                   double eps0, double* sigma) {
  if (!sigma) return RVE_ERR_INVALID_ARGUMENT;
  return guarded([&]() { *sigma = rvelab::rod_stress_analytic(u, L, lambda, E, H, eps0); });
}

} // extern "C"
