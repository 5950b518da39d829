// Command-line front end for the rvelab shared library. Everything goes
// through the public C API; outputs are files under the directory the user
// names.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rvelab/rvelab.h"

namespace {

int fail_with(rve_status status, int exit_code) {
  std::fprintf(stderr, "error (%s): %s\n", rve_status_name(status), rve_last_error());
  return exit_code;
}

int jobs_from_env(int cli_jobs) {
  if (const char* env = std::getenv("RVE_LAB_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return cli_jobs;
}

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw CLI::ValidationError("cannot read file: " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"rvelab - fibre-reinforced RVE damage laboratory"};
  app.set_version_flag("--version", std::string(rve_version()));
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a periodic fibre packing");
  int gen_n = 30;
  double gen_vf = 0.30, gen_l = 1.0, gen_b = 1.0;
  std::uint64_t gen_seed = 1;
  long gen_attempts = 100000;
  std::string gen_out = "micro.json";
  gen->add_option("--n", gen_n, "number of fibres")->required();
  gen->add_option("--vf", gen_vf, "target fibre volume fraction")->required();
  gen->add_option("--l", gen_l, "domain length");
  gen->add_option("--b", gen_b, "domain breadth");
  gen->add_option("--seed", gen_seed, "RNG seed");
  gen->add_option("--max-attempts", gen_attempts, "rejections allowed per fibre");
  gen->add_option("--out", gen_out, "output JSON path")->required();

  // mesh
  auto* mesh_cmd = app.add_subcommand("mesh", "rasterize a packing onto a quad grid");
  std::string mesh_micro, mesh_out = "phases.csv";
  double mesh_h = 0.02;
  mesh_cmd->add_option("--micro", mesh_micro, "microstructure JSON")->required();
  mesh_cmd->add_option("--h", mesh_h, "element size")->required();
  mesh_cmd->add_option("--out", mesh_out, "phase CSV path")->required();

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "run the incremental damage solve");
  std::string solve_micro, solve_config, solve_out = "out";
  solve_cmd->add_option("--micro", solve_micro, "microstructure JSON")->required();
  solve_cmd->add_option("--config", solve_config, "solve config JSON")->required();
  solve_cmd->add_option("--out", solve_out, "output directory")->required();

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "run an ensemble plan");
  std::string sweep_plan, sweep_out = "sweep_out";
  int sweep_jobs = 0;
  sweep_cmd->add_option("--plan", sweep_plan, "sweep plan JSON")->required();
  sweep_cmd->add_option("--out", sweep_out, "output directory")->required();
  sweep_cmd->add_option("--jobs", sweep_jobs, "parallel sample jobs (0 = all cores)");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "post-process curves");
  analyze->require_subcommand(1);

  auto* an_sd = analyze->add_subcommand("sd", "dispersion of an ensemble of F-d curves");
  double sd_fraction = 0.5;
  std::vector<std::string> sd_files;
  an_sd->add_option("--slope-fraction", sd_fraction, "fraction of the elastic slope");
  an_sd->add_option("curves", sd_files, "curve CSV files")->required()->expected(-2);

  auto* an_ct = analyze->add_subcommand("c-theta", "angle contribution to initiation change");
  double ct_ref = 0.0, ct_d = 0.0, ct_t = 0.0, ct_b = 0.0;
  an_ct->add_option("--ref", ct_ref, "reference initiation strain")->required();
  an_ct->add_option("--d-only", ct_d, "freepath-only initiation strain")->required();
  an_ct->add_option("--theta-only", ct_t, "angle-only initiation strain")->required();
  an_ct->add_option("--both", ct_b, "combined-change initiation strain")->required();

  auto* an_metrics = analyze->add_subcommand("metrics", "summary metrics of one curve");
  std::string me_curve;
  double me_len = 1.0, me_ffail = 0.01;
  an_metrics->add_option("--curve", me_curve, "curve CSV")->required();
  an_metrics->add_option("--domain-length", me_len, "domain length for strain conversion");
  an_metrics->add_option("--f-fail", me_ffail, "failure force fraction of the peak");

  // rod-oracle
  auto* rod = app.add_subcommand("rod-oracle", "analytic softening-rod stress");
  double rod_L = 1.0, rod_lambda = 0.01, rod_E = 1.0, rod_H = 0.1, rod_eps0 = 0.125;
  double rod_u = 0.0, rod_u_to = -1.0;
  int rod_steps = 1;
  rod->add_option("--L", rod_L, "rod length");
  rod->add_option("--lambda", rod_lambda, "localization bandwidth");
  rod->add_option("--E", rod_E, "elastic modulus");
  rod->add_option("--H", rod_H, "softening slope magnitude");
  rod->add_option("--eps0", rod_eps0, "damage initiation strain");
  rod->add_option("--u", rod_u, "end displacement")->required();
  rod->add_option("--u-to", rod_u_to, "sweep end displacement (with --steps)");
  rod->add_option("--steps", rod_steps, "number of sweep points");

  for (CLI::App* sub : {gen, mesh_cmd, solve_cmd, sweep_cmd, analyze, an_sd, an_ct, an_metrics, rod})
    sub->set_help_flag("--help", "print help");

  CLI11_PARSE(app, argc, argv);

  if (*gen) {
    rve_microstructure* m = nullptr;
    const rve_status st = rve_microstructure_generate(gen_n, gen_vf, gen_l, gen_b, gen_seed,
                                                      gen_attempts, &m);
    if (st == RVE_ERR_JAMMING) return fail_with(st, 2);
    if (st != RVE_OK) return fail_with(st, 1);
    const rve_status wst = rve_microstructure_write(m, gen_out.c_str());
    if (wst != RVE_OK) {
      rve_microstructure_free(m);
      return fail_with(wst, 1);
    }
    std::printf("wrote %s: %d fibres (%d circles with ghosts), vf=%g, seed=%llu\n",
                gen_out.c_str(), rve_microstructure_fiber_count(m),
                rve_microstructure_circle_count(m), gen_vf,
                static_cast<unsigned long long>(gen_seed));
    rve_microstructure_free(m);
    return 0;
  }

  if (*mesh_cmd) {
    rve_microstructure* m = nullptr;
    rve_status st = rve_microstructure_read(mesh_micro.c_str(), &m);
    if (st != RVE_OK) return fail_with(st, 1);
    rve_mesh* mesh = nullptr;
    st = rve_mesh_rasterize(m, mesh_h, &mesh);
    rve_microstructure_free(m);
    if (st != RVE_OK) return fail_with(st, 1);
    st = rve_mesh_write_phase_csv(mesh, mesh_out.c_str());
    if (st == RVE_OK)
      std::printf("wrote %s: %d x %d elements\n", mesh_out.c_str(), rve_mesh_nx(mesh),
                  rve_mesh_ny(mesh));
    rve_mesh_free(mesh);
    return st == RVE_OK ? 0 : fail_with(st, 1);
  }

  if (*solve_cmd) {
    rve_microstructure* m = nullptr;
    rve_status st = rve_microstructure_read(solve_micro.c_str(), &m);
    if (st != RVE_OK) return fail_with(st, 1);
    rve_solution* sol = nullptr;
    st = rve_solve(m, slurp(solve_config).c_str(), &sol);
    rve_microstructure_free(m);
    if (st != RVE_OK) return fail_with(st, 3);
    st = rve_solution_write_outputs(sol, solve_out.c_str());
    if (st == RVE_OK) {
      const int64_t n = rve_solution_increment_count(sol);
      double last[10] = {0};
      rve_solution_trace_row(sol, n, last);
      std::printf("solved %lld increments; final u=%g, F=%g, damaged elements=%d; outputs in %s\n",
                  static_cast<long long>(n), last[0], last[1], static_cast<int>(last[8]),
                  solve_out.c_str());
    }
    rve_solution_free(sol);
    return st == RVE_OK ? 0 : fail_with(st, 3);
  }

  if (*sweep_cmd) {
    const rve_status st =
        rve_sweep_run(sweep_plan.c_str(), sweep_out.c_str(), jobs_from_env(sweep_jobs));
    if (st == RVE_ERR_PARTIAL_FAILURE) return fail_with(st, 4);
    if (st != RVE_OK) return fail_with(st, 1);
    std::printf("sweep complete; outputs in %s\n", sweep_out.c_str());
    return 0;
  }

  if (*an_sd) {
    std::vector<const char*> paths;
    for (const auto& f : sd_files) paths.push_back(f.c_str());
    double sd = 0.0;
    int32_t excluded = 0;
    const rve_status st = rve_dispersion_sd_files(paths.data(),
                                                  static_cast<int32_t>(paths.size()), sd_fraction,
                                                  &sd, &excluded);
    if (st != RVE_OK) return fail_with(st, 1);
    std::printf("sd=%.17g excluded=%d\n", sd, excluded);
    return 0;
  }

  if (*an_ct) {
    double c = 0.0;
    const rve_status st = rve_c_theta(ct_ref, ct_d, ct_t, ct_b, &c);
    if (st != RVE_OK) return fail_with(st, 1);
    std::printf("c_theta=%.17g\n", c);
    return 0;
  }

  if (*an_metrics) {
    double metrics[5] = {0};
    int32_t flags[2] = {0};
    const rve_status st =
        rve_curve_metrics_file(me_curve.c_str(), me_len, me_ffail, metrics, flags);
    if (st != RVE_OK) return fail_with(st, 1);
    std::printf("peak_force=%.17g elastic_slope=%.17g dissipated_energy=%.17g\n", metrics[2],
                metrics[3], metrics[4]);
    if (flags[1]) std::printf("epsf_rve=never_failed\n");
    else std::printf("epsf_rve=%.17g\n", metrics[1]);
    return 0;
  }

  if (*rod) {
    const int steps = rod_u_to > rod_u ? std::max(rod_steps, 2) : 1;
    std::printf("u,sigma\n");
    for (int k = 0; k < steps; ++k) {
      const double u = steps == 1 ? rod_u : rod_u + (rod_u_to - rod_u) * k / (steps - 1);
      double sigma = 0.0;
      const rve_status st = rve_rod_stress_analytic(u, rod_L, rod_lambda, rod_E, rod_H,
                                                    rod_eps0, &sigma);
      if (st != RVE_OK) return fail_with(st, 1);
      std::printf("%.17g,%.17g\n", u, sigma);
    }
    return 0;
  }

  return 0;
}
