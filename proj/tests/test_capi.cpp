#include <doctest.h>

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "rvelab/rvelab.h"

namespace {

const char* kTinyConfig = R"json({
  "h": 0.1,
  "materials": {
    "matrix": {"E": 1.0, "nu": 0.35, "eps0": 0.125, "epsf": 1.5, "damageable": true},
    "fiber": {"E": 20.0, "nu": 0.2, "damageable": false}
  },
  "regularization": {"mode": "none", "lambda": 0.0},
  "bc": {"type": "dpbc", "band_width": 1},
  "load": {"mode": "axial_xx", "u_total": 0.3, "n_increments": 40},
  "snapshots": {"first_damage": true, "peak": true, "final": true, "every_fraction": 0.0}
})json";

} // namespace

TEST_CASE("version and status names are exposed") {
  CHECK(std::strlen(rve_version()) > 0);
  CHECK(std::string(rve_status_name(RVE_OK)) == "ok");
  CHECK(std::string(rve_status_name(RVE_ERR_JAMMING)) == "jamming");
}

TEST_CASE("microstructure round trip through the C surface") {
  rve_microstructure* m = nullptr;
  REQUIRE(rve_microstructure_generate(12, 0.3, 1.0, 1.0, 99, 100000, &m) == RVE_OK);
  CHECK(rve_microstructure_fiber_count(m) == 12);
  CHECK(rve_microstructure_circle_count(m) >= 12);

  double cx = 0, cy = 0, r = 0;
  int32_t ghost_of = -2;
  REQUIRE(rve_microstructure_circle(m, 0, &cx, &cy, &r, &ghost_of) == RVE_OK);
  CHECK(ghost_of == -1);
  CHECK(r > 0.0);

  const char* path = "/tmp/rvelab_capi_micro.json";
  REQUIRE(rve_microstructure_write(m, path) == RVE_OK);
  rve_microstructure* back = nullptr;
  REQUIRE(rve_microstructure_read(path, &back) == RVE_OK);
  CHECK(rve_microstructure_fiber_count(back) == 12);

  int32_t i = -1, j = -1;
  double freepath = -1.0, theta = -1.0;
  REQUIRE(rve_microstructure_min_freepath(back, 1.0, 0.0, &i, &j, &freepath, &theta) == RVE_OK);
  CHECK(freepath >= 0.0);
  CHECK(theta >= 0.0);
  CHECK(theta <= 90.0);

  rve_microstructure_free(m);
  rve_microstructure_free(back);
}

TEST_CASE("jamming surfaces as its status code") {
  rve_microstructure* m = nullptr;
  const rve_status st = rve_microstructure_generate(50, 0.7, 1.0, 1.0, 1, 500, &m);
  CHECK(st == RVE_ERR_JAMMING);
  CHECK(std::strlen(rve_last_error()) > 0);
}

TEST_CASE("invalid parameters surface as invalid spec") {
  rve_microstructure* m = nullptr;
  CHECK(rve_microstructure_generate(0, 0.3, 1.0, 1.0, 1, 100, &m) == RVE_ERR_INVALID_SPEC);
  CHECK(rve_microstructure_generate(10, 0.3, 1.0, 1.0, 1, 100, nullptr) ==
        RVE_ERR_INVALID_ARGUMENT);
}

TEST_CASE("mesh rasterization and phase export") {
  rve_microstructure* m = nullptr;
  REQUIRE(rve_microstructure_regular_grid(2, 2, 0.1, 1.0, 1.0, 0, 0.0, &m) == RVE_OK);
  rve_mesh* mesh = nullptr;
  REQUIRE(rve_mesh_rasterize(m, 0.1, &mesh) == RVE_OK);
  CHECK(rve_mesh_nx(mesh) == 10);
  CHECK(rve_mesh_ny(mesh) == 10);
  std::vector<int32_t> phases(100);
  REQUIRE(rve_mesh_phases(mesh, phases.data(), phases.size()) == RVE_OK);
  int fiber = 0;
  for (int32_t p : phases) fiber += p;
  CHECK(fiber > 0);

  rve_mesh* bad = nullptr;
  CHECK(rve_mesh_rasterize(m, 0.3, &bad) == RVE_ERR_NONCONFORMING_MESH);

  rve_mesh_free(mesh);
  rve_microstructure_free(m);
}

TEST_CASE("solve, trace access, crack width and outputs") {
  rve_microstructure* m = nullptr;
  REQUIRE(rve_microstructure_generate(4, 0.25, 1.0, 1.0, 3, 100000, &m) == RVE_OK);
  rve_solution* sol = nullptr;
  REQUIRE(rve_solve(m, kTinyConfig, &sol) == RVE_OK);
  REQUIRE(rve_solution_increment_count(sol) == 40);

  double row[10] = {0};
  REQUIRE(rve_solution_trace_row(sol, 40, row) == RVE_OK);
  CHECK(row[0] == doctest::Approx(0.3));
  CHECK(row[8] > 0); // damaged elements at the end

  int32_t width = 0;
  const rve_status wst = rve_solution_crack_band_width(sol, 0.99, &width);
  if (wst == RVE_OK) CHECK(width >= 1);
  else CHECK(wst == RVE_ERR_NO_CRACK);

  const char* out_dir = "/tmp/rvelab_capi_out";
  std::filesystem::remove_all(out_dir);
  REQUIRE(rve_solution_write_outputs(sol, out_dir) == RVE_OK);
  CHECK(std::filesystem::exists(std::string(out_dir) + "/trace.csv"));
  CHECK(std::filesystem::exists(std::string(out_dir) + "/curve.csv"));
  CHECK(std::filesystem::exists(std::string(out_dir) + "/metrics.json"));
  CHECK(std::filesystem::exists(std::string(out_dir) + "/manifest.json"));

  rve_solution_free(sol);
  rve_microstructure_free(m);
}

TEST_CASE("bad config json is an io error") {
  rve_microstructure* m = nullptr;
  REQUIRE(rve_microstructure_generate(3, 0.2, 1.0, 1.0, 5, 100000, &m) == RVE_OK);
  rve_solution* sol = nullptr;
  CHECK(rve_solve(m, "{ not json", &sol) == RVE_ERR_IO);
  rve_microstructure_free(m);
}

TEST_CASE("analysis entry points") {
  double c = 0.0;
  REQUIRE(rve_c_theta(6.882, 5.829, 6.947, 5.960, &c) == RVE_OK);
  CHECK(c == doctest::Approx(11.717).epsilon(1e-3));
  CHECK(rve_c_theta(1.0, 2.0, 2.0, 3.0, &c) == RVE_ERR_DEGENERATE_DENOMINATOR);

  double sigma = 0.0;
  REQUIRE(rve_rod_stress_analytic(0.125, 1.0, 0.01, 1.0, 0.125 / 1.375, 0.125, &sigma) == RVE_OK);
  CHECK(sigma == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(rve_rod_stress_analytic(0.2, 1.0, 0.5, 1.0, 0.125 / 1.375, 0.125, &sigma) ==
        RVE_ERR_INADMISSIBLE_LOCALIZATION);

  // Two synthetic softening curves on disk.
  for (int k = 0; k < 2; ++k) {
    std::ofstream os("/tmp/rvelab_capi_curve" + std::to_string(k) + ".csv");
    os << "d,F\n";
    const double m = k == 0 ? 0.3 : 0.1;
    for (double d = 0.01; d <= 6.0; d += 0.01)
      os << d << "," << (d <= 0.9 ? 2.0 * d : std::max(0.0, 1.8 - m * (d - 0.9))) << "\n";
  }
  const char* paths[2] = {"/tmp/rvelab_capi_curve0.csv", "/tmp/rvelab_capi_curve1.csv"};
  double sd = -1.0;
  int32_t excluded = -1;
  REQUIRE(rve_dispersion_sd_files(paths, 2, 0.25, &sd, &excluded) == RVE_OK);
  CHECK(sd > 0.0);
  CHECK(excluded == 0);
}

TEST_CASE("sweep partial failure surfaces as its status code") {
  const char* plan_path = "/tmp/rvelab_capi_plan.json";
  {
    std::ofstream os(plan_path);
    os << R"json({
      "seed_base": 5,
      "entries": [{
        "label": "jam",
        "generator": {"kind": "rsa", "n_fibers": 50, "vf": 0.7, "max_attempts": 300},
        "n_samples": 1,
        "solve": {
          "h": 0.1,
          "materials": {
            "matrix": {"E": 1.0, "nu": 0.35, "eps0": 0.125, "epsf": 1.5, "damageable": true},
            "fiber": {"E": 20.0, "nu": 0.2, "damageable": false}
          },
          "load": {"mode": "axial_xx", "u_total": 0.1, "n_increments": 2}
        }
      }]
    })json";
  }
  std::filesystem::remove_all("/tmp/rvelab_capi_sweep");
  CHECK(rve_sweep_run(plan_path, "/tmp/rvelab_capi_sweep", 1) == RVE_ERR_PARTIAL_FAILURE);
}
