// End-to-end checks of the command-line tool. The binary path arrives as
// the first non-doctest argument.
#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string g_cli;

int run(const std::string& args) {
  const std::string cmd = g_cli + " " + args + " > /tmp/rvelab_cli_stdout.txt 2>&1";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  os << text;
}

const char* kConfig = R"json({
  "h": 0.1,
  "materials": {
    "matrix": {"E": 1.0, "nu": 0.35, "eps0": 0.125, "epsf": 1.5, "damageable": true},
    "fiber": {"E": 20.0, "nu": 0.2, "damageable": false}
  },
  "load": {"mode": "axial_xx", "u_total": 0.3, "n_increments": 30}
})json";

} // namespace

TEST_CASE("gen is deterministic and reports jamming with exit 2") {
  CHECK(run("gen --n 8 --vf 0.3 --seed 11 --out /tmp/rvelab_cli_a.json") == 0);
  CHECK(run("gen --n 8 --vf 0.3 --seed 11 --out /tmp/rvelab_cli_b.json") == 0);
  CHECK(slurp("/tmp/rvelab_cli_a.json") == slurp("/tmp/rvelab_cli_b.json"));

  CHECK(run("gen --n 50 --vf 0.7 --seed 1 --max-attempts 300 --out /tmp/rvelab_cli_jam.json") ==
        2);
}

TEST_CASE("mesh writes the phase raster") {
  REQUIRE(run("gen --n 6 --vf 0.25 --seed 4 --out /tmp/rvelab_cli_m.json") == 0);
  CHECK(run("mesh --micro /tmp/rvelab_cli_m.json --h 0.05 --out /tmp/rvelab_cli_phases.csv") == 0);
  const std::string csv = slurp("/tmp/rvelab_cli_phases.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 20);
  CHECK(run("mesh --micro /tmp/rvelab_cli_m.json --h 0.3 --out /tmp/x.csv") == 1);
}

TEST_CASE("solve produces the documented artifacts and reruns bitwise-identically") {
  write_file("/tmp/rvelab_cli_config.json", kConfig);
  REQUIRE(run("gen --n 4 --vf 0.25 --seed 9 --out /tmp/rvelab_cli_s.json") == 0);
  std::filesystem::remove_all("/tmp/rvelab_cli_out1");
  std::filesystem::remove_all("/tmp/rvelab_cli_out2");
  REQUIRE(run("solve --micro /tmp/rvelab_cli_s.json --config /tmp/rvelab_cli_config.json "
              "--out /tmp/rvelab_cli_out1") == 0);
  REQUIRE(run("solve --micro /tmp/rvelab_cli_s.json --config /tmp/rvelab_cli_config.json "
              "--out /tmp/rvelab_cli_out2") == 0);
  for (const char* rel : {"trace.csv", "curve.csv", "metrics.json"})
    CHECK(slurp(std::string("/tmp/rvelab_cli_out1/") + rel) ==
          slurp(std::string("/tmp/rvelab_cli_out2/") + rel));
  CHECK(std::filesystem::exists("/tmp/rvelab_cli_out1/manifest.json"));
  CHECK(std::filesystem::exists("/tmp/rvelab_cli_out1/snapshot_final.csv"));
}

TEST_CASE("solver failures exit with code 3") {
  write_file("/tmp/rvelab_cli_badcfg.json",
             R"json({"h": 0.3,
               "materials": {"matrix": {"E": 1.0, "nu": 0.35, "eps0": 0.125, "epsf": 1.5,
                                         "damageable": true},
                             "fiber": {"E": 20.0, "nu": 0.2, "damageable": false}},
               "load": {"mode": "axial_xx", "u_total": 0.3, "n_increments": 5}})json");
  CHECK(run("solve --micro /tmp/rvelab_cli_s.json --config /tmp/rvelab_cli_badcfg.json "
            "--out /tmp/rvelab_cli_out3") == 3);
}

TEST_CASE("sweep partial failure exits with code 4") {
  write_file("/tmp/rvelab_cli_plan.json", R"json({
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
  })json");
  std::filesystem::remove_all("/tmp/rvelab_cli_sweep");
  CHECK(run("sweep --plan /tmp/rvelab_cli_plan.json --out /tmp/rvelab_cli_sweep") == 4);
  CHECK(std::filesystem::exists("/tmp/rvelab_cli_sweep/manifest.json"));
}

TEST_CASE("analysis and rod-oracle subcommands") {
  CHECK(run("analyze c-theta --ref 6.882 --d-only 5.829 --theta-only 6.947 --both 5.960") == 0);
  const std::string out = slurp("/tmp/rvelab_cli_stdout.txt");
  CHECK(out.find("c_theta=11.71") != std::string::npos);

  CHECK(run("rod-oracle --L 1 --lambda 0.01 --E 1 --H 0.0909090909 --eps0 0.125 --u 0.125") == 0);
  CHECK(slurp("/tmp/rvelab_cli_stdout.txt").find("0.125") != std::string::npos);

  CHECK(run("analyze c-theta --ref 1 --d-only 2 --theta-only 2 --both 3") == 1);
}

int main(int argc, char** argv) {
  doctest::Context ctx;
  ctx.applyCommandLine(argc > 1 ? 1 : argc, argv);
  if (argc > 1) g_cli = argv[argc - 1];
  if (g_cli.empty()) {
    std::fprintf(stderr, "usage: test_cli <path-to-rvelab-binary>\n");
    return 1;
  }
  return ctx.run();
}
