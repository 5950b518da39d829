#pragma once

#include <string>

#include "core/homogenize.hpp"
#include "core/microstructure.hpp"
#include "core/solver.hpp"

namespace rvelab {

enum class RegularizationMode { None, Brekelmans, Sqrt };

struct RegularizationConfig {
  RegularizationMode mode = RegularizationMode::None;
  double lambda = 0.0;
};

enum class BcType { Dpbc, Mpbc };

struct BcConfig {
  BcType type = BcType::Dpbc;
  int band_width = 1;
  bool antisymmetric_ties = false;

  std::string name() const { return type == BcType::Dpbc ? "dpbc" : "mpbc"; }
};

// Everything one solve needs besides the microstructure.
struct SolveConfig {
  double h = 0.0;
  PhaseMaterials materials;
  RegularizationConfig regularization;
  BcConfig bc;
  LoadProgram load;
  SolveOptions solver;

  void validate() const;
  PhaseMaterials regularized_materials() const;
  ConstraintSet build_constraints(const Mesh& mesh) const;
};

struct GeneratorConfig {
  enum class Kind { Rsa, RegularGrid } kind = Kind::Rsa;
  // rsa
  int n_fibers = 0;
  double vf = 0.0;
  long max_attempts = 100000;
  // regular grid
  int rows = 0;
  int cols = 0;
  double r = 0.0;
  std::optional<double> pair_gap;
  // shared
  double l = 1.0;
  double b = 1.0;

  Microstructure generate(std::uint64_t seed) const;
};

struct SweepEntry {
  std::string label;
  GeneratorConfig generator;
  int n_samples = 1;
  SolveConfig solve;
};

struct SweepPlan {
  std::uint64_t seed_base = 1;
  int jobs = 0; // 0: hardware concurrency
  std::vector<SweepEntry> entries;
};

std::string format_g17(double v);

// Canonical microstructure file: JSON with 17-significant-digit decimals.
std::string microstructure_to_json(const Microstructure& m);
Microstructure microstructure_from_json(const std::string& text);
void write_microstructure(const Microstructure& m, const std::string& path);
Microstructure read_microstructure(const std::string& path);

void write_trace_csv(const SolveTrace& trace, const std::string& path);
void write_snapshot_csv(const std::vector<double>& field, int nx, const std::string& path);
void write_phase_csv(const Mesh& mesh, const std::string& path);
void write_curve_csv(const FdCurve& curve, const std::string& path);
FdCurve read_curve_csv(const std::string& path);
std::string metrics_to_json(const CurveMetrics& metrics, const CurveMetadata& meta);
void write_metrics_json(const CurveMetrics& metrics, const CurveMetadata& meta,
                        const std::string& path);

SolveConfig parse_solve_config(const std::string& json_text);
SolveConfig read_solve_config(const std::string& path);
SweepPlan parse_sweep_plan(const std::string& json_text);
SweepPlan read_sweep_plan(const std::string& path);
std::string solve_config_to_json(const SolveConfig& cfg);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

} // namespace rvelab
