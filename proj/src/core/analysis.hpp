#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/homogenize.hpp"
#include "core/io.hpp"

namespace rvelab {

struct DispersionResult {
  double sd = 0.0;
  int n_excluded = 0;                 // curves the ray never crossed
  std::vector<double> intersections;  // one per included curve
};

// Post-damage dispersion of an ensemble: a ray with `slope_fraction` of the
// average elastic slope cuts each curve past damage initiation; the
// population standard deviation of the intersection displacements is the
// dispersion measure.
DispersionResult dispersion_sd(const std::vector<FdCurve>& curves, double slope_fraction);

// Percentage of a damage-initiation-strain change attributed to the angle
// change, solved from the linear mixing relation between the single-factor
// strains and the combined one.
double c_theta(double eps0_ref, double eps0_d_only, double eps0_theta_only, double eps0_both);

struct ContributionTable {
  double eps0_ref = 0.0;
  std::vector<double> theta_changes;           // row labels
  std::vector<double> dmin_changes_over_r;     // column labels
  // c[row][col]; empty optional marks a degenerate cell.
  std::vector<std::vector<std::optional<double>>> c;
};

// eps0[row][col] indexed like the table; reference sits at (0, 0).
ContributionTable build_contribution_table(const std::vector<double>& theta_changes,
                                           const std::vector<double>& dmin_changes_over_r,
                                           const std::vector<std::vector<double>>& eps0);

struct EnsembleResult {
  std::vector<FdCurve> curves;
  FdCurve mean_curve;
  std::map<double, double> sd_at;   // slope fraction -> SD
  std::map<double, int> excluded_at;
};

// Pointwise mean curve plus dispersion at slope fractions 0.25/0.50/0.75.
// With fewer than two curves the SD map stays empty.
EnsembleResult make_ensemble(std::vector<FdCurve> curves);

struct SampleRecord {
  int index = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  CurveMetrics metrics;
};

struct SweepEntryResult {
  std::string label;
  std::vector<SampleRecord> samples;
  EnsembleResult ensemble;
  int n_failed = 0;
};

struct SweepResult {
  std::vector<SweepEntryResult> entries;
  int n_failed = 0;
};

// Runs generate -> rasterize -> solve -> metrics for every sample of every
// entry (sample k uses seed_base + k), in parallel across samples, and
// writes all artifacts plus a manifest under out_dir. Failed samples are
// recorded, not fatal.
SweepResult sweep_run(const SweepPlan& plan, const std::string& out_dir, int jobs_override = 0);

} // namespace rvelab
