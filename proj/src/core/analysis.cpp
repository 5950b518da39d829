#include "core/analysis.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "core/errors.hpp"
#include "core/meshing.hpp"
#include "rvelab_version.hpp"

namespace rvelab {

using nlohmann::json;

DispersionResult dispersion_sd(const std::vector<FdCurve>& curves, double slope_fraction) {
  if (curves.size() < 2) throw InvalidSpecError("dispersion_sd needs at least two curves");
  if (!(slope_fraction > 0.0) || !(slope_fraction < 1.0))
    throw InvalidSpecError("dispersion_sd: slope_fraction must lie in (0, 1)");

  // Average elastic slope over the ensemble; each curve contributes its own
  // pre-initiation fit. Initiation is read off the curve as the first
  // departure from proportionality when no trace data is available, so the
  // convention here is the first force sample below 99.9% of the elastic
  // prediction.
  double slope_sum = 0.0;
  std::vector<std::size_t> init_index(curves.size(), 0);
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const FdCurve& cv = curves[c];
    if (cv.d.size() < 2) throw InvalidSpecError("dispersion_sd: degenerate curve");
    const double s0 = cv.F[0] / cv.d[0];
    std::size_t k = cv.d.size() - 1;
    for (std::size_t i = 0; i < cv.d.size(); ++i) {
      if (cv.F[i] < 0.999 * s0 * cv.d[i]) {
        k = i;
        break;
      }
    }
    init_index[c] = k;
    FdCurve pre;
    pre.d.assign(cv.d.begin(), cv.d.begin() + static_cast<std::ptrdiff_t>(k));
    pre.F.assign(cv.F.begin(), cv.F.begin() + static_cast<std::ptrdiff_t>(k));
    if (pre.d.empty()) {
      pre.d.push_back(cv.d[0]);
      pre.F.push_back(cv.F[0]);
    }
    slope_sum += elastic_slope(pre, std::nullopt);
  }
  const double ray_slope = slope_fraction * (slope_sum / static_cast<double>(curves.size()));

  DispersionResult out;
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const FdCurve& cv = curves[c];
    bool found = false;
    for (std::size_t i = std::max<std::size_t>(init_index[c], 1); i < cv.d.size(); ++i) {
      const double g_prev = cv.F[i - 1] - ray_slope * cv.d[i - 1];
      const double g_cur = cv.F[i] - ray_slope * cv.d[i];
      if (g_prev > 0.0 && g_cur <= 0.0) {
        const double t = g_prev / (g_prev - g_cur);
        out.intersections.push_back(cv.d[i - 1] + t * (cv.d[i] - cv.d[i - 1]));
        found = true;
        break;
      }
    }
    if (!found) ++out.n_excluded;
  }
  if (out.intersections.empty())
    throw NoIntersectionError("dispersion_sd: the ray crosses none of the curves");

  double mu = 0.0;
  for (double x : out.intersections) mu += x;
  mu /= static_cast<double>(out.intersections.size());
  double ss = 0.0;
  for (double x : out.intersections) ss += (x - mu) * (x - mu);
  out.sd = std::sqrt(ss / static_cast<double>(out.intersections.size()));
  return out;
}

double c_theta(double eps0_ref, double eps0_d_only, double eps0_theta_only, double eps0_both) {
  (void)eps0_ref; // the mixing relation cancels the reference value
  const double den = eps0_theta_only - eps0_d_only;
  const double scale = std::max({std::abs(eps0_d_only), std::abs(eps0_theta_only), 1e-300});
  if (std::abs(den) <= 1e-12 * scale)
    throw DegenerateDenominatorError("c_theta undefined: single-factor strains coincide");
  return 100.0 * (eps0_both - eps0_d_only) / den;
}

ContributionTable build_contribution_table(const std::vector<double>& theta_changes,
                                           const std::vector<double>& dmin_changes_over_r,
                                           const std::vector<std::vector<double>>& eps0) {
  if (eps0.size() != theta_changes.size())
    throw InvalidSpecError("contribution table: row count mismatch");
  ContributionTable t;
  t.theta_changes = theta_changes;
  t.dmin_changes_over_r = dmin_changes_over_r;
  t.eps0_ref = eps0.at(0).at(0);
  t.c.resize(theta_changes.size());
  for (std::size_t row = 0; row < theta_changes.size(); ++row) {
    if (eps0[row].size() != dmin_changes_over_r.size())
      throw InvalidSpecError("contribution table: column count mismatch");
    t.c[row].resize(dmin_changes_over_r.size());
    for (std::size_t col = 0; col < dmin_changes_over_r.size(); ++col) {
      const double theta_only = eps0[row][0];
      const double d_only = eps0[0][col];
      const double both = eps0[row][col];
      try {
        t.c[row][col] = c_theta(t.eps0_ref, d_only, theta_only, both);
      } catch (const DegenerateDenominatorError&) {
        t.c[row][col] = std::nullopt;
      }
    }
  }
  return t;
}

EnsembleResult make_ensemble(std::vector<FdCurve> curves) {
  if (curves.empty()) throw InvalidSpecError("ensemble needs at least one curve");
  EnsembleResult out;
  out.mean_curve.meta = curves.front().meta;
  const std::size_t n = curves.front().d.size();
  for (const auto& c : curves)
    if (c.d.size() != n)
      throw InvalidSpecError("ensemble: member curves sample different increments");
  out.mean_curve.d = curves.front().d;
  out.mean_curve.F.assign(n, 0.0);
  for (const auto& c : curves)
    for (std::size_t i = 0; i < n; ++i) out.mean_curve.F[i] += c.F[i];
  for (auto& f : out.mean_curve.F) f /= static_cast<double>(curves.size());

  if (curves.size() >= 2) {
    for (double frac : {0.25, 0.50, 0.75}) {
      try {
        const DispersionResult r = dispersion_sd(curves, frac);
        out.sd_at[frac] = r.sd;
        out.excluded_at[frac] = r.n_excluded;
      } catch (const NoIntersectionError&) {
        out.excluded_at[frac] = static_cast<int>(curves.size());
      }
    }
  }
  out.curves = std::move(curves);
  return out;
}

namespace {

struct SampleTask {
  std::size_t entry = 0;
  int sample = 0;
};

SampleRecord run_sample(const SweepEntry& entry, std::uint64_t seed, int index,
                        const std::string& dir, FdCurve& curve_out) {
  SampleRecord rec;
  rec.index = index;
  rec.seed = seed;
  try {
    const Microstructure micro = entry.generator.generate(seed);
    const Mesh mesh = rasterize(micro, entry.solve.h);
    const ConstraintSet cs = entry.solve.build_constraints(mesh);
    const PhaseMaterials mats = entry.solve.regularized_materials();
    const SolveTrace trace = solve_quasistatic(mesh, mats, cs, entry.solve.load,
                                               entry.solve.solver);
    CurveMetadata meta;
    meta.vf = micro.target_vf;
    meta.n_fibers = micro.fiber_count();
    meta.h = entry.solve.h;
    meta.bc_type = entry.solve.bc.name();
    meta.seed = seed;
    const FdCurve curve = curve_from_trace(trace, meta);
    rec.metrics = curve_metrics(trace, curve, mesh.length());
    rec.ok = true;

    write_microstructure(micro, dir + "/micro.json");
    write_trace_csv(trace, dir + "/trace.csv");
    write_curve_csv(curve, dir + "/curve.csv");
    write_metrics_json(rec.metrics, meta, dir + "/metrics.json");
    for (const auto& snap : trace.snapshots)
      write_snapshot_csv(snap.field, mesh.nx, dir + "/snapshot_" + snap.tag + ".csv");
    curve_out = curve;
  } catch (const Error& e) {
    rec.error = e.what();
  }
  return rec;
}

} // namespace

SweepResult sweep_run(const SweepPlan& plan, const std::string& out_dir, int jobs_override) {
  std::filesystem::create_directories(out_dir);

  int jobs = jobs_override > 0 ? jobs_override : plan.jobs;
  if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
  if (jobs < 1) jobs = 1;

  std::vector<SampleTask> tasks;
  for (std::size_t e = 0; e < plan.entries.size(); ++e)
    for (int k = 0; k < plan.entries[e].n_samples; ++k) tasks.push_back({e, k});

  SweepResult result;
  result.entries.resize(plan.entries.size());
  std::vector<std::vector<FdCurve>> curves(plan.entries.size());
  std::vector<std::vector<SampleRecord>> records(plan.entries.size());
  for (std::size_t e = 0; e < plan.entries.size(); ++e) {
    curves[e].resize(static_cast<std::size_t>(plan.entries[e].n_samples));
    records[e].resize(static_cast<std::size_t>(plan.entries[e].n_samples));
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks.size()) return;
      const SampleTask task = tasks[t];
      const SweepEntry& entry = plan.entries[task.entry];
      const std::uint64_t seed = plan.seed_base + static_cast<std::uint64_t>(task.sample);
      const std::string dir =
          out_dir + "/" + entry.label + "/sample_" + std::to_string(task.sample);
      std::filesystem::create_directories(dir);
      records[task.entry][static_cast<std::size_t>(task.sample)] =
          run_sample(entry, seed, task.sample, dir,
                     curves[task.entry][static_cast<std::size_t>(task.sample)]);
    }
  };
  std::vector<std::thread> pool;
  const int n_workers = std::min<int>(jobs, static_cast<int>(tasks.size()));
  for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  json manifest;
  manifest["version"] = kVersion;
  manifest["seed_base"] = plan.seed_base;
  manifest["entries"] = json::array();

  for (std::size_t e = 0; e < plan.entries.size(); ++e) {
    const SweepEntry& entry = plan.entries[e];
    SweepEntryResult& er = result.entries[e];
    er.label = entry.label;
    er.samples = records[e];

    std::vector<FdCurve> ok_curves;
    json jsamples = json::array();
    for (int k = 0; k < entry.n_samples; ++k) {
      const SampleRecord& rec = records[e][static_cast<std::size_t>(k)];
      if (rec.ok) ok_curves.push_back(curves[e][static_cast<std::size_t>(k)]);
      else ++er.n_failed;
      json js;
      js["index"] = rec.index;
      js["seed"] = rec.seed;
      js["ok"] = rec.ok;
      if (!rec.ok) js["error"] = rec.error;
      jsamples.push_back(js);
    }
    result.n_failed += er.n_failed;

    json jentry;
    jentry["label"] = entry.label;
    jentry["n_samples"] = entry.n_samples;
    jentry["solve"] = json::parse(solve_config_to_json(entry.solve));
    jentry["samples"] = jsamples;

    if (!ok_curves.empty()) {
      er.ensemble = make_ensemble(std::move(ok_curves));
      write_curve_csv(er.ensemble.mean_curve, out_dir + "/" + entry.label + "/mean_curve.csv");
      json jens;
      jens["label"] = entry.label;
      jens["n_curves"] = er.ensemble.curves.size();
      jens["n_failed"] = er.n_failed;
      for (const auto& [frac, sd] : er.ensemble.sd_at)
        jens["sd"][format_g17(frac)] = sd;
      for (const auto& [frac, excl] : er.ensemble.excluded_at)
        jens["excluded"][format_g17(frac)] = excl;
      json jeps0 = json::array(), jepsf = json::array();
      for (const auto& rec : er.samples) {
        if (!rec.ok) continue;
        jeps0.push_back(rec.metrics.eps0_rve ? json(*rec.metrics.eps0_rve) : json());
        jepsf.push_back(rec.metrics.epsf_rve ? json(*rec.metrics.epsf_rve) : json());
      }
      jens["eps0_rve"] = jeps0;
      jens["epsf_rve"] = jepsf;
      write_text_file(out_dir + "/" + entry.label + "/ensemble.json", jens.dump(2) + "\n");
    }
    manifest["entries"].push_back(jentry);
  }

  write_text_file(out_dir + "/manifest.json", manifest.dump(2) + "\n");
  return result;
}

} // namespace rvelab
