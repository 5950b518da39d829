#include "core/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "core/errors.hpp"

namespace rvelab {

using nlohmann::json;

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void SolveConfig::validate() const {
  if (!(h > 0.0)) throw InvalidSpecError("config: mesh size h must be positive");
  materials.matrix.validate();
  materials.fiber.validate();
  if (regularization.mode != RegularizationMode::None && !(regularization.lambda > 0.0))
    throw InvalidSpecError("config: regularization lambda must be positive");
  load.validate();
  if (solver.staggered_passes < 1)
    throw InvalidSpecError("config: staggered_passes must be >= 1");
  if (bc.type == BcType::Mpbc && bc.band_width < 1)
    throw InvalidSpecError("config: mpbc band width must be >= 1");
}

PhaseMaterials SolveConfig::regularized_materials() const {
  PhaseMaterials m = materials;
  auto apply = [&](PhaseMaterial& p) {
    if (!p.damageable) return;
    switch (regularization.mode) {
      case RegularizationMode::None: break;
      case RegularizationMode::Brekelmans:
        p.epsf = regularize_brekelmans(p.epsf, regularization.lambda, h);
        break;
      case RegularizationMode::Sqrt:
        p.epsf = regularize_sqrt(p.epsf, regularization.lambda, h);
        break;
    }
  };
  apply(m.matrix);
  apply(m.fiber);
  return m;
}

ConstraintSet SolveConfig::build_constraints(const Mesh& mesh) const {
  if (bc.type == BcType::Dpbc) return build_dpbc(mesh, load);
  return build_mpbc(mesh, bc.band_width, load, bc.antisymmetric_ties);
}

Microstructure GeneratorConfig::generate(std::uint64_t seed) const {
  if (kind == Kind::Rsa) return generate_rsa(n_fibers, vf, l, b, seed, max_attempts);
  Microstructure m = regular_grid(rows, cols, r, l, b, pair_gap);
  m.seed = seed;
  return m;
}

std::string microstructure_to_json(const Microstructure& m) {
  std::ostringstream os;
  os << "{\n";
  os << "  \"domain\": [" << format_g17(m.l) << ", " << format_g17(m.b) << "],\n";
  os << "  \"target_vf\": " << format_g17(m.target_vf) << ",\n";
  os << "  \"seed\": " << m.seed << ",\n";
  os << "  \"fibers\": [\n";
  for (std::size_t i = 0; i < m.fibers.size(); ++i) {
    const auto& f = m.fibers[i];
    os << "    {\"cx\": " << format_g17(f.center.x) << ", \"cy\": " << format_g17(f.center.y)
       << ", \"r\": " << format_g17(f.radius) << ", \"ghost_of\": ";
    if (f.is_ghost()) os << f.ghost_of;
    else os << "null";
    os << "}";
    if (i + 1 < m.fibers.size()) os << ",";
    os << "\n";
  }
  os << "  ]\n}\n";
  return os.str();
}

Microstructure microstructure_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw IoError(std::string("bad microstructure JSON: ") + e.what());
  }
  Microstructure m;
  m.l = j.at("domain").at(0).get<double>();
  m.b = j.at("domain").at(1).get<double>();
  m.target_vf = j.at("target_vf").get<double>();
  m.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& jf : j.at("fibers")) {
    FiberPlacement f;
    f.center.x = jf.at("cx").get<double>();
    f.center.y = jf.at("cy").get<double>();
    f.radius = jf.at("r").get<double>();
    f.ghost_of = jf.at("ghost_of").is_null() ? -1 : jf.at("ghost_of").get<int>();
    m.fibers.push_back(f);
  }
  return m;
}

void write_text_file(const std::string& path, const std::string& text) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open for writing: " + path);
  os << text;
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open for reading: " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

void write_microstructure(const Microstructure& m, const std::string& path) {
  write_text_file(path, microstructure_to_json(m));
}

Microstructure read_microstructure(const std::string& path) {
  return microstructure_from_json(read_text_file(path));
}

void write_trace_csv(const SolveTrace& trace, const std::string& path) {
  std::ostringstream os;
  os << "increment,applied_u,reaction_sum,avg_sxx,avg_syy,avg_sxy,avg_exx,avg_eyy,avg_gxy,"
        "n_damaged,max_D\n";
  for (std::size_t i = 0; i < trace.rows.size(); ++i) {
    const auto& r = trace.rows[i];
    os << (i + 1) << "," << format_g17(r.applied_u) << "," << format_g17(r.reaction_sum) << ","
       << format_g17(r.avg_stress[0]) << "," << format_g17(r.avg_stress[1]) << ","
       << format_g17(r.avg_stress[2]) << "," << format_g17(r.avg_strain[0]) << ","
       << format_g17(r.avg_strain[1]) << "," << format_g17(r.avg_strain[2]) << ","
       << r.n_damaged << "," << format_g17(r.max_D) << "\n";
  }
  write_text_file(path, os.str());
}

void write_snapshot_csv(const std::vector<double>& field, int nx, const std::string& path) {
  if (nx < 1 || field.size() % static_cast<std::size_t>(nx) != 0)
    throw InvalidSpecError("snapshot: field does not tile nx columns");
  std::ostringstream os;
  const int ny = static_cast<int>(field.size()) / nx;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      os << format_g17(field[static_cast<std::size_t>(j) * nx + i]);
      os << (i + 1 < nx ? ',' : '\n');
    }
  }
  write_text_file(path, os.str());
}

void write_phase_csv(const Mesh& mesh, const std::string& path) {
  std::ostringstream os;
  for (int j = 0; j < mesh.ny; ++j) {
    for (int i = 0; i < mesh.nx; ++i) {
      os << (mesh.element_phase[static_cast<std::size_t>(mesh.element_index(i, j))] == Phase::Fiber
                 ? 1
                 : 0);
      os << (i + 1 < mesh.nx ? ',' : '\n');
    }
  }
  write_text_file(path, os.str());
}

void write_curve_csv(const FdCurve& curve, const std::string& path) {
  std::ostringstream os;
  os << "d,F\n";
  for (std::size_t i = 0; i < curve.d.size(); ++i)
    os << format_g17(curve.d[i]) << "," << format_g17(curve.F[i]) << "\n";
  write_text_file(path, os.str());
}

FdCurve read_curve_csv(const std::string& path) {
  std::istringstream is(read_text_file(path));
  std::string line;
  if (!std::getline(is, line)) throw IoError("empty curve file: " + path);
  FdCurve c;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw IoError("bad curve row in " + path);
    c.d.push_back(std::stod(line.substr(0, comma)));
    c.F.push_back(std::stod(line.substr(comma + 1)));
  }
  return c;
}

std::string metrics_to_json(const CurveMetrics& metrics, const CurveMetadata& meta) {
  json j;
  j["vf"] = meta.vf;
  j["n_fibers"] = meta.n_fibers;
  j["h"] = meta.h;
  j["bc_type"] = meta.bc_type;
  j["seed"] = meta.seed;
  j["eps0_rve"] = metrics.eps0_rve ? json(*metrics.eps0_rve) : json();
  j["epsf_rve"] = metrics.epsf_rve ? json(*metrics.epsf_rve) : json();
  j["never_damaged"] = !metrics.eps0_rve.has_value();
  j["never_failed"] = !metrics.epsf_rve.has_value();
  j["peak_force"] = metrics.peak_force;
  j["elastic_slope"] = metrics.elastic_slope;
  j["dissipated_energy"] = metrics.dissipated_energy;
  return j.dump(2) + "\n";
}

void write_metrics_json(const CurveMetrics& metrics, const CurveMetadata& meta,
                        const std::string& path) {
  write_text_file(path, metrics_to_json(metrics, meta));
}

namespace {

PhaseMaterial parse_material(const json& j) {
  PhaseMaterial m;
  m.E = j.at("E").get<double>();
  m.nu = j.at("nu").get<double>();
  m.eps0 = j.value("eps0", 0.0);
  m.epsf = j.value("epsf", 0.0);
  m.damageable = j.value("damageable", false);
  return m;
}

json material_to_json(const PhaseMaterial& m) {
  return json{{"E", m.E}, {"nu", m.nu}, {"eps0", m.eps0}, {"epsf", m.epsf},
              {"damageable", m.damageable}};
}

LoadProgram parse_load(const json& j) {
  LoadProgram load;
  const std::string mode = j.value("mode", "axial_xx");
  if (mode == "axial_xx") load.mode = LoadMode::AxialXX;
  else if (mode == "angled") load.mode = LoadMode::Angled;
  else throw InvalidSpecError("config: load mode must be axial_xx or angled");
  load.theta_deg = j.value("theta_deg", 0.0);
  load.total_displacement = j.at("u_total").get<double>();
  load.n_increments = j.at("n_increments").get<int>();
  return load;
}

GeneratorConfig parse_generator(const json& j) {
  GeneratorConfig g;
  const std::string kind = j.value("kind", "rsa");
  if (kind == "rsa") {
    g.kind = GeneratorConfig::Kind::Rsa;
    g.n_fibers = j.at("n_fibers").get<int>();
    g.vf = j.at("vf").get<double>();
    g.max_attempts = j.value("max_attempts", 100000L);
  } else if (kind == "regular_grid") {
    g.kind = GeneratorConfig::Kind::RegularGrid;
    g.rows = j.at("rows").get<int>();
    g.cols = j.at("cols").get<int>();
    g.r = j.at("r").get<double>();
    if (j.contains("pair_gap") && !j.at("pair_gap").is_null())
      g.pair_gap = j.at("pair_gap").get<double>();
  } else {
    throw InvalidSpecError("plan: generator kind must be rsa or regular_grid");
  }
  g.l = j.value("l", 1.0);
  g.b = j.value("b", 1.0);
  return g;
}

SolveConfig parse_solve_json(const json& j) {
  SolveConfig cfg;
  cfg.h = j.at("h").get<double>();
  cfg.materials.matrix = parse_material(j.at("materials").at("matrix"));
  cfg.materials.fiber = parse_material(j.at("materials").at("fiber"));
  if (j.contains("regularization")) {
    const auto& r = j.at("regularization");
    const std::string mode = r.value("mode", "none");
    if (mode == "none") cfg.regularization.mode = RegularizationMode::None;
    else if (mode == "brekelmans") cfg.regularization.mode = RegularizationMode::Brekelmans;
    else if (mode == "sqrt") cfg.regularization.mode = RegularizationMode::Sqrt;
    else throw InvalidSpecError("config: regularization mode must be none|brekelmans|sqrt");
    cfg.regularization.lambda = r.value("lambda", 0.0);
  }
  if (j.contains("bc")) {
    const auto& b = j.at("bc");
    const std::string type = b.value("type", "dpbc");
    if (type == "dpbc") cfg.bc.type = BcType::Dpbc;
    else if (type == "mpbc") cfg.bc.type = BcType::Mpbc;
    else throw InvalidSpecError("config: bc type must be dpbc or mpbc");
    cfg.bc.band_width = b.value("band_width", 1);
    cfg.bc.antisymmetric_ties = b.value("antisymmetric_ties", false);
  }
  cfg.load = parse_load(j.at("load"));
  if (j.contains("solver")) {
    cfg.solver.staggered_passes = j.at("solver").value("staggered_passes", 1);
    cfg.solver.staggered_tol = j.at("solver").value("staggered_tol", 0.0);
  }
  if (j.contains("snapshots")) {
    const auto& s = j.at("snapshots");
    cfg.solver.snapshots.at_first_damage = s.value("first_damage", true);
    cfg.solver.snapshots.at_peak_force = s.value("peak", true);
    cfg.solver.snapshots.at_final = s.value("final", true);
    cfg.solver.snapshots.every_fraction = s.value("every_fraction", 0.1);
  }
  cfg.validate();
  return cfg;
}

json solve_to_json(const SolveConfig& cfg) {
  json j;
  j["h"] = cfg.h;
  j["materials"] = {{"matrix", material_to_json(cfg.materials.matrix)},
                    {"fiber", material_to_json(cfg.materials.fiber)}};
  const char* reg = cfg.regularization.mode == RegularizationMode::None ? "none"
                    : cfg.regularization.mode == RegularizationMode::Brekelmans ? "brekelmans"
                                                                                : "sqrt";
  j["regularization"] = {{"mode", reg}, {"lambda", cfg.regularization.lambda}};
  j["bc"] = {{"type", cfg.bc.name()}, {"band_width", cfg.bc.band_width},
             {"antisymmetric_ties", cfg.bc.antisymmetric_ties}};
  j["load"] = {{"mode", cfg.load.mode == LoadMode::AxialXX ? "axial_xx" : "angled"},
               {"theta_deg", cfg.load.theta_deg},
               {"u_total", cfg.load.total_displacement},
               {"n_increments", cfg.load.n_increments}};
  j["solver"] = {{"staggered_passes", cfg.solver.staggered_passes},
                 {"staggered_tol", cfg.solver.staggered_tol}};
  j["snapshots"] = {{"first_damage", cfg.solver.snapshots.at_first_damage},
                    {"peak", cfg.solver.snapshots.at_peak_force},
                    {"final", cfg.solver.snapshots.at_final},
                    {"every_fraction", cfg.solver.snapshots.every_fraction}};
  return j;
}

} // namespace

SolveConfig parse_solve_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const std::exception& e) {
    throw IoError(std::string("bad solve config JSON: ") + e.what());
  }
  return parse_solve_json(j);
}

SolveConfig read_solve_config(const std::string& path) {
  return parse_solve_config(read_text_file(path));
}

std::string solve_config_to_json(const SolveConfig& cfg) { return solve_to_json(cfg).dump(2) + "\n"; }

SweepPlan parse_sweep_plan(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const std::exception& e) {
    throw IoError(std::string("bad sweep plan JSON: ") + e.what());
  }
  SweepPlan plan;
  plan.seed_base = j.value("seed_base", 1ULL);
  plan.jobs = j.value("jobs", 0);
  for (const auto& je : j.at("entries")) {
    SweepEntry e;
    e.label = je.at("label").get<std::string>();
    e.generator = parse_generator(je.at("generator"));
    e.n_samples = je.at("n_samples").get<int>();
    e.solve = parse_solve_json(je.at("solve"));
    if (e.n_samples < 1) throw InvalidSpecError("plan: n_samples must be >= 1");
    plan.entries.push_back(std::move(e));
  }
  if (plan.entries.empty()) throw InvalidSpecError("plan: no entries");
  return plan;
}

SweepPlan read_sweep_plan(const std::string& path) {
  return parse_sweep_plan(read_text_file(path));
}

} // namespace rvelab
