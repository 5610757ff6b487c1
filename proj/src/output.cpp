#include "dtcfd/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "dtcfd/thermal.hpp"

namespace dtcfd {

namespace {

std::string num(double x) {
  char b[32];
  std::snprintf(b, sizeof b, "%.17g", x);
  return b;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double read_double(std::istream& is, const char* what) {
  std::string tok;
  if (!(is >> tok)) throw Error(std::string("VTK: unexpected end of file reading ") + what);
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw Error("");
    return v;
  } catch (const std::exception&) {
    if (tok == "nan" || tok == "-nan") return std::numeric_limits<double>::quiet_NaN();
    throw Error(std::string("VTK: malformed number '") + tok + "' in " + what);
  }
}

void expect(std::istream& is, const std::string& word) {
  std::string tok;
  if (!(is >> tok) || tok != word) throw Error("VTK: expected '" + word + "', found '" + tok + "'");
}

}  // namespace

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw Error("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

void write_vtk(const std::filesystem::path& path, const Mesh& mesh, const FieldSet& f, const std::string& title) {
  std::ostringstream os;
  const auto d = mesh.dims();
  os << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET STRUCTURED_GRID\n";
  os << "DIMENSIONS " << d[0] + 1 << " " << d[1] + 1 << " " << d[2] + 1 << "\n";
  const std::size_t np = static_cast<std::size_t>(d[0] + 1) * static_cast<std::size_t>(d[1] + 1) * static_cast<std::size_t>(d[2] + 1);
  os << "POINTS " << np << " double\n";
  for (double z : mesh.nodes(2)) {
    for (double y : mesh.nodes(1)) {
      for (double x : mesh.nodes(0)) os << num(x) << " " << num(y) << " " << num(z) << "\n";
    }
  }
  os << "CELL_DATA " << mesh.cell_count() << "\n";
  auto scalar = [&](const char* name, const std::vector<double>& v) {
    os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (double x : v) os << num(x) << "\n";
  };
  scalar("T", f.temperature.values);
  scalar("p", f.pressure.values);
  scalar("K", f.k.values);
  scalar("eps", f.epsilon.values);
  scalar("mu_t", f.mu_t.values);
  os << "VECTORS velocity double\n";
  for (const Vec3& v : f.velocity.values) os << num(v.x) << " " << num(v.y) << " " << num(v.z) << "\n";
  write_text(path, os.str());
}

VtkData read_vtk(const std::filesystem::path& path) {
  std::istringstream is(read_text(path));
  std::string line;
  std::getline(is, line);
  if (line.rfind("# vtk DataFile", 0) != 0) throw Error("VTK: missing file identifier");
  std::getline(is, line);  // title
  std::getline(is, line);
  if (line != "ASCII") throw Error("VTK: only ASCII files are supported");
  expect(is, "DATASET");
  expect(is, "STRUCTURED_GRID");
  expect(is, "DIMENSIONS");
  VtkData data;
  for (int& n : data.point_dims) {
    if (!(is >> n) || n < 1) throw Error("VTK: bad DIMENSIONS");
  }
  expect(is, "POINTS");
  std::size_t np = 0;
  std::string type;
  is >> np >> type;
  const std::size_t expected_points = static_cast<std::size_t>(data.point_dims[0]) *
                                      static_cast<std::size_t>(data.point_dims[1]) *
                                      static_cast<std::size_t>(data.point_dims[2]);
  if (np != expected_points) throw Error("VTK: POINTS count does not match DIMENSIONS");
  data.points.resize(np);
  for (auto& p : data.points) {
    p.x = read_double(is, "POINTS");
    p.y = read_double(is, "POINTS");
    p.z = read_double(is, "POINTS");
  }
  expect(is, "CELL_DATA");
  if (!(is >> data.cell_count)) throw Error("VTK: bad CELL_DATA count");
  const std::size_t expected_cells = static_cast<std::size_t>(std::max(data.point_dims[0] - 1, 1)) *
                                     static_cast<std::size_t>(std::max(data.point_dims[1] - 1, 1)) *
                                     static_cast<std::size_t>(std::max(data.point_dims[2] - 1, 1));
  if (data.cell_count != expected_cells) throw Error("VTK: CELL_DATA count does not match DIMENSIONS");
  std::string tok;
  while (is >> tok) {
    if (tok == "SCALARS") {
      std::string name;
      int components = 1;
      is >> name >> type;
      std::getline(is, line);
      std::istringstream rest(line);
      rest >> components;
      if (components != 1) throw Error("VTK: only single-component SCALARS are supported");
      expect(is, "LOOKUP_TABLE");
      is >> tok;
      auto& v = data.scalars[name];
      v.resize(data.cell_count);
      for (double& x : v) x = read_double(is, name.c_str());
    } else if (tok == "VECTORS") {
      std::string name;
      is >> name >> type;
      auto& v = data.vectors[name];
      v.resize(data.cell_count);
      for (Vec3& x : v) {
        x.x = read_double(is, name.c_str());
        x.y = read_double(is, name.c_str());
        x.z = read_double(is, name.c_str());
      }
    } else {
      throw Error("VTK: unsupported section '" + tok + "'");
    }
  }
  return data;
}

std::string residual_csv(const ResidualHistory& h) {
  std::ostringstream os;
  os << kResidualCsvHeader << "\n";
  for (std::size_t i = 0; i < h.normalized.size(); ++i) {
    os << i + 1;
    for (double r : h.normalized[i]) os << "," << num(r);
    os << "\n";
  }
  return os.str();
}

std::string monitor_csv(const ResidualHistory& h, std::size_t point_count) {
  std::ostringstream os;
  os << "iteration";
  for (std::size_t p = 0; p < point_count; ++p) os << ",probe" << p << "_T,probe" << p << "_speed";
  os << "\n";
  for (std::size_t i = 0; i < h.monitors.size(); ++i) {
    os << i + 1;
    for (const auto& s : h.monitors[i]) os << "," << num(s.temperature) << "," << num(s.speed);
    os << "\n";
  }
  return os.str();
}

std::string slice_csv(const Mesh& mesh, const FieldSet& f, int axis, double coordinate) {
  int layer = 0;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < mesh.n(axis); ++i) {
    const double dist = std::abs(mesh.center_coord(axis, i) - coordinate);
    if (dist < best) {
      best = dist;
      layer = i;
    }
  }
  std::ostringstream os;
  os << kSliceCsvHeader << "\n";
  for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
    if (mesh.ijk(c)[static_cast<std::size_t>(axis)] != layer || !mesh.is_active(c)) continue;
    const Vec3 x = mesh.center(c);
    const Vec3& v = f.velocity[c];
    os << num(x.x) << "," << num(x.y) << "," << num(x.z) << "," << num(f.temperature[c]) << "," << num(v.x) << ","
       << num(v.y) << "," << num(v.z) << "," << num(f.pressure[c]) << "," << num(f.k[c]) << "," << num(f.epsilon[c])
       << "\n";
  }
  return os.str();
}

std::string patch_csv(const Mesh& mesh, const FieldSet& f, const std::string& patch) {
  const int pi = mesh.patch_index(patch);
  if (pi < 0) throw Error("unknown patch '" + patch + "'");
  std::ostringstream os;
  os << kPatchCsvHeader << "\n";
  for (std::size_t b : mesh.patches()[static_cast<std::size_t>(pi)].faces) {
    const auto& bf = mesh.boundary_faces()[b];
    const Vec3 x = mesh.face_center(bf.cell, bf.dir);
    const Vec3& v = f.boundary.velocity[b];
    os << num(x.x) << "," << num(x.y) << "," << num(x.z) << "," << num(mesh.face_area(bf.cell, bf.dir)) << ","
       << num(f.boundary.temperature[b]) << "," << num(v.x) << "," << num(v.y) << "," << num(v.z) << ","
       << num(f.pressure[bf.cell]) << "," << num(outward_flux(mesh, f.mass_flux, bf.cell, bf.dir)) << "\n";
  }
  return os.str();
}

void write_bundle(const std::filesystem::path& dir, const std::string& config_text, const TransformerCaseParams& params,
                  const Case& c, const RunResult& run, double seconds) {
  write_text(dir / "config.cfg", config_text);
  write_vtk(dir / "fields.vtk", c.mesh, run.fields, "dtcfd " + c.name);
  write_text(dir / "residuals.csv", residual_csv(run.history));
  write_text(dir / "monitors.csv", monitor_csv(run.history, c.monitor_points.size()));
  write_text(dir / "slice_symmetry.csv", slice_csv(c.mesh, run.fields, 0, 0.0));
  for (const auto& p : c.mesh.patches()) {
    if (p.faces.empty()) continue;
    write_text(dir / ("patch_" + p.name + ".csv"), patch_csv(c.mesh, run.fields, p.name));
  }

  const TransformerMetrics m = transformer_metrics(c, params, run.fields);
  const EnergyAudit audit = global_energy_audit(c.mesh, c.bcs, run.fields, c.fluid, c.solids, c.turbulence);
  nlohmann::ordered_json j;
  j["name"] = c.name;
  j["status"] = to_string(run.status);
  j["message"] = run.message;
  j["iterations"] = run.iterations;
  j["seconds"] = seconds;
  j["cells"] = c.mesh.dims();
  j["fan_count"] = params.fan_count;
  j["flow_mode"] = to_string(params.flow_mode);
  j["total_flow_m3_s"] = m.total_flow;
  j["heat_load_W"] = m.heat_load;
  j["mean_outlet_temperature_K"] = m.mean_outlet_temperature;
  j["peak_winding_temperature_K"] = m.peak_winding_temperature;
  j["peak_solid_temperature_K"] = m.peak_solid_temperature;
  j["mean_channel_velocity_m_s"] = m.mean_channel_velocity;
  j["plenum_mean_temperature_K"] = m.plenum_mean_temperature;
  j["plenum_temperature_spread_K"] = m.plenum_temperature_spread;
  j["mid_plane_channel_fraction"] = m.mid_plane_channel_fraction;
  j["channel_area_m2"] = m.channel_area;
  j["outlet_patches"] = m.outlet_patches;
  j["max_mass_imbalance_kg_s"] = run.max_mass_imbalance;
  j["energy_imbalance_relative"] = audit.relative;
  j["low_y_plus_faces"] = run.wall.low_y_plus;
  if (!run.history.normalized.empty()) {
    nlohmann::ordered_json res;
    for (std::size_t e = 0; e < kEquationCount; ++e) res[kEquationNames[e]] = run.history.normalized.back()[e];
    j["final_residuals"] = res;
  }
  write_text(dir / "summary.json", j.dump(2) + "\n");
}

FanRunSummary read_bundle_summary(const std::filesystem::path& dir) {
  const auto path = dir / "summary.json";
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error("malformed '" + path.string() + "': " + e.what());
  }
  try {
    FanRunSummary s;
    s.label = dir.filename().empty() ? dir.parent_path().filename().string() : dir.filename().string();
    s.fan_count = j.at("fan_count").get<int>();
    s.flow_mode = j.at("flow_mode").get<std::string>() == "total" ? FlowMode::Total : FlowMode::PerFan;
    s.total_flow = j.at("total_flow_m3_s").get<double>();
    const auto status = j.at("status").get<std::string>();
    s.status = status == to_string(RunStatus::Converged)  ? RunStatus::Converged
               : status == to_string(RunStatus::Diverged) ? RunStatus::Diverged
                                                           : RunStatus::MaxIterations;
    s.iterations = j.at("iterations").get<int>();
    s.cells = j.at("cells").get<std::array<int, 3>>();
    s.heat_load = j.at("heat_load_W").get<double>();
    s.mean_outlet_temperature = j.at("mean_outlet_temperature_K").get<double>();
    s.peak_winding_temperature = j.at("peak_winding_temperature_K").get<double>();
    s.peak_solid_temperature = j.at("peak_solid_temperature_K").get<double>();
    s.mean_channel_velocity = j.at("mean_channel_velocity_m_s").get<double>();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error("incomplete '" + path.string() + "': " + e.what());
  }
}

}  // namespace dtcfd
