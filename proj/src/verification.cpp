#include "dtcfd/verification.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "dtcfd/thermal.hpp"
#include "dtcfd/transport.hpp"

namespace dtcfd {

namespace {

constexpr double kPi = std::numbers::pi;

struct IdName {
  VerificationId id;
  const char* name;
};

constexpr IdName kIdNames[] = {
    {VerificationId::MmsDiffusion, "MMS-diffusion"},
    {VerificationId::MmsAdvectionDiffusion, "MMS-advection-diffusion"},
    {VerificationId::Couette, "Couette"},
    {VerificationId::LidCavity, "LidCavity"},
    {VerificationId::HeatedCavity, "HeatedCavity"},
    {VerificationId::SealedStagnant, "SealedStagnant"},
    {VerificationId::ConductingSlab, "ConductingSlab"},
};

std::vector<BoundarySpec> specs_by_patch(const Mesh& mesh, const std::function<BoundaryKind(const std::string&)>& kind) {
  std::vector<BoundarySpec> specs;
  for (const auto& p : mesh.patches()) specs.push_back({p.name, kind(p.name)});
  return specs;
}

bool is_z_patch(const std::string& name) { return name == "zmin" || name == "zmax"; }

TurbulenceSettings laminar() {
  TurbulenceSettings t;
  t.enabled = false;
  return t;
}

double relative_error(double value, double reference) { return std::abs(value - reference) / std::abs(reference); }

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

VerificationCheck converged_check(const RunResult& r) {
  return {"converged", r.status == RunStatus::Converged ? 1.0 : 0.0, 1.0, true};
}

VerificationOutcome run_mms(VerificationId id, MmsProblem problem, const std::vector<int>& levels) {
  VerificationOutcome out{id, {}, 0, 0.0, {}};
  const MmsResult r = mms_convergence(problem, levels);
  const double required = problem == MmsProblem::Diffusion ? 1.9 : 0.9;
  out.checks.push_back({"observed order", r.min_order(), required, true});
  return out;
}

VerificationOutcome run_couette(int n, const IterationCallback& cb) {
  const Case c = couette_case(n);
  SolverControls ctl;
  ctl.max_iterations = 3000;
  ctl.targets.fill(1e-10);
  ctl.flow_solver.tolerance = 1e-8;
  ctl.pressure_solver.tolerance = 1e-8;
  const RunResult r = run_steady(c, ctl, cb);
  VerificationOutcome out{VerificationId::Couette, {}, r.iterations, 0.0, {}};
  out.checks.push_back(converged_check(r));
  out.checks.push_back({"max velocity error [m/s]", couette_max_error(c, r.fields), 1e-8, false});
  return out;
}

VerificationOutcome run_lid_cavity(int n, const IterationCallback& cb) {
  const Case c = lid_cavity_case(n, 100.0);
  SolverControls ctl;
  ctl.max_iterations = 5000;
  const RunResult r = run_steady(c, ctl, cb);
  VerificationOutcome out{VerificationId::LidCavity, {}, r.iterations, 0.0, {}};
  out.checks.push_back(converged_check(r));
  out.checks.push_back(
      {"centreline u_min rel. error", relative_error(lid_cavity_min_centerline_u(c, r.fields), kLidCavityRe100MinU), 0.05,
       false});
  out.checks.push_back({"max cell mass imbalance (rel.)",
                        r.max_mass_imbalance / mass_flux_scale(c.mesh, r.fields, c.fluid.density), 1e-8, false});
  return out;
}

VerificationOutcome run_heated_cavity(int n, const IterationCallback& cb) {
  const Case c = heated_cavity_case(n, 1e5);
  SolverControls ctl;
  ctl.max_iterations = 5000;
  const RunResult r = run_steady(c, ctl, cb);
  VerificationOutcome out{VerificationId::HeatedCavity, {}, r.iterations, 0.0, {}};
  out.checks.push_back(converged_check(r));
  const WallNusselt nu = hot_wall_nusselt(c, r.fields);
  out.checks.push_back({"mean Nu rel. error", relative_error(nu.average, kHeatedCavityRa1e5NusseltAverage), 0.05, false});
  out.checks.push_back({"max Nu rel. error", relative_error(nu.maximum, kHeatedCavityRa1e5NusseltMaximum), 0.05, false});
  return out;
}

VerificationOutcome run_sealed(int n, const IterationCallback& cb) {
  const Case c = sealed_box_case(n);
  SolverControls ctl;
  ctl.max_iterations = 1;
  ctl.final_projection = false;
  constexpr int kIterations = 50;
  FieldSet f = init_stagnant(c.mesh, c.fluid, c.initial_temperature, c.turbulence);
  for (int it = 1; it <= kIterations; ++it) {
    RunResult r = run_steady(c, ctl, std::move(f), [&](int, const Residuals& res, const FieldSet& fs) {
      if (cb) cb(it, res, fs);
    });
    f = std::move(r.fields);
  }
  double vmax = 0.0;
  for (const Vec3& v : f.velocity.values) vmax = std::max(vmax, norm(v));
  VerificationOutcome out{VerificationId::SealedStagnant, {}, kIterations, 0.0, {}};
  out.checks.push_back({"max |V| after 50 iterations [m/s]", vmax, 1e-12, false});
  return out;
}

VerificationOutcome run_slab(int n, const IterationCallback& cb) {
  constexpr double q = 1.0e5;
  constexpr double lambda = 2.0;
  constexpr double thickness = 0.1;
  constexpr double t_wall = 300.0;
  const Case c = conducting_slab_case(n, q, lambda, thickness, t_wall);
  SolverControls ctl;
  ctl.max_iterations = 200;
  ctl.targets.fill(1e-10);
  ctl.relaxation.temperature = 1.0;
  ctl.scalar_solver.tolerance = 1e-12;
  ctl.scalar_solver.max_iterations = 2000;
  const RunResult r = run_steady(c, ctl, cb);
  double peak = 0.0;
  for (double t : r.fields.temperature.values) peak = std::max(peak, t);
  VerificationOutcome out{VerificationId::ConductingSlab, {}, r.iterations, 0.0, {}};
  out.checks.push_back(converged_check(r));
  out.checks.push_back({"peak rise rel. error", relative_error(peak - t_wall, slab_peak_rise(q, lambda, thickness)), 1e-3, false});
  const EnergyAudit audit = global_energy_audit(c.mesh, c.bcs, r.fields, c.fluid, c.solids, c.turbulence);
  out.checks.push_back({"energy balance rel. error", audit.relative, 1e-3, false});
  return out;
}

}  // namespace

std::string to_string(VerificationId id) {
  for (const auto& e : kIdNames) {
    if (e.id == id) return e.name;
  }
  return "unknown";
}

std::string to_string(VerificationLevel level) { return level == VerificationLevel::Coarse ? "coarse" : "full"; }

VerificationId parse_verification_id(const std::string& name) {
  std::string known;
  for (const auto& e : kIdNames) {
    if (name == e.name) return e.id;
    known += known.empty() ? "" : ", ";
    known += e.name;
  }
  throw Error("unknown verification case '" + name + "' (known: " + known + ")");
}

VerificationLevel parse_verification_level(const std::string& name) {
  if (name == "coarse") return VerificationLevel::Coarse;
  if (name == "full") return VerificationLevel::Full;
  throw Error("unknown verification level '" + name + "' (expected coarse or full)");
}

std::vector<VerificationId> all_verification_ids() {
  std::vector<VerificationId> ids;
  for (const auto& e : kIdNames) ids.push_back(e.id);
  return ids;
}

bool VerificationOutcome::passed() const {
  if (!error.empty() || checks.empty()) return false;
  return std::all_of(checks.begin(), checks.end(), [](const VerificationCheck& c) { return c.passed(); });
}

VerificationCase build_verification_case(VerificationId id, VerificationLevel level) {
  const bool full = level == VerificationLevel::Full;
  VerificationCase vc;
  vc.id = id;
  vc.level = level;
  switch (id) {
    case VerificationId::MmsDiffusion:
      vc.description = "manufactured sin(pi x) sin(pi y), Gamma = 1, high-resolution";
      vc.grid_levels = {16, 32, 64};
      vc.run = [levels = vc.grid_levels](const IterationCallback&) {
        return run_mms(VerificationId::MmsDiffusion, MmsProblem::Diffusion, levels);
      };
      break;
    case VerificationId::MmsAdvectionDiffusion:
      vc.description = "manufactured sin(pi x) sin(pi y), Gamma = 1e-3, upwind";
      vc.grid_levels = {16, 32, 64};
      vc.run = [levels = vc.grid_levels](const IterationCallback&) {
        return run_mms(VerificationId::MmsAdvectionDiffusion, MmsProblem::AdvectionDominated, levels);
      };
      break;
    case VerificationId::Couette:
      vc.description = "plane Couette flow, laminar";
      vc.grid_levels = {full ? 32 : 16};
      vc.run = [n = vc.grid_levels[0]](const IterationCallback& cb) { return run_couette(n, cb); };
      break;
    case VerificationId::LidCavity:
      vc.description = "lid-driven cavity, Re = 100";
      vc.grid_levels = {full ? 64 : 32};
      vc.run = [n = vc.grid_levels[0]](const IterationCallback& cb) { return run_lid_cavity(n, cb); };
      break;
    case VerificationId::HeatedCavity:
      vc.description = "differentially heated cavity, Ra = 1e5, Pr = 0.71";
      vc.grid_levels = {full ? 64 : 48};
      vc.run = [n = vc.grid_levels[0]](const IterationCallback& cb) { return run_heated_cavity(n, cb); };
      break;
    case VerificationId::SealedStagnant:
      vc.description = "sealed adiabatic box at rest, k-epsilon and gravity on";
      vc.grid_levels = {full ? 16 : 8};
      vc.run = [n = vc.grid_levels[0]](const IterationCallback& cb) { return run_sealed(n, cb); };
      break;
    case VerificationId::ConductingSlab:
      vc.description = "sourced solid slab, adiabatic and fixed-temperature faces";
      vc.grid_levels = {full ? 64 : 32};
      vc.run = [n = vc.grid_levels[0]](const IterationCallback& cb) { return run_slab(n, cb); };
      break;
    default:
      throw Error("unknown verification case id");
  }
  auto inner = vc.run;
  vc.run = [inner, id](const IterationCallback& cb) {
    const auto t0 = std::chrono::steady_clock::now();
    VerificationOutcome out;
    try {
      out = inner(cb);
    } catch (const std::exception& e) {
      out = VerificationOutcome{id, {}, 0, 0.0, e.what()};
    }
    out.seconds = elapsed(t0);
    return out;
  };
  return vc;
}

std::vector<VerificationOutcome> run_verification_battery(VerificationLevel level,
                                                          const std::function<void(const VerificationOutcome&)>& on_case,
                                                          const IterationCallback& on_iteration) {
  std::vector<VerificationOutcome> outcomes;
  for (VerificationId id : all_verification_ids()) {
    outcomes.push_back(build_verification_case(id, level).run(on_iteration));
    if (on_case) on_case(outcomes.back());
  }
  return outcomes;
}

std::string format_battery_table(std::span<const VerificationOutcome> outcomes) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-24s %-34s %14s %14s %8s  %s\n", "case", "metric", "value", "limit", "time[s]",
                "result");
  os << line;
  for (const auto& o : outcomes) {
    if (!o.error.empty()) {
      std::snprintf(line, sizeof line, "%-24s %-34s %14s %14s %8.1f  FAIL\n", to_string(o.id).c_str(), "error", "-",
                    "-", o.seconds);
      os << line << "  " << o.error << "\n";
      continue;
    }
    for (const auto& c : o.checks) {
      const std::string limit = std::string(c.at_least ? ">= " : "<= ") + [&] {
        char b[32];
        std::snprintf(b, sizeof b, "%.3g", c.limit);
        return std::string(b);
      }();
      std::snprintf(line, sizeof line, "%-24s %-34s %14.6g %14s %8.1f  %s\n", to_string(o.id).c_str(), c.metric.c_str(),
                    c.value, limit.c_str(), o.seconds, c.passed() ? "PASS" : "FAIL");
      os << line;
    }
  }
  return os.str();
}

double mms_solution(const Vec3& p) { return std::sin(kPi * p.x) * std::sin(kPi * p.y); }

double MmsResult::min_order() const {
  if (order.empty()) return 0.0;
  return *std::min_element(order.begin(), order.end());
}

MmsResult mms_convergence(MmsProblem problem, std::span<const int> cells_per_axis) {
  const bool diffusion = problem == MmsProblem::Diffusion;
  const double gamma = diffusion ? 1.0 : 1e-3;
  const Vec3 u = diffusion ? Vec3{0.5, 0.25, 0.0} : Vec3{1.0, 0.5, 0.0};
  const SchemeChoice scheme{diffusion ? AdvectionScheme::HighResolution : AdvectionScheme::Upwind, Limiter::VanLeer};
  auto source = [&](const Vec3& p) {
    const double sx = std::sin(kPi * p.x), cx = std::cos(kPi * p.x);
    const double sy = std::sin(kPi * p.y), cy = std::cos(kPi * p.y);
    return u.x * kPi * cx * sy + u.y * kPi * sx * cy + gamma * 2.0 * kPi * kPi * sx * sy;
  };

  MmsResult result;
  for (int n : cells_per_axis) {
    if (n < 2) throw Error("MMS grids need at least 2 cells per axis");
    const Mesh mesh = build_mesh({uniform_nodes(0, 1, n), uniform_nodes(0, 1, n), uniform_nodes(0, 1, n)}, {});
    const CellMask mask = active_mask(mesh);
    const std::size_t nc = mesh.cell_count();

    FaceField flux = mesh.make_face_field(0.0);
    for (int a = 0; a < 2; ++a) {
      const double area = (1.0 / n) * (1.0 / n);
      for (double& f : flux.axis[static_cast<std::size_t>(a)]) f = u[a] * area;
    }
    const FaceField conductance = face_conductance(mesh, mask, std::vector<double>(nc, gamma));
    std::vector<double> src(nc);
    for (std::size_t c = 0; c < nc; ++c) src[c] = source(mesh.center(c)) * mesh.volume(c);

    std::vector<double> phi(nc, 0.0);
    std::vector<BoundaryCoeffs> edges(mask.edges.size());
    const SolveOptions options{1e-12, 0.0, 5000, SolverKind::Auto, 50};
    for (int outer = 0; outer < 200; ++outer) {
      for (std::size_t e = 0; e < edges.size(); ++e) {
        const EdgeFace& ef = mask.edges[e];
        if (axis_of(ef.dir) == 2) {
          edges[e] = BoundaryCoeffs::zero_gradient(phi[ef.cell]);
        } else {
          edges[e] = BoundaryCoeffs::dirichlet(mms_solution(mesh.face_center(ef.cell, ef.dir)),
                                               gamma * ef.area / ef.distance);
        }
      }
      TransportProblem tp;
      tp.mesh = &mesh;
      tp.mask = &mask;
      tp.phi = phi;
      tp.mass_flux = &flux;
      tp.conductance = &conductance;
      tp.edges = edges;
      tp.source = src;
      tp.scheme = scheme;
      const LinearSystem sys = assemble_advection_diffusion(tp);
      std::vector<double> next = phi;
      solve_linear(sys, next, options);
      double change = 0.0;
      double scale = 0.0;
      for (std::size_t c = 0; c < nc; ++c) {
        change = std::max(change, std::abs(next[c] - phi[c]));
        scale = std::max(scale, std::abs(next[c]));
      }
      phi = std::move(next);
      if (scheme.advection == AdvectionScheme::Upwind || change <= 1e-10 * scale) break;
    }

    double err2 = 0.0;
    double vol = 0.0;
    for (std::size_t c = 0; c < nc; ++c) {
      const double d = phi[c] - mms_solution(mesh.center(c));
      err2 += d * d * mesh.volume(c);
      vol += mesh.volume(c);
    }
    result.cells.push_back(n);
    result.l2_error.push_back(std::sqrt(err2 / vol));
  }
  for (std::size_t i = 1; i < result.cells.size(); ++i) {
    const double ratio = static_cast<double>(result.cells[i]) / result.cells[i - 1];
    result.order.push_back(std::log(result.l2_error[i - 1] / result.l2_error[i]) / std::log(ratio));
  }
  return result;
}

Case couette_case(int ny, double lid_speed) {
  const int nx = std::max(2, ny / 2);
  Mesh mesh = build_mesh({uniform_nodes(0, 1, nx), uniform_nodes(0, 1, ny), uniform_nodes(0, 1.0 / ny, 1)}, {});
  FluidProps fluid;
  fluid.density = 1.0;
  fluid.viscosity = 0.1;
  fluid.expansivity = 0.0;
  auto specs = specs_by_patch(mesh, [&](const std::string& p) -> BoundaryKind {
    if (p == "xmin") {
      VelocityInlet in;
      in.profile = [lid_speed](const Vec3& x) { return Vec3{lid_speed * x.y, 0.0, 0.0}; };
      return in;
    }
    if (p == "xmax") return OutletFlow{};
    if (p == "ymax") return Wall{{lid_speed, 0.0, 0.0}};
    if (is_z_patch(p)) return Symmetry{};
    return Wall{};
  });
  BoundaryConditions bcs(mesh, std::move(specs));
  Case c{"couette", std::move(mesh), std::move(bcs), fluid, {}, laminar(), 313.15, true, false, {}};
  return c;
}

double couette_max_error(const Case& c, const FieldSet& fields, double lid_speed) {
  double worst = 0.0;
  for (std::size_t i = 0; i < c.mesh.cell_count(); ++i) {
    const Vec3& v = fields.velocity[i];
    const double exact = lid_speed * c.mesh.center(i).y;
    worst = std::max(worst, std::abs(v.x - exact) + std::abs(v.y) + std::abs(v.z));
  }
  return worst;
}

Case lid_cavity_case(int n, double reynolds) {
  Mesh mesh = build_mesh({uniform_nodes(0, 1, n), uniform_nodes(0, 1, n), uniform_nodes(0, 1.0 / n, 1)}, {});
  FluidProps fluid;
  fluid.density = 1.0;
  fluid.viscosity = 1.0 / reynolds;
  fluid.expansivity = 0.0;
  auto specs = specs_by_patch(mesh, [](const std::string& p) -> BoundaryKind {
    if (p == "ymax") return Wall{{1.0, 0.0, 0.0}};
    if (is_z_patch(p)) return Symmetry{};
    return Wall{};
  });
  BoundaryConditions bcs(mesh, std::move(specs));
  Case c{"lid-cavity", std::move(mesh), std::move(bcs), fluid, {}, laminar(), 313.15, true, false, {}};
  return c;
}

double lid_cavity_min_centerline_u(const Case& c, const FieldSet& fields) {
  const int nx = c.mesh.n(0);
  const int ny = c.mesh.n(1);
  double umin = 0.0;
  for (int j = 0; j < ny; ++j) {
    double u = 0.0;
    if (nx % 2 == 1) {
      u = fields.velocity[c.mesh.index(nx / 2, j, 0)].x;
    } else {
      u = 0.5 * (fields.velocity[c.mesh.index(nx / 2 - 1, j, 0)].x + fields.velocity[c.mesh.index(nx / 2, j, 0)].x);
    }
    umin = std::min(umin, u);
  }
  return umin;
}

Case heated_cavity_case(int n, double rayleigh, double prandtl, double grading) {
  constexpr double t_ref = 300.0;
  Mesh mesh = build_mesh(
      {graded_nodes(0, 1, n, grading), graded_nodes(0, 1, n, grading), uniform_nodes(0, 1.0 / n, 1)}, {});
  FluidProps fluid;
  fluid.density = 1.0;
  fluid.viscosity = std::sqrt(prandtl / rayleigh);
  fluid.specific_heat = 1.0;
  fluid.conductivity = 1.0 / std::sqrt(rayleigh * prandtl);
  fluid.expansivity = 1.0;
  fluid.reference_temperature = t_ref;
  fluid.gravity = {0.0, -1.0, 0.0};
  auto specs = specs_by_patch(mesh, [](const std::string& p) -> BoundaryKind {
    if (p == "xmin") return Wall{{}, ThermalKind::FixedTemperature, 0.0, t_ref + 0.5};
    if (p == "xmax") return Wall{{}, ThermalKind::FixedTemperature, 0.0, t_ref - 0.5};
    if (is_z_patch(p)) return Symmetry{};
    return Wall{};
  });
  BoundaryConditions bcs(mesh, std::move(specs));
  return Case{"heated-cavity", std::move(mesh), std::move(bcs), fluid, {}, laminar(), t_ref, true, true, {}};
}

WallNusselt hot_wall_nusselt(const Case& c, const FieldSet& fields) {
  const auto& spec = c.bcs.for_patch(c.mesh.patch_index("xmin"));
  const double t_hot = std::get<Wall>(spec.kind).temperature;
  const auto& cold = std::get<Wall>(c.bcs.for_patch(c.mesh.patch_index("xmax")).kind);
  const double dt = t_hot - cold.temperature;
  const Box b = c.mesh.bounds();
  const double length = b.hi.x - b.lo.x;
  WallNusselt nu;
  double area = 0.0;
  for (int j = 0; j < c.mesh.n(1); ++j) {
    const std::size_t cell = c.mesh.index(0, j, 0);
    const double local = (t_hot - fields.temperature[cell]) / c.mesh.half_width(cell, Dir::XMinus) * length / dt;
    const double h = c.mesh.width(1, j);
    nu.average += local * h;
    area += h;
    nu.maximum = std::max(nu.maximum, local);
  }
  nu.average /= area;
  return nu;
}

Case sealed_box_case(int n) {
  const Box block{{0.375, 0.375, 0.375}, {0.625, 0.625, 0.625}};
  const RegionBox regions[] = {{block, CellTag::solid(0)}};
  Mesh mesh = build_mesh({uniform_nodes(0, 1, n), uniform_nodes(0, 1, n), uniform_nodes(0, 1, n)}, regions);
  FluidProps fluid;
  auto specs = specs_by_patch(mesh, [](const std::string&) -> BoundaryKind { return Wall{}; });
  BoundaryConditions bcs(mesh, std::move(specs));
  SolidProps solid;
  solid.region = 0;
  solid.name = "block";
  solid.conductivity_axial = 20.0;
  solid.conductivity_radial = 2.0;
  Case c{"sealed-box", std::move(mesh), std::move(bcs), fluid, {solid}, TurbulenceSettings{}, fluid.reference_temperature,
         true, true, {}};
  return c;
}

Case conducting_slab_case(int n, double source, double conductivity, double thickness, double wall_temperature) {
  const double span = thickness / n;
  const RegionBox regions[] = {{{{0, 0, 0}, {thickness, span, span}}, CellTag::solid(0)}};
  Mesh mesh = build_mesh({uniform_nodes(0, thickness, n), uniform_nodes(0, span, 1), uniform_nodes(0, span, 1)}, regions);
  auto specs = specs_by_patch(mesh, [&](const std::string& p) -> BoundaryKind {
    if (p == "xmax") return Wall{{}, ThermalKind::FixedTemperature, 0.0, wall_temperature};
    return Wall{};
  });
  BoundaryConditions bcs(mesh, std::move(specs));
  SolidProps solid;
  solid.region = 0;
  solid.name = "slab";
  solid.conductivity_axial = conductivity;
  solid.conductivity_radial = conductivity;
  solid.axial_axis = 0;
  solid.heat_source = source;
  FluidProps fluid;
  Case c{"conducting-slab", std::move(mesh), std::move(bcs), fluid, {solid}, laminar(), wall_temperature, false, true, {}};
  return c;
}

double slab_peak_rise(double source, double conductivity, double thickness) {
  return source * thickness * thickness / (2.0 * conductivity);
}

}  // namespace dtcfd
