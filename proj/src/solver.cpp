#include "dtcfd/solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "dtcfd/gradient.hpp"
#include "dtcfd/momentum.hpp"

namespace dtcfd {

namespace {

constexpr int kNormalizationIterations = 5;
constexpr int kFinalProjectionPasses = 5;

/// Replaces a face flux field that violates continuity (typically the stagnant start) by the
/// nearest potential flow carrying the same boundary fluxes, and sets cell velocities from it.
void project_initial_flux(const Mesh& mesh, const CellMask& mask, FieldSet& f, double rho,
                          const SolveOptions& options) {
  double boundary = 0.0;
  for (const auto& bf : mesh.boundary_faces()) boundary += std::abs(outward_flux(mesh, f.mass_flux, bf.cell, bf.dir));
  double worst = 0.0;
  for (double v : mass_imbalance(mesh, mask, f.mass_flux)) worst = std::max(worst, std::abs(v));
  if (!(worst > 1e-10 * boundary)) return;

  std::array<std::vector<double>, 3> mobility;
  for (auto& m : mobility) {
    m.assign(mesh.cell_count(), 0.0);
    for (std::size_t c = 0; c < mesh.cell_count(); ++c) m[c] = mesh.volume(c);
  }
  SolveOptions tight = options;
  tight.tolerance = 1e-10;
  tight.max_iterations = std::max(tight.max_iterations, 5000);
  pressure_correction(mesh, mask, f, mobility, rho, 1.0, tight, false);
  for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
    if (!mask[c]) continue;
    for (int a = 0; a < 3; ++a) {
      const auto minus = static_cast<Dir>(2 * a);
      const auto plus = static_cast<Dir>(2 * a + 1);
      const double lo = f.mass_flux.at(a, mesh.face_index(c, minus));
      const double hi = f.mass_flux.at(a, mesh.face_index(c, plus));
      f.velocity[c][a] = 0.5 * (lo + hi) / (rho * mesh.face_area(c, plus));
    }
  }
}

}  // namespace

void SolverControls::validate() const {
  if (max_iterations < 1) throw Error("max_iterations must be >= 1");
  for (double t : targets) {
    if (!(t > 0.0)) throw Error("residual targets must be > 0");
  }
  for (double r : {relaxation.momentum, relaxation.pressure, relaxation.temperature, relaxation.k,
                   relaxation.epsilon}) {
    if (!(r > 0.0 && r <= 1.0)) throw Error("relaxation factors must lie in (0, 1]");
  }
  if (divergence_window < 1) throw Error("divergence window must be >= 1");
  if (!(divergence_factor > 1.0)) throw Error("divergence factor must be > 1");
  if (!(pseudo_time_step >= 0.0)) throw Error("pseudo time step must be >= 0");
}

Residuals ResidualNormalizer::normalize(int iteration, const Residuals& raw) {
  Residuals out{};
  for (std::size_t e = 0; e < kEquationCount; ++e) {
    if (iteration <= fix_after_ || scale_[e] == 0.0) scale_[e] = std::max(scale_[e], raw[e]);
    out[e] = scale_[e] > 0.0 ? raw[e] / scale_[e] : 0.0;
  }
  return out;
}

double normalized_residual(const LinearSystem& system, std::span<const double> x, double normalization) {
  return normalization > 0.0 ? system.residual_l1(x) / normalization : 0.0;
}

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Converged:
      return "converged";
    case RunStatus::MaxIterations:
      return "max-iterations";
    case RunStatus::Diverged:
      break;
  }
  return "diverged";
}

std::ptrdiff_t locate_cell(const Mesh& mesh, const Vec3& p) {
  std::array<int, 3> ijk{};
  for (int a = 0; a < 3; ++a) {
    const auto& nodes = mesh.nodes(a);
    if (p[a] < nodes.front() || p[a] > nodes.back()) return -1;
    const auto it = std::upper_bound(nodes.begin(), nodes.end(), p[a]);
    ijk[static_cast<std::size_t>(a)] =
        std::clamp(static_cast<int>(it - nodes.begin()) - 1, 0, mesh.n(a) - 1);
  }
  return static_cast<std::ptrdiff_t>(mesh.index(ijk[0], ijk[1], ijk[2]));
}

double mass_flux_scale(const Mesh& mesh, const FieldSet& f, double density) {
  double speed = 0.0;
  double area = 0.0;
  for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
    if (!mesh.is_fluid(c)) continue;
    speed = std::max(speed, norm(f.velocity[c]));
    for (Dir d : {Dir::XPlus, Dir::YPlus, Dir::ZPlus}) area = std::max(area, mesh.face_area(c, d));
  }
  return density * speed * area;
}

RunResult run_steady(const Case& c, const SolverControls& controls,
                     const IterationCallback& on_iteration) {
  return run_steady(c, controls, init_stagnant(c.mesh, c.fluid, c.initial_temperature, c.turbulence), on_iteration);
}

RunResult run_steady(const Case& cs, const SolverControls& ctl, FieldSet initial,
                     const IterationCallback& on_iteration) {
  ctl.validate();
  cs.fluid.validate();
  for (const auto& s : cs.solids) s.validate();
  cs.turbulence.constants.validate();

  const Mesh& mesh = cs.mesh;
  const FluidProps& fluid = cs.fluid;
  const TurbulenceSettings& turb = cs.turbulence;
  const bool turbulent = cs.solve_flow && turb.enabled;
  const auto fmask = fluid_mask(mesh);
  const auto amask = active_mask(mesh);
  const auto kinds = classify_edges(mesh, fmask, cs.bcs);

  std::vector<std::ptrdiff_t> probes;
  for (const auto& p : cs.monitor_points) probes.push_back(locate_cell(mesh, p));

  RunResult r;
  r.fields = std::move(initial);
  FieldSet& f = r.fields;
  update_viscosity(mesh, f, fluid, turb);
  apply_boundary(f, mesh, cs.bcs, fluid);
  if (cs.solve_flow) {
    project_initial_flux(mesh, fmask, f, fluid.density, ctl.pressure_solver);
    apply_boundary(f, mesh, cs.bcs, fluid);
  }
  f.buoyancy.values = buoyancy_source(mesh, f.temperature.values, fluid);

  ResidualNormalizer normalizer(kNormalizationIterations);
  std::array<std::deque<double>, kEquationCount> window;
  std::array<std::vector<double>, 3> last_d;
  const double dt = ctl.pseudo_time_step;
  const auto& rx = ctl.relaxation;

  for (int it = 1; it <= ctl.max_iterations; ++it) {
    Residuals raw{};
    if (cs.solve_flow) {
      if (turbulent) r.wall = wall_functions(mesh, fmask, kinds, f, fluid, turb);
      MomentumProblem mp;
      mp.mesh = &mesh;
      mp.mask = &fmask;
      mp.bcs = &cs.bcs;
      mp.fluid = &fluid;
      mp.fields = &f;
      if (turbulent) mp.wall_viscosity = r.wall.edge_viscosity;
      mp.scheme = ctl.schemes.momentum;
      mp.relaxation = rx.momentum;
      mp.pseudo_time_step = dt;
      auto ma = assemble_momentum(mp);

      std::vector<double> comp(mesh.cell_count());
      for (int i = 0; i < 3; ++i) {
        for (std::size_t cell = 0; cell < comp.size(); ++cell) comp[cell] = f.velocity[cell][i];
        const auto& sys = ma.systems[static_cast<std::size_t>(i)];
        raw[static_cast<std::size_t>(i)] = sys.residual_l1(comp);
        solve_linear(sys, comp, ctl.flow_solver);
        for (std::size_t cell = 0; cell < comp.size(); ++cell) f.velocity[cell][i] = comp[cell];
      }
      apply_boundary(f, mesh, cs.bcs, fluid);
      rhie_chow_face_flux(mesh, fmask, f.velocity, f.pressure, ma.grad_p, ma.d, fluid.density, f.mass_flux);
      const auto pc = pressure_correction(mesh, fmask, f, ma.d, fluid.density, rx.pressure, ctl.pressure_solver);
      raw[static_cast<std::size_t>(Equation::P)] = pc.imbalance_before;
      last_d = std::move(ma.d);

      if (turbulent) {
        const auto grad_u = gradient(mesh, f.velocity.values, fmask, velocity_edge_values(mesh, fmask, f, kinds));
        r.wall = wall_functions(mesh, fmask, kinds, f, fluid, turb);
        const auto ke = solve_k_epsilon(mesh, fmask, kinds, f, grad_u, r.wall, fluid, turb, ctl.schemes.turbulence, rx.k,
                                        rx.epsilon, ctl.scalar_solver, dt);
        raw[static_cast<std::size_t>(Equation::K)] = ke.k_residual;
        raw[static_cast<std::size_t>(Equation::Epsilon)] = ke.eps_residual;
      }
    }
    if (cs.solve_energy) {
      const auto er = solve_energy(mesh, amask, cs.bcs, f, fluid, cs.solids, turb, ctl.schemes.energy, rx.temperature,
                                   ctl.scalar_solver, dt);
      raw[static_cast<std::size_t>(Equation::T)] = er.residual;
    }
    f.buoyancy.values = buoyancy_source(mesh, f.temperature.values, fluid);

    const Residuals norm_res = normalizer.normalize(it, raw);
    r.history.raw.push_back(raw);
    r.history.normalized.push_back(norm_res);
    std::vector<MonitorSample> samples;
    for (auto p : probes) {
      if (p < 0) {
        samples.push_back({std::nan(""), std::nan("")});
      } else {
        samples.push_back({f.temperature[static_cast<std::size_t>(p)], norm(f.velocity[static_cast<std::size_t>(p)])});
      }
    }
    r.history.monitors.push_back(std::move(samples));
    r.iterations = it;
    if (on_iteration) on_iteration(it, norm_res, f);

    bool diverged = !f.finite();
    bool converged = !diverged;
    for (std::size_t e = 0; e < kEquationCount; ++e) {
      const double v = norm_res[e];
      if (!std::isfinite(v)) diverged = true;
      if (!(v <= ctl.targets[e])) converged = false;
      auto& w = window[e];
      if (it <= kNormalizationIterations) continue;
      if (!w.empty()) {
        const double lo = *std::min_element(w.begin(), w.end());
        if (v >= 1.0 && v > ctl.divergence_factor * lo) diverged = true;
      }
      w.push_back(v);
      if (static_cast<int>(w.size()) > ctl.divergence_window) w.pop_front();
    }
    if (diverged) {
      r.status = RunStatus::Diverged;
      r.message = "residuals diverged at iteration " + std::to_string(it);
      return r;
    }
    if (converged) {
      r.status = RunStatus::Converged;
      break;
    }
  }

  if (cs.solve_flow && ctl.final_projection && !last_d[0].empty()) {
    SolveOptions tight = ctl.pressure_solver;
    tight.tolerance = ctl.projection_tolerance;
    tight.abs_tolerance = 0.0;
    tight.max_iterations = std::max(tight.max_iterations, 5000);
    const double scale = mass_flux_scale(mesh, f, fluid.density);
    for (int pass = 0; pass < kFinalProjectionPasses; ++pass) {
      const auto pc = pressure_correction(mesh, fmask, f, last_d, fluid.density, 1.0, tight, false);
      if (!(pc.imbalance_after > ctl.projection_tolerance * scale)) break;
    }
  }
  if (cs.solve_flow) {
    for (double v : mass_imbalance(mesh, fmask, f.mass_flux)) r.max_mass_imbalance = std::max(r.max_mass_imbalance, std::abs(v));
  }
  if (r.status != RunStatus::Converged) r.message = "not converged after " + std::to_string(r.iterations) + " iterations";
  return r;
}

Residuals raw_residuals(const Case& c, const SolverControls& controls, const FieldSet& fields) {
  SolverControls one = controls;
  one.max_iterations = 1;
  one.final_projection = false;
  return run_steady(c, one, fields).history.raw.front();
}

Residuals normalization_scales(const Case& c, const SolverControls& controls) {
  SolverControls first = controls;
  first.max_iterations = kNormalizationIterations;
  first.final_projection = false;
  first.targets.fill(std::numeric_limits<double>::min());
  const auto r = run_steady(c, first);
  ResidualNormalizer normalizer(kNormalizationIterations);
  for (std::size_t i = 0; i < r.history.raw.size(); ++i) normalizer.normalize(static_cast<int>(i) + 1, r.history.raw[i]);
  return normalizer.scale();
}

}  // namespace dtcfd
