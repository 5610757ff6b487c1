#include "dtcfd/thermal.hpp"

#include <algorithm>
#include <cmath>

namespace dtcfd {

Vec3 buoyancy_force(double temperature, const FluidProps& fluid) {
  return fluid.gravity * (-fluid.density * fluid.expansivity * (temperature - fluid.reference_temperature));
}

std::vector<Vec3> buoyancy_source(const Mesh& mesh, std::span<const double> temperature, const FluidProps& fluid) {
  std::vector<Vec3> b(mesh.cell_count());
  for (std::size_t c = 0; c < b.size(); ++c) {
    if (mesh.is_fluid(c)) b[c] = buoyancy_force(temperature[c], fluid);
  }
  return b;
}

const SolidProps& solid_props(std::span<const SolidProps> solids, int region) {
  for (const auto& s : solids) {
    if (s.region == region) return s;
  }
  throw Error("no material declared for solid region " + std::to_string(region));
}

std::vector<Vec3> cell_conductivity(const Mesh& mesh, const FieldSet& f, const FluidProps& fluid,
                                    std::span<const SolidProps> solids, const TurbulenceSettings& turb) {
  std::vector<Vec3> lambda(mesh.cell_count());
  for (std::size_t c = 0; c < lambda.size(); ++c) {
    if (mesh.is_fluid(c)) {
      const double l = fluid.conductivity + fluid.specific_heat * f.mu_t[c] / turb.prandtl_turbulent;
      lambda[c] = {l, l, l};
    } else if (mesh.kind(c) == CellKind::Solid) {
      const auto& s = solid_props(solids, mesh.tag(c).solid_id);
      lambda[c] = {s.conductivity(0), s.conductivity(1), s.conductivity(2)};
    }
  }
  return lambda;
}

namespace {

/// Linearised boundary condition of the energy equation on one edge of the active mask.
BoundaryCoeffs energy_edge(const Mesh& mesh, const BoundaryConditions& bcs, const FieldSet& f, const EdgeFace& edge,
                           double lambda) {
  const double t = f.temperature[edge.cell];
  const double g = lambda * edge.area / edge.distance;
  const auto& kind = bcs.for_face(mesh, edge.boundary_face).kind;
  if (const auto* in = std::get_if<VelocityInlet>(&kind)) return BoundaryCoeffs::dirichlet(in->temperature, g);
  if (const auto* wall = std::get_if<Wall>(&kind)) {
    switch (wall->thermal) {
      case ThermalKind::FixedTemperature:
        return BoundaryCoeffs::dirichlet(wall->temperature, g);
      case ThermalKind::FixedFlux:
        return {t + wall->heat_flux * edge.distance / lambda, 0.0, wall->heat_flux * edge.area};
      case ThermalKind::Adiabatic:
      case ThermalKind::Conjugate:
        break;
    }
  }
  return BoundaryCoeffs::zero_gradient(t);
}

}  // namespace

EnergyResult solve_energy(const Mesh& mesh, const CellMask& active, const BoundaryConditions& bcs, FieldSet& f,
                          const FluidProps& fluid, std::span<const SolidProps> solids, const TurbulenceSettings& turb,
                          const SchemeChoice& scheme, double relaxation, const SolveOptions& options,
                          double pseudo_time_step) {
  const std::size_t n = mesh.cell_count();
  const auto lambda = cell_conductivity(mesh, f, fluid, solids, turb);
  const FaceField cond = face_conductance_harmonic(mesh, active, lambda);

  std::vector<BoundaryCoeffs> edges(active.edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto& edge = active.edges[e];
    edges[e] = energy_edge(mesh, bcs, f, edge, lambda[edge.cell][axis_of(edge.dir)]);
  }

  std::vector<double> source(n, 0.0);
  std::vector<double> pseudo;
  if (pseudo_time_step > 0.0) pseudo.assign(n, 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    if (mesh.kind(c) == CellKind::Solid) {
      const auto& s = solid_props(solids, mesh.tag(c).solid_id);
      source[c] = s.heat_source * mesh.volume(c);
      if (!pseudo.empty()) pseudo[c] = s.rho_cp * mesh.volume(c) / pseudo_time_step;
    } else if (mesh.is_fluid(c) && !pseudo.empty()) {
      pseudo[c] = fluid.density * fluid.specific_heat * mesh.volume(c) / pseudo_time_step;
    }
  }

  // Solved as the excess over the reference temperature.
  const double t_ref = fluid.reference_temperature;
  for (auto& e : edges) e.value -= t_ref;
  std::vector<double> theta(n);
  for (std::size_t c = 0; c < n; ++c) theta[c] = f.temperature[c] - t_ref;

  TransportProblem tp;
  tp.mesh = &mesh;
  tp.mask = &active;
  tp.phi = theta;
  tp.mass_flux = &f.mass_flux;
  tp.flux_factor = fluid.specific_heat;
  tp.conductance = &cond;
  tp.edges = edges;
  tp.source = source;
  tp.scheme = scheme;
  tp.relaxation = relaxation;
  tp.pseudo_time = pseudo;
  tp.continuity_correction = true;
  const LinearSystem A = assemble_advection_diffusion(tp);

  EnergyResult res;
  res.residual = A.residual_l1(theta);
  res.solve = solve_linear(A, theta, options);
  for (std::size_t c = 0; c < n; ++c) {
    if (active[c]) f.temperature[c] = theta[c] + t_ref;
  }
  for (std::size_t b = 0; b < mesh.boundary_faces().size(); ++b) {
    const auto& bf = mesh.boundary_faces()[b];
    const auto& kind = bcs.for_patch(bf.patch).kind;
    if (const auto* in = std::get_if<VelocityInlet>(&kind)) {
      f.boundary.temperature[b] = in->temperature;
    } else if (const auto* wall = std::get_if<Wall>(&kind); wall && wall->thermal == ThermalKind::FixedTemperature) {
      f.boundary.temperature[b] = wall->temperature;
    } else {
      f.boundary.temperature[b] = f.temperature[bf.cell];
    }
  }
  return res;
}

EnergyAudit global_energy_audit(const Mesh& mesh, const BoundaryConditions& bcs, const FieldSet& f,
                                const FluidProps& fluid, std::span<const SolidProps> solids,
                                const TurbulenceSettings& turb) {
  EnergyAudit a;
  for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
    if (mesh.kind(c) == CellKind::Solid) a.sources += solid_props(solids, mesh.tag(c).solid_id).heat_source * mesh.volume(c);
  }
  const auto active = active_mask(mesh);
  const auto lambda = cell_conductivity(mesh, f, fluid, solids, turb);
  const double cp = fluid.specific_heat;
  for (const auto& edge : active.edges) {
    const std::size_t c = edge.cell;
    const BoundaryCoeffs bc = energy_edge(mesh, bcs, f, edge, lambda[c][axis_of(edge.dir)]);
    a.boundary_conduction += bc.conductance * (bc.value - f.temperature[c]) + bc.flux;
    const double out = outward_flux(mesh, f.mass_flux, c, edge.dir) * cp;
    if (out > 0.0) {
      a.enthalpy_out += out * f.temperature[c];
    } else {
      a.enthalpy_in -= out * bc.value;
    }
  }
  a.imbalance = a.sources + a.boundary_conduction - (a.enthalpy_out - a.enthalpy_in);
  const double scale = std::max({std::abs(a.sources), std::abs(a.boundary_conduction),
                                 std::abs(a.enthalpy_out - a.enthalpy_in)});
  a.relative = scale > 0.0 ? std::abs(a.imbalance) / scale : 0.0;
  return a;
}

double interface_flux_mismatch(const Mesh& mesh, const FieldSet& f, const FluidProps& fluid,
                               std::span<const SolidProps> solids, const TurbulenceSettings& turb) {
  const auto lambda = cell_conductivity(mesh, f, fluid, solids, turb);
  double worst = 0.0;
  for (const auto& face : interior_face_list(mesh)) {
    const auto d = static_cast<Dir>(2 * face.axis + 1);
    const double rp = mesh.half_width(face.owner, d) / lambda[face.owner][face.axis];
    const double rn = mesh.half_width(face.neighbour, opposite(d)) / lambda[face.neighbour][face.axis];
    const double tp = f.temperature[face.owner];
    const double tn = f.temperature[face.neighbour];
    const double t_face = (tp / rp + tn / rn) / (1.0 / rp + 1.0 / rn);
    const double from_owner = (tp - t_face) / rp * face.area;
    const double from_neighbour = (t_face - tn) / rn * face.area;
    worst = std::max(worst, std::abs(from_owner - from_neighbour));
  }
  return worst;
}

}  // namespace dtcfd
