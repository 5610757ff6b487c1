#include "dtcfd/turbulence.hpp"

#include <algorithm>
#include <cmath>

namespace dtcfd {

double production(const Tensor3& g, double mu_eff, double density, double k) {
  double contraction = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) contraction += g(i, j) * (g(i, j) + g(j, i));
  }
  const double div = g.trace();
  return mu_eff * contraction - (2.0 / 3.0) * div * (mu_eff * div + density * k);
}

std::vector<double> production(std::span<const Tensor3> grad_u, std::span<const double> mu_eff, double density,
                               std::span<const double> k, const CellMask& mask) {
  std::vector<double> out(grad_u.size(), 0.0);
  for (std::size_t c = 0; c < out.size(); ++c) {
    if (mask[c]) out[c] = production(grad_u[c], mu_eff[c], density, k[c]);
  }
  return out;
}

double log_law_crossover(double kappa, double e) {
  double y = 11.0;
  for (int it = 0; it < 100; ++it) {
    const double next = std::log(e * y) / kappa;
    if (std::abs(next - y) < 1e-14 * y) return next;
    y = next;
  }
  return y;
}

double log_law_wall_shear(double u_t, double d, double rho, double mu, double kappa, double e) {
  if (!(u_t > 0.0)) return 0.0;
  const double y_lam = std::sqrt(rho * u_t * d / mu);
  if (y_lam <= log_law_crossover(kappa, e)) return mu * u_t / d;
  // Newton on f(u) = u ln(E rho u d / mu) / kappa - u_t, which is convex and increasing here.
  double u = kappa * u_t / std::log(e * y_lam);
  for (int it = 0; it < 100; ++it) {
    const double l = std::log(e * rho * u * d / mu);
    const double f = u * l / kappa - u_t;
    const double step = f / ((l + 1.0) / kappa);
    u -= step;
    if (std::abs(step) <= 1e-15 * u) break;
  }
  return rho * u * u;
}

WallTreatment wall_functions(const Mesh& mesh, const CellMask& mask, std::span<const EdgeKind> kinds,
                             const FieldSet& f, const FluidProps& fluid, const TurbulenceSettings& turb) {
  const std::size_t n = mesh.cell_count();
  const double rho = fluid.density;
  const double mu = fluid.viscosity;
  WallTreatment w;
  w.edge_viscosity.assign(mask.edges.size(), 0.0);
  w.wall_epsilon.assign(n, 0.0);
  w.wall_production.assign(n, 0.0);
  w.wall_cell.assign(n, 0);
  std::vector<int> faces_per_cell(n, 0);

  const double c_mu = turb.constants.c_mu;
  const double c_mu_quarter = std::pow(c_mu, 0.25);
  for (std::size_t e = 0; e < mask.edges.size(); ++e) {
    if (kinds[e] != EdgeKind::Wall && kinds[e] != EdgeKind::Interface) continue;
    const auto& edge = mask.edges[e];
    const std::size_t c = edge.cell;
    const Vec3 n_hat = unit_normal(edge.dir);
    const Vec3 wall_u =
        kinds[e] == EdgeKind::Wall ? f.boundary.velocity[static_cast<std::size_t>(edge.boundary_face)] : Vec3{};
    Vec3 rel = f.velocity[c] - wall_u;
    rel -= n_hat * dot(rel, n_hat);
    const double u_t = norm(rel);
    const double d = edge.distance;
    const double tau = turb.enabled ? log_law_wall_shear(u_t, d, rho, mu, turb.kappa, turb.log_law_e) : mu * u_t / d;
    const double u_tau = std::sqrt(tau / rho);
    const double y_plus = rho * u_tau * d / mu;

    w.edge.push_back(e);
    w.distance.push_back(d);
    w.tau_w.push_back(tau);
    w.u_tau.push_back(u_tau);
    w.y_plus.push_back(y_plus);
    w.edge_viscosity[e] = u_t > 0.0 ? tau * d / u_t : mu;
    if (turb.enabled && u_t > 0.0 && y_plus < 0.5) ++w.low_y_plus;

    if (!turb.enabled) continue;
    const double k = std::max(f.k[c], turb.k_floor);
    const double u_star = c_mu_quarter * std::sqrt(k);
    w.wall_cell[c] = 1;
    ++faces_per_cell[c];
    w.wall_epsilon[c] += u_star * u_star * u_star / (turb.kappa * d);
    w.wall_production[c] += tau * u_star / (turb.kappa * d) * mesh.volume(c);
  }
  for (std::size_t c = 0; c < n; ++c) {
    if (faces_per_cell[c] > 1) {
      w.wall_epsilon[c] /= faces_per_cell[c];
      w.wall_production[c] /= faces_per_cell[c];
    }
  }
  return w;
}

void update_viscosity(const Mesh& mesh, FieldSet& f, const FluidProps& fluid, const TurbulenceSettings& turb) {
  const double mu_max = turb.mut_ratio_max * fluid.viscosity;
  for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
    if (!mesh.is_fluid(c)) continue;
    f.mu_t[c] = turb.enabled
                    ? eddy_viscosity(f.k[c], f.epsilon[c], fluid.density, turb.constants.c_mu, mu_max)
                    : 0.0;
    f.mu_eff[c] = effective_viscosity(fluid.viscosity, f.mu_t[c]);
  }
}

namespace {

std::vector<BoundaryCoeffs> scalar_edges(const CellMask& mask, std::span<const EdgeKind> kinds,
                                         std::span<const double> phi, std::span<const double> inlet_values,
                                         std::span<const double> gamma) {
  std::vector<BoundaryCoeffs> edges(mask.edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto& edge = mask.edges[e];
    if (kinds[e] == EdgeKind::Inlet) {
      edges[e] = BoundaryCoeffs::dirichlet(inlet_values[static_cast<std::size_t>(edge.boundary_face)],
                                           gamma[edge.cell] * edge.area / edge.distance);
    } else {
      edges[e] = BoundaryCoeffs::zero_gradient(phi[edge.cell]);
    }
  }
  return edges;
}

/// L1 residual of the bound-constrained system: cells held at `floor` whose equation drives
/// them further down satisfy the constraint and contribute nothing.
double bounded_residual_l1(const LinearSystem& A, std::span<const double> x, double floor) {
  std::vector<double> r(A.size());
  A.residual(x, r);
  return deterministic_sum(r.size(), [&](std::size_t i) { return x[i] <= floor && r[i] < 0.0 ? 0.0 : std::abs(r[i]); });
}

}  // namespace

KEpsilonResult solve_k_epsilon(const Mesh& mesh, const CellMask& mask, std::span<const EdgeKind> kinds, FieldSet& f,
                               std::span<const Tensor3> grad_u, const WallTreatment& wall, const FluidProps& fluid,
                               const TurbulenceSettings& turb, const SchemeChoice& scheme, double relax_k,
                               double relax_eps, const SolveOptions& options, double pseudo_time_step) {
  const std::size_t n = mesh.cell_count();
  const double rho = fluid.density;
  const auto& tc = turb.constants;
  KEpsilonResult res;
  res.production = production(grad_u, f.mu_eff.values, rho, f.k.values, mask);

  std::vector<double> pseudo;
  if (pseudo_time_step > 0.0) {
    pseudo.assign(n, 0.0);
    for (std::size_t c = 0; c < n; ++c) {
      if (mask[c]) pseudo[c] = rho * mesh.volume(c) / pseudo_time_step;
    }
  }

  std::vector<double> gamma(n, 0.0);
  std::vector<double> source(n, 0.0);
  std::vector<double> sink(n, 0.0);
  std::vector<double> prod_volume(n, 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    if (!mask[c]) continue;
    prod_volume[c] = wall.wall_cell[c] ? wall.wall_production[c] : std::max(res.production[c], 0.0) * mesh.volume(c);
  }

  // k
  for (std::size_t c = 0; c < n; ++c) {
    if (!mask[c]) continue;
    gamma[c] = fluid.viscosity + f.mu_t[c] / tc.sigma_k;
    source[c] = prod_volume[c];
    sink[c] = rho * f.epsilon[c] / f.k[c] * mesh.volume(c);
  }
  {
    const FaceField cond = face_conductance(mesh, mask, gamma);
    const auto edges = scalar_edges(mask, kinds, f.k.values, f.boundary.k, gamma);
    TransportProblem tp;
    tp.mesh = &mesh;
    tp.mask = &mask;
    tp.phi = f.k.values;
    tp.mass_flux = &f.mass_flux;
    tp.conductance = &cond;
    tp.edges = edges;
    tp.source = source;
    tp.sink = sink;
    tp.scheme = scheme;
    tp.relaxation = relax_k;
    tp.pseudo_time = pseudo;
    tp.continuity_correction = true;
    const LinearSystem A = assemble_advection_diffusion(tp);
    res.k_residual = bounded_residual_l1(A, f.k.values, turb.k_floor);
    std::vector<double> k_old = f.k.values;
    res.k_solve = solve_linear(A, f.k.values, options);
    for (std::size_t c = 0; c < n; ++c) {
      if (mask[c]) f.k[c] = std::isfinite(f.k[c]) ? std::max(f.k[c], turb.k_floor) : std::max(k_old[c], turb.k_floor);
    }
  }

  // epsilon
  for (std::size_t c = 0; c < n; ++c) {
    if (!mask[c]) continue;
    gamma[c] = fluid.viscosity + f.mu_t[c] / tc.sigma_eps;
    const double ratio = f.epsilon[c] / f.k[c];
    source[c] = tc.c1 * ratio * prod_volume[c];
    sink[c] = tc.c2 * rho * ratio * mesh.volume(c);
  }
  {
    const FaceField cond = face_conductance(mesh, mask, gamma);
    const auto edges = scalar_edges(mask, kinds, f.epsilon.values, f.boundary.epsilon, gamma);
    TransportProblem tp;
    tp.mesh = &mesh;
    tp.mask = &mask;
    tp.phi = f.epsilon.values;
    tp.mass_flux = &f.mass_flux;
    tp.conductance = &cond;
    tp.edges = edges;
    tp.source = source;
    tp.sink = sink;
    tp.scheme = scheme;
    tp.relaxation = relax_eps;
    tp.pseudo_time = pseudo;
    tp.continuity_correction = true;
    LinearSystem A = assemble_advection_diffusion(tp);
    for (std::size_t c = 0; c < n; ++c) {
      if (mask[c] && wall.wall_cell[c]) A.fix_value(c, std::max(wall.wall_epsilon[c], turb.eps_floor));
    }
    res.eps_residual = bounded_residual_l1(A, f.epsilon.values, turb.eps_floor);
    std::vector<double> eps_old = f.epsilon.values;
    res.eps_solve = solve_linear(A, f.epsilon.values, options);
    for (std::size_t c = 0; c < n; ++c) {
      if (mask[c]) {
        f.epsilon[c] = std::isfinite(f.epsilon[c]) ? std::max(f.epsilon[c], turb.eps_floor)
                                                   : std::max(eps_old[c], turb.eps_floor);
      }
    }
  }
  update_viscosity(mesh, f, fluid, turb);
  return res;
}

}  // namespace dtcfd
