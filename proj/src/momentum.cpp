#include "dtcfd/momentum.hpp"

#include <cmath>

#include "dtcfd/gradient.hpp"

namespace dtcfd {

std::vector<double> pressure_edge_values(const Mesh& mesh, const CellMask& mask, const FieldSet& f) {
  std::vector<double> values(mask.edges.size());
  for (std::size_t e = 0; e < values.size(); ++e) {
    const auto& edge = mask.edges[e];
    values[e] = f.pressure[edge.cell] + dot(f.buoyancy[edge.cell], unit_normal(edge.dir)) * edge.distance;
  }
  (void)mesh;
  return values;
}

std::vector<Vec3> pressure_gradient(const Mesh& mesh, const CellMask& mask, const FieldSet& f) {
  return gradient(mesh, f.pressure.values, mask, pressure_edge_values(mesh, mask, f));
}

std::vector<Vec3> velocity_edge_values(const Mesh& mesh, const CellMask& mask, const FieldSet& f,
                                       std::span<const EdgeKind> kinds) {
  (void)mesh;
  std::vector<Vec3> values(mask.edges.size());
  for (std::size_t e = 0; e < values.size(); ++e) {
    const auto& edge = mask.edges[e];
    const Vec3& u = f.velocity[edge.cell];
    const Vec3 n = unit_normal(edge.dir);
    switch (kinds[e]) {
      case EdgeKind::Wall:
      case EdgeKind::Inlet:
        values[e] = f.boundary.velocity[static_cast<std::size_t>(edge.boundary_face)];
        break;
      case EdgeKind::Outlet:
        values[e] = u;
        break;
      case EdgeKind::Symmetry:
        values[e] = u - n * dot(u, n);
        break;
      case EdgeKind::Interface:
        values[e] = Vec3{};
        break;
    }
  }
  return values;
}

MomentumAssembly assemble_momentum(const MomentumProblem& p) {
  const Mesh& mesh = *p.mesh;
  const CellMask& mask = *p.mask;
  const FieldSet& f = *p.fields;
  const std::size_t n = mesh.cell_count();
  const double rho = p.fluid->density;

  MomentumAssembly out;
  out.edge_kinds = classify_edges(mesh, mask, *p.bcs);
  out.grad_p = pressure_gradient(mesh, mask, f);

  for (std::size_t c = 0; c < n; ++c) {
    if (mask[c] && !(f.mu_eff[c] > 0.0)) throw Error("effective viscosity must be > 0 in fluid cells");
  }
  const FaceField conductance = face_conductance(mesh, mask, f.mu_eff.values);

  std::vector<Tensor3> grad_u;
  if (p.transpose_term) {
    grad_u = gradient(mesh, f.velocity.values, mask, velocity_edge_values(mesh, mask, f, out.edge_kinds));
  }

  std::vector<double> pseudo;
  if (p.pseudo_time_step > 0.0) {
    pseudo.assign(n, 0.0);
    for (std::size_t c = 0; c < n; ++c) {
      if (mask[c]) pseudo[c] = rho * mesh.volume(c) / p.pseudo_time_step;
    }
  }

  std::vector<double> phi(n);
  std::vector<double> source(n);
  std::vector<BoundaryCoeffs> edges(mask.edges.size());
  for (int i = 0; i < 3; ++i) {
    for (std::size_t c = 0; c < n; ++c) {
      phi[c] = f.velocity[c][i];
      source[c] = 0.0;
      if (!mask[c]) continue;
      const double vol = mesh.volume(c);
      source[c] = (f.buoyancy[c][i] - out.grad_p[c][i]) * vol;
      if (!p.transpose_term) continue;
      std::size_t e = mask.edge_begin[c];
      for (Dir d : kAllDirs) {
        const int a = axis_of(d);
        const auto nb = mesh.neighbour(c, d);
        const double area = mesh.face_area(c, d) * sign_of(d);
        if (nb >= 0 && mask[static_cast<std::size_t>(nb)]) {
          const auto nc = static_cast<std::size_t>(nb);
          const double w = mesh.interp_weight(c, d);
          const double mu = w * f.mu_eff[c] + (1.0 - w) * f.mu_eff[nc];
          source[c] += mu * area * (w * grad_u[c](a, i) + (1.0 - w) * grad_u[nc](a, i));
        } else {
          const EdgeKind kind = out.edge_kinds[e];
          if (kind == EdgeKind::Inlet || kind == EdgeKind::Outlet || (kind == EdgeKind::Symmetry && a == i)) {
            source[c] += f.mu_eff[c] * area * grad_u[c](a, i);
          }
          ++e;
        }
      }
    }
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const auto& edge = mask.edges[e];
      const std::size_t c = edge.cell;
      const int a = axis_of(edge.dir);
      const double g = f.mu_eff[c] * edge.area / edge.distance;
      switch (out.edge_kinds[e]) {
        case EdgeKind::Wall:
        case EdgeKind::Interface: {
          const double wall_value = out.edge_kinds[e] == EdgeKind::Wall
                                        ? f.boundary.velocity[static_cast<std::size_t>(edge.boundary_face)][i]
                                        : 0.0;
          double mu_wall = f.mu_eff[c];
          if (!p.wall_viscosity.empty() && a != i) mu_wall = p.wall_viscosity[e];
          edges[e] = BoundaryCoeffs::dirichlet(wall_value, mu_wall * edge.area / edge.distance);
          break;
        }
        case EdgeKind::Inlet:
          edges[e] = BoundaryCoeffs::dirichlet(f.boundary.velocity[static_cast<std::size_t>(edge.boundary_face)][i], g);
          break;
        case EdgeKind::Outlet:
          edges[e] = BoundaryCoeffs::zero_gradient(phi[c]);
          break;
        case EdgeKind::Symmetry:
          edges[e] = a == i ? BoundaryCoeffs::dirichlet(0.0, g) : BoundaryCoeffs::zero_gradient(phi[c]);
          break;
      }
    }

    TransportProblem tp;
    tp.mesh = &mesh;
    tp.mask = &mask;
    tp.phi = phi;
    tp.mass_flux = &f.mass_flux;
    tp.conductance = &conductance;
    tp.edges = edges;
    tp.source = source;
    tp.scheme = p.scheme;
    tp.relaxation = p.relaxation;
    tp.pseudo_time = pseudo;
    auto& sys = out.systems[static_cast<std::size_t>(i)];
    sys = assemble_advection_diffusion(tp);

    // Rhie-Chow uses the diagonal of the mirrored problem at symmetry planes.
    std::vector<double> diag = sys.diag;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (out.edge_kinds[e] != EdgeKind::Symmetry) continue;
      const auto& edge = mask.edges[e];
      const double half = 0.5 * f.mu_eff[edge.cell] * edge.area / edge.distance / p.relaxation;
      diag[edge.cell] += axis_of(edge.dir) == i ? -half : half;
    }
    auto& d = out.d[static_cast<std::size_t>(i)];
    d.assign(n, 0.0);
    for (std::size_t c = 0; c < n; ++c) {
      if (!mask[c]) continue;
      if (!(diag[c] > 0.0) || !std::isfinite(diag[c])) {
        throw Error("singular momentum assembly: non-positive diagonal");
      }
      d[c] = mesh.volume(c) / diag[c];
    }
  }
  return out;
}

void rhie_chow_face_flux(const Mesh& mesh, const CellMask& mask, const VectorField& velocity,
                         const ScalarField& pressure, std::span<const Vec3> grad_p,
                         const std::array<std::vector<double>, 3>& d, double density, FaceField& flux) {
  const auto n = static_cast<std::ptrdiff_t>(mesh.cell_count());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ci = 0; ci < n; ++ci) {
    const auto c = static_cast<std::size_t>(ci);
    if (!mask[c]) continue;
    for (Dir dir : {Dir::XPlus, Dir::YPlus, Dir::ZPlus}) {
      const auto nb = mesh.neighbour(c, dir);
      if (nb < 0 || !mesh.is_active(static_cast<std::size_t>(nb))) continue;
      const auto nc = static_cast<std::size_t>(nb);
      const int a = axis_of(dir);
      double& F = flux.at(a, mesh.face_index(c, dir));
      if (!mask[nc]) {
        F = 0.0;
        continue;
      }
      const auto& da = d[static_cast<std::size_t>(a)];
      if (!(da[c] > 0.0) || !(da[nc] > 0.0)) throw Error("singular momentum assembly: zero diagonal");
      const double w = mesh.interp_weight(c, dir);
      const double u_bar = w * velocity[c][a] + (1.0 - w) * velocity[nc][a];
      const double d_bar = w * da[c] + (1.0 - w) * da[nc];
      const double grad_bar = w * grad_p[c][a] + (1.0 - w) * grad_p[nc][a];
      const double grad_face = (pressure[nc] - pressure[c]) / mesh.center_distance(c, dir);
      F = density * mesh.face_area(c, dir) * (u_bar - d_bar * (grad_face - grad_bar));
    }
  }
  // Faces of mask cells towards cells outside the mask on the minus side.
  for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
    if (mask[c]) continue;
    for (Dir dir : {Dir::XPlus, Dir::YPlus, Dir::ZPlus}) {
      const auto nb = mesh.neighbour(c, dir);
      if (nb >= 0 && mask[static_cast<std::size_t>(nb)]) flux.at(axis_of(dir), mesh.face_index(c, dir)) = 0.0;
    }
  }
}

std::vector<double> mass_imbalance(const Mesh& mesh, const CellMask& mask, const FaceField& flux) {
  std::vector<double> out(mesh.cell_count(), 0.0);
  for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
    if (!mask[c]) continue;
    double s = 0.0;
    for (Dir d : kAllDirs) {
      const auto nb = mesh.neighbour(c, d);
      if (nb >= 0 && !mask[static_cast<std::size_t>(nb)]) continue;
      if (nb < 0 && mesh.boundary_face_id(c, d) < 0) continue;
      s += outward_flux(mesh, flux, c, d);
    }
    out[c] = s;
  }
  return out;
}

namespace {

/// One representative cell per connected component of the mask.
std::vector<std::size_t> component_roots(const Mesh& mesh, const CellMask& mask) {
  std::vector<std::uint8_t> seen(mesh.cell_count(), 0);
  std::vector<std::size_t> roots;
  std::vector<std::size_t> queue;
  queue.reserve(mesh.cell_count());
  for (std::size_t s = 0; s < mesh.cell_count(); ++s) {
    if (!mask[s] || seen[s]) continue;
    roots.push_back(s);
    seen[s] = 1;
    queue.assign(1, s);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const std::size_t c = queue[head];
      for (Dir d : kAllDirs) {
        const auto nb = mesh.neighbour(c, d);
        if (nb < 0) continue;
        const auto nc = static_cast<std::size_t>(nb);
        if (mask[nc] && !seen[nc]) {
          seen[nc] = 1;
          queue.push_back(nc);
        }
      }
    }
  }
  return roots;
}

}  // namespace

PressureCorrectionResult pressure_correction(const Mesh& mesh, const CellMask& mask, FieldSet& f,
                                             const std::array<std::vector<double>, 3>& dcoef, double rho,
                                             double relaxation, const SolveOptions& options, bool correct_fields) {
  if (!(relaxation > 0.0 && relaxation <= 1.0)) throw Error("pressure relaxation must lie in (0, 1]");
  const std::size_t n = mesh.cell_count();
  PressureCorrectionResult res;
  const auto imbalance = mass_imbalance(mesh, mask, f.mass_flux);
  for (double v : imbalance) res.imbalance_before += std::abs(v);

  LinearSystem A(mesh.dims());
  FaceField coef = mesh.make_face_field(0.0);
  for (std::size_t c = 0; c < n; ++c) {
    if (!mask[c]) continue;
    for (Dir d : {Dir::XPlus, Dir::YPlus, Dir::ZPlus}) {
      const auto nb = mesh.neighbour(c, d);
      if (nb < 0 || !mask[static_cast<std::size_t>(nb)]) continue;
      const auto nc = static_cast<std::size_t>(nb);
      const int a = axis_of(d);
      const auto& da = dcoef[static_cast<std::size_t>(a)];
      const double w = mesh.interp_weight(c, d);
      coef.at(a, mesh.face_index(c, d)) =
          rho * mesh.face_area(c, d) * (w * da[c] + (1.0 - w) * da[nc]) / mesh.center_distance(c, d);
    }
  }
  for (std::size_t c = 0; c < n; ++c) {
    if (!mask[c]) {
      A.diag[c] = 1.0;
      continue;
    }
    double diag = 0.0;
    for (Dir d : kAllDirs) {
      const auto nb = mesh.neighbour(c, d);
      if (nb < 0 || !mask[static_cast<std::size_t>(nb)]) continue;
      const double k = coef.at(axis_of(d), mesh.face_index(c, d));
      diag += k;
      A.off[static_cast<std::size_t>(index_of(d))][c] = -k;
    }
    A.diag[c] = diag;
    A.rhs[c] = -imbalance[c];
  }
  for (std::size_t root : component_roots(mesh, mask)) {
    A.fix_value(root, 0.0);
    for (Dir d : kAllDirs) {
      const auto nb = mesh.neighbour(root, d);
      if (nb >= 0) A.off[static_cast<std::size_t>(index_of(opposite(d)))][static_cast<std::size_t>(nb)] = 0.0;
    }
  }

  res.p_prime.assign(n, 0.0);
  res.solve = solve_linear(A, res.p_prime, options);
  const auto& pp = res.p_prime;

  for (std::size_t c = 0; c < n; ++c) {
    if (!mask[c]) continue;
    for (Dir d : {Dir::XPlus, Dir::YPlus, Dir::ZPlus}) {
      const auto nb = mesh.neighbour(c, d);
      if (nb < 0 || !mask[static_cast<std::size_t>(nb)]) continue;
      const int a = axis_of(d);
      const std::size_t fi = mesh.face_index(c, d);
      f.mass_flux.at(a, fi) -= coef.at(a, fi) * (pp[static_cast<std::size_t>(nb)] - pp[c]);
    }
  }
  const auto after = mass_imbalance(mesh, mask, f.mass_flux);
  for (double v : after) res.imbalance_after = std::max(res.imbalance_after, std::abs(v));

  if (correct_fields) {
    std::vector<double> edge(mask.edges.size());
    for (std::size_t e = 0; e < edge.size(); ++e) edge[e] = pp[mask.edges[e].cell];
    const auto gp = gradient(mesh, pp, mask, edge);
    for (std::size_t c = 0; c < n; ++c) {
      if (!mask[c]) continue;
      for (int a = 0; a < 3; ++a) f.velocity[c][a] -= dcoef[static_cast<std::size_t>(a)][c] * gp[c][a];
      f.pressure[c] += relaxation * pp[c];
    }
  }
  return res;
}

}  // namespace dtcfd
