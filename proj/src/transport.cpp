#include "dtcfd/transport.hpp"

#include <algorithm>
#include <cmath>

#include "dtcfd/gradient.hpp"

namespace dtcfd {

double limiter_value(Limiter limiter, double r) {
  if (!(r > 0.0)) return 0.0;
  switch (limiter) {
    case Limiter::Minmod:
      return std::min(r, 1.0);
    case Limiter::Superbee:
      return std::max(std::min(2.0 * r, 1.0), std::min(r, 2.0));
    case Limiter::VanAlbada:
      return std::isinf(r) ? 1.0 : (r * r + r) / (r * r + 1.0);
    case Limiter::VanLeer:
      break;
  }
  return std::isinf(r) ? 2.0 : 2.0 * r / (1.0 + r);
}

double high_resolution_face_value(double upwind, double downwind, double upwind_gradient_dot_d, Limiter limiter) {
  const double jump = downwind - upwind;
  if (jump == 0.0) return upwind;
  const double r = 2.0 * upwind_gradient_dot_d / jump - 1.0;
  return upwind + 0.5 * limiter_value(limiter, r) * jump;
}

namespace {

void check_conductance(double d) {
  if (!(d >= 0.0)) throw Error("negative diffusion coefficient");
}

}  // namespace

LinearSystem assemble_advection_diffusion(const TransportProblem& p, TransportDiagnostics* diag_out) {
  if (!(p.relaxation > 0.0 && p.relaxation <= 1.0)) {
    throw Error("relaxation factor must lie in (0, 1]");
  }
  const Mesh& mesh = *p.mesh;
  const CellMask& mask = *p.mask;
  LinearSystem A(mesh.dims());
  const bool high_res = p.mass_flux != nullptr && p.scheme.advection == AdvectionScheme::HighResolution;

  std::vector<Vec3> grad;
  if (high_res) {
    std::vector<double> edge_values(mask.edges.size());
    for (std::size_t e = 0; e < edge_values.size(); ++e) edge_values[e] = p.edges[e].value;
    grad = gradient(mesh, p.phi, mask, edge_values);
  }

  double worst = 0.0;
  const auto n = static_cast<std::ptrdiff_t>(mesh.cell_count());
#pragma omp parallel for schedule(static) reduction(max : worst)
  for (std::ptrdiff_t ci = 0; ci < n; ++ci) {
    const auto c = static_cast<std::size_t>(ci);
    if (!mask[c]) {
      A.diag[c] = 1.0;
      A.rhs[c] = p.phi[c];
      continue;
    }
    double diag = 0.0;
    double net_outflow = 0.0;
    double rhs = p.source.empty() ? 0.0 : p.source[c];
    if (!p.sink.empty()) diag += p.sink[c];
    std::size_t e = mask.edge_begin[c];
    for (Dir d : kAllDirs) {
      const auto nb = mesh.neighbour(c, d);
      const int a = axis_of(d);
      const std::size_t fi = mesh.face_index(c, d);
      const double flux = p.mass_flux != nullptr ? sign_of(d) * p.mass_flux->at(a, fi) * p.flux_factor : 0.0;
      net_outflow += flux;
      if (nb >= 0 && mask[static_cast<std::size_t>(nb)]) {
        const auto nc = static_cast<std::size_t>(nb);
        const double dcoef = p.conductance != nullptr ? p.conductance->at(a, fi) : 0.0;
        check_conductance(dcoef);
        diag += dcoef + std::max(flux, 0.0);
        A.off[static_cast<std::size_t>(index_of(d))][c] = -dcoef + std::min(flux, 0.0);
        if (high_res && flux != 0.0) {
          const std::size_t up = flux > 0.0 ? c : nc;
          const std::size_t down = flux > 0.0 ? nc : c;
          const double dist = mesh.center(down)[a] - mesh.center(up)[a];
          const double face =
              high_resolution_face_value(p.phi[up], p.phi[down], grad[up][a] * dist, p.scheme.limiter);
          const double lo = std::min(p.phi[up], p.phi[down]);
          const double hi = std::max(p.phi[up], p.phi[down]);
          worst = std::max(worst, std::max(lo - face, face - hi));
          rhs -= flux * (face - p.phi[up]);
        }
      } else {
        const BoundaryCoeffs& bc = p.edges[e++];
        check_conductance(bc.conductance);
        diag += bc.conductance;
        rhs += bc.conductance * bc.value + bc.flux;
        if (flux > 0.0) {
          diag += flux;
        } else {
          rhs -= flux * bc.value;
        }
      }
    }
    if (p.continuity_correction) diag -= net_outflow;
    if (!p.pseudo_time.empty()) {
      diag += p.pseudo_time[c];
      rhs += p.pseudo_time[c] * p.phi[c];
    }
    if (p.relaxation < 1.0) {
      const double relaxed = diag / p.relaxation;
      rhs += (relaxed - diag) * p.phi[c];
      diag = relaxed;
    }
    A.diag[c] = diag;
    A.rhs[c] = rhs;
  }
  if (diag_out != nullptr) diag_out->max_bound_violation = std::max(worst, 0.0);
  return A;
}

FaceField face_conductance(const Mesh& mesh, const CellMask& mask, std::span<const double> gamma) {
  FaceField f = mesh.make_face_field(0.0);
  for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
    if (!mask[c]) continue;
    for (Dir d : {Dir::XPlus, Dir::YPlus, Dir::ZPlus}) {
      const auto nb = mesh.neighbour(c, d);
      if (nb < 0 || !mask[static_cast<std::size_t>(nb)]) continue;
      const auto nc = static_cast<std::size_t>(nb);
      if (gamma[c] < 0.0 || gamma[nc] < 0.0) throw Error("negative diffusivity");
      const double w = mesh.interp_weight(c, d);
      const double g = w * gamma[c] + (1.0 - w) * gamma[nc];
      f.at(axis_of(d), mesh.face_index(c, d)) = g * mesh.face_area(c, d) / mesh.center_distance(c, d);
    }
  }
  return f;
}

FaceField face_conductance_harmonic(const Mesh& mesh, const CellMask& mask, std::span<const Vec3> gamma) {
  FaceField f = mesh.make_face_field(0.0);
  for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
    if (!mask[c]) continue;
    for (Dir d : {Dir::XPlus, Dir::YPlus, Dir::ZPlus}) {
      const auto nb = mesh.neighbour(c, d);
      if (nb < 0 || !mask[static_cast<std::size_t>(nb)]) continue;
      const auto nc = static_cast<std::size_t>(nb);
      const int a = axis_of(d);
      if (!(gamma[c][a] > 0.0) || !(gamma[nc][a] > 0.0)) throw Error("diffusivity must be > 0");
      const double resistance = mesh.half_width(c, d) / gamma[c][a] + mesh.half_width(nc, opposite(d)) / gamma[nc][a];
      f.at(a, mesh.face_index(c, d)) = mesh.face_area(c, d) / resistance;
    }
  }
  return f;
}

std::string to_string(AdvectionScheme s) { return s == AdvectionScheme::Upwind ? "upwind" : "high-resolution"; }

std::string to_string(Limiter l) {
  switch (l) {
    case Limiter::Minmod:
      return "minmod";
    case Limiter::Superbee:
      return "superbee";
    case Limiter::VanAlbada:
      return "van-albada";
    case Limiter::VanLeer:
      break;
  }
  return "van-leer";
}

}  // namespace dtcfd
