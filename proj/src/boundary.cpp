#include "dtcfd/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dtcfd {

Vec3 inlet_velocity(const VelocityInlet& inlet, const Vec3& face_center) {
  return inlet.profile ? inlet.profile(face_center) : inlet.velocity;
}

BoundaryConditions::BoundaryConditions(const Mesh& mesh, std::vector<BoundarySpec> specs)
    : specs_(std::move(specs)), spec_of_patch_(mesh.patches().size(), -1) {
  for (std::size_t s = 0; s < specs_.size(); ++s) {
    const int p = mesh.patch_index(specs_[s].patch);
    if (p < 0) throw Error("boundary spec for unknown patch '" + specs_[s].patch + "'");
    if (spec_of_patch_[static_cast<std::size_t>(p)] >= 0) {
      throw Error("patch '" + specs_[s].patch + "' has more than one boundary spec");
    }
    spec_of_patch_[static_cast<std::size_t>(p)] = static_cast<int>(s);
  }
  for (std::size_t p = 0; p < mesh.patches().size(); ++p) {
    if (spec_of_patch_[p] < 0) throw Error("patch '" + mesh.patches()[p].name + "' has no boundary spec");
  }

  bool zero_gradient_outlet = false;
  for (std::size_t p = 0; p < mesh.patches().size(); ++p) {
    const auto& patch = mesh.patches()[p];
    const auto& spec = for_patch(static_cast<int>(p));
    const bool flow_patch =
        std::holds_alternative<VelocityInlet>(spec.kind) || std::holds_alternative<OutletFlow>(spec.kind);
    if (flow_patch) {
      for (auto f : patch.faces) {
        if (!mesh.is_fluid(mesh.boundary_faces()[f].cell)) {
          throw Error("flow patch '" + patch.name + "' touches a solid cell");
        }
      }
    }
    if (const auto* in = std::get_if<VelocityInlet>(&spec.kind)) {
      if (!(in->k > 0.0) || !(in->epsilon > 0.0)) {
        throw Error("inlet '" + patch.name + "': k and epsilon must be > 0");
      }
      if (!(in->temperature > 0.0)) throw Error("inlet '" + patch.name + "': temperature must be > 0 K");
      for (auto f : patch.faces) {
        const auto& bf = mesh.boundary_faces()[f];
        const Vec3 u = inlet_velocity(*in, mesh.face_center(bf.cell, bf.dir));
        inflow_ -= dot(u, unit_normal(bf.dir)) * mesh.face_area(bf.cell, bf.dir);
      }
    } else if (const auto* out = std::get_if<OutletFlow>(&spec.kind)) {
      if (out->flow) {
        if (!(*out->flow >= 0.0)) throw Error("outlet '" + patch.name + "': flow must be >= 0");
        prescribed_outflow_ += *out->flow;
      } else {
        zero_gradient_outlet = true;
      }
    } else if (const auto* wall = std::get_if<Wall>(&spec.kind)) {
      if (wall->thermal == ThermalKind::FixedTemperature && !(wall->temperature > 0.0)) {
        throw Error("wall '" + patch.name + "': fixed temperature must be > 0 K");
      }
      if (wall->thermal == ThermalKind::Conjugate) {
        throw Error("wall '" + patch.name +
                    "': conjugate coupling applies to internal fluid-solid faces, not boundary patches");
      }
    }
  }

  const double scale = std::max(inflow_, prescribed_outflow_);
  if (zero_gradient_outlet) {
    if (prescribed_outflow_ > inflow_ * (1.0 + kFlowBalanceTolerance) + 1e-300) {
      std::ostringstream os;
      os << "prescribed outflow " << prescribed_outflow_ << " m3/s exceeds inflow " << inflow_ << " m3/s";
      throw Error(os.str());
    }
  } else if (std::abs(prescribed_outflow_ - inflow_) > kFlowBalanceTolerance * scale) {
    std::ostringstream os;
    os << "prescribed outflow " << prescribed_outflow_ << " m3/s does not balance inflow " << inflow_
       << " m3/s (tolerance " << kFlowBalanceTolerance * 100.0 << "%)";
    throw Error(os.str());
  }
}

void apply_boundary(FieldSet& f, const Mesh& mesh, const BoundaryConditions& bcs, const FluidProps& fluid) {
  const auto& faces = mesh.boundary_faces();
  const double rho = fluid.density;
  f.boundary.velocity.resize(faces.size());
  f.boundary.temperature.resize(faces.size());
  f.boundary.k.resize(faces.size());
  f.boundary.epsilon.resize(faces.size());

  std::vector<double> patch_area(mesh.patches().size(), 0.0);
  for (const auto& bf : faces) patch_area[static_cast<std::size_t>(bf.patch)] += mesh.face_area(bf.cell, bf.dir);

  double inflow_mass = 0.0;
  double prescribed_mass = 0.0;
  double zero_gradient_mass = 0.0;
  double zero_gradient_area = 0.0;

  for (std::size_t b = 0; b < faces.size(); ++b) {
    const auto& bf = faces[b];
    const std::size_t c = bf.cell;
    const Vec3 n = unit_normal(bf.dir);
    const double area = mesh.face_area(c, bf.dir);
    const auto& spec = bcs.for_patch(bf.patch);
    const std::size_t fi = mesh.face_index(c, bf.dir);
    double& flux = f.mass_flux.at(axis_of(bf.dir), fi);

    f.boundary.temperature[b] = f.temperature[c];
    f.boundary.k[b] = f.k[c];
    f.boundary.epsilon[b] = f.epsilon[c];

    std::visit(
        [&](const auto& kind) {
          using K = std::decay_t<decltype(kind)>;
          if constexpr (std::is_same_v<K, VelocityInlet>) {
            const Vec3 u = inlet_velocity(kind, mesh.face_center(c, bf.dir));
            f.boundary.velocity[b] = u;
            f.boundary.temperature[b] = kind.temperature;
            f.boundary.k[b] = kind.k;
            f.boundary.epsilon[b] = kind.epsilon;
            const double out = rho * dot(u, n) * area;
            flux = sign_of(bf.dir) * out;
            inflow_mass -= out;
          } else if constexpr (std::is_same_v<K, OutletFlow>) {
            f.boundary.velocity[b] = f.velocity[c];
            if (kind.flow) {
              const double out = rho * *kind.flow * area / patch_area[static_cast<std::size_t>(bf.patch)];
              flux = sign_of(bf.dir) * out;
              prescribed_mass += out;
            } else {
              const double out = rho * std::max(dot(f.velocity[c], n), 0.0) * area;
              flux = sign_of(bf.dir) * out;
              zero_gradient_mass += out;
              zero_gradient_area += area;
            }
          } else if constexpr (std::is_same_v<K, Wall>) {
            f.boundary.velocity[b] = kind.velocity - n * dot(kind.velocity, n);
            if (kind.thermal == ThermalKind::FixedTemperature) f.boundary.temperature[b] = kind.temperature;
            flux = 0.0;
          } else {
            f.boundary.velocity[b] = f.velocity[c] - n * dot(f.velocity[c], n);
            flux = 0.0;
          }
        },
        spec.kind);
  }

  // Balance outflow against inflow: prescribed outlets scale when they carry everything,
  // zero-gradient outlets take the remainder.
  const bool has_zero_gradient = zero_gradient_area > 0.0;
  double prescribed_scale = 1.0;
  double zero_gradient_scale = 0.0;
  double zero_gradient_uniform = 0.0;
  if (!has_zero_gradient) {
    prescribed_scale = prescribed_mass > 0.0 ? inflow_mass / prescribed_mass : 0.0;
  } else {
    const double remainder = std::max(inflow_mass - prescribed_mass, 0.0);
    if (zero_gradient_mass > 0.0) {
      zero_gradient_scale = remainder / zero_gradient_mass;
    } else {
      zero_gradient_uniform = remainder / zero_gradient_area;
    }
  }
  for (std::size_t b = 0; b < faces.size(); ++b) {
    const auto& bf = faces[b];
    const auto* out = std::get_if<OutletFlow>(&bcs.for_patch(bf.patch).kind);
    if (out == nullptr) continue;
    double& flux = f.mass_flux.at(axis_of(bf.dir), mesh.face_index(bf.cell, bf.dir));
    if (out->flow) {
      flux *= prescribed_scale;
    } else if (zero_gradient_mass > 0.0) {
      flux *= zero_gradient_scale;
    } else {
      flux = sign_of(bf.dir) * zero_gradient_uniform * mesh.face_area(bf.cell, bf.dir);
    }
  }
}

void apply_boundary(FieldSet& fields, const Mesh& mesh, const std::vector<BoundarySpec>& specs,
                    const FluidProps& fluid) {
  apply_boundary(fields, mesh, BoundaryConditions(mesh, specs), fluid);
}

std::vector<EdgeKind> classify_edges(const Mesh& mesh, const CellMask& mask, const BoundaryConditions& bcs) {
  std::vector<EdgeKind> kinds(mask.edges.size(), EdgeKind::Interface);
  for (std::size_t e = 0; e < mask.edges.size(); ++e) {
    const int b = mask.edges[e].boundary_face;
    if (b < 0) continue;
    const auto& kind = bcs.for_face(mesh, b).kind;
    if (std::holds_alternative<Wall>(kind)) {
      kinds[e] = EdgeKind::Wall;
    } else if (std::holds_alternative<VelocityInlet>(kind)) {
      kinds[e] = EdgeKind::Inlet;
    } else if (std::holds_alternative<OutletFlow>(kind)) {
      kinds[e] = EdgeKind::Outlet;
    } else {
      kinds[e] = EdgeKind::Symmetry;
    }
  }
  return kinds;
}

double net_boundary_outflow(const Mesh& mesh, const FaceField& mass_flux) {
  double net = 0.0;
  for (const auto& bf : mesh.boundary_faces()) net += outward_flux(mesh, mass_flux, bf.cell, bf.dir);
  return net;
}

}  // namespace dtcfd
