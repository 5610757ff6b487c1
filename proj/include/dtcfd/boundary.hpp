#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dtcfd/fields.hpp"
#include "dtcfd/mesh.hpp"

namespace dtcfd {

/// Fixed-velocity inflow carrying temperature and turbulence quantities.
struct VelocityInlet {
  Vec3 velocity;             ///< [m/s]
  double temperature = 313.15;
  double k = 1e-3;           ///< [m2/s2]
  double epsilon = 1e-3;     ///< [m2/s3]
  /// Optional per-face velocity as a function of the face centre; overrides `velocity`.
  std::function<Vec3(const Vec3&)> profile;
};

/// Outflow with a prescribed volumetric flow [m3/s], or zero-gradient when `flow` is empty.
struct OutletFlow {
  std::optional<double> flow;
};

enum class ThermalKind { Adiabatic, FixedFlux, FixedTemperature, Conjugate };

/// No-slip wall, optionally moving tangentially.
struct Wall {
  Vec3 velocity;
  ThermalKind thermal = ThermalKind::Adiabatic;
  double heat_flux = 0.0;    ///< [W/m2] into the domain, FixedFlux only
  double temperature = 0.0;  ///< [K], FixedTemperature only
};

struct Symmetry {};

using BoundaryKind = std::variant<VelocityInlet, OutletFlow, Wall, Symmetry>;

struct BoundarySpec {
  std::string patch;
  BoundaryKind kind;
};

/// Relative tolerance on the prescribed inflow / outflow balance.
inline constexpr double kFlowBalanceTolerance = 1e-3;

/// Boundary specs bound to the patches of one mesh.
class BoundaryConditions {
 public:
  /// Validates coverage (exactly one spec per patch), inlet turbulence, thermal settings and
  /// the steady mass balance of prescribed flows. Throws Error listing the offending patch.
  BoundaryConditions(const Mesh& mesh, std::vector<BoundarySpec> specs);

  const std::vector<BoundarySpec>& specs() const { return specs_; }
  const BoundarySpec& for_patch(int patch) const { return specs_[static_cast<std::size_t>(spec_of_patch_[static_cast<std::size_t>(patch)])]; }
  const BoundarySpec& for_face(const Mesh& mesh, int boundary_face) const {
    return for_patch(mesh.boundary_faces()[static_cast<std::size_t>(boundary_face)].patch);
  }

  /// Volumetric flow entering through inlets [m3/s].
  double total_inflow() const { return inflow_; }
  /// Sum of prescribed outlet flows before balancing [m3/s].
  double prescribed_outflow() const { return prescribed_outflow_; }

 private:
  std::vector<BoundarySpec> specs_;
  std::vector<int> spec_of_patch_;
  double inflow_ = 0.0;
  double prescribed_outflow_ = 0.0;
};

/// Inlet face velocity (profile or uniform).
Vec3 inlet_velocity(const VelocityInlet& inlet, const Vec3& face_center);

/// Fixes boundary face values (inlet Dirichlet data, symmetry mirror, zero-gradient outlets)
/// and boundary mass fluxes. Outlet fluxes are balanced so the total outflow equals the inflow.
void apply_boundary(FieldSet& fields, const Mesh& mesh, const BoundaryConditions& bcs, const FluidProps& fluid);

/// Convenience overload that binds `specs` first.
void apply_boundary(FieldSet& fields, const Mesh& mesh, const std::vector<BoundarySpec>& specs,
                    const FluidProps& fluid);

/// Role of one edge face of an equation's cell mask. Interface marks a fluid face shared with
/// a solid cell, which behaves as a stationary no-slip wall for the flow equations.
enum class EdgeKind { Wall, Inlet, Outlet, Symmetry, Interface };

std::vector<EdgeKind> classify_edges(const Mesh& mesh, const CellMask& mask, const BoundaryConditions& bcs);

/// Signed net mass flow out of the domain through all boundary faces [kg/s].
double net_boundary_outflow(const Mesh& mesh, const FaceField& mass_flux);

/// Mass flux leaving cell `c` through face `d` [kg/s].
inline double outward_flux(const Mesh& mesh, const FaceField& flux, std::size_t c, Dir d) {
  return sign_of(d) * flux.at(axis_of(d), mesh.face_index(c, d));
}

}  // namespace dtcfd
