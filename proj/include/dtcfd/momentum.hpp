#pragma once

#include <array>
#include <span>
#include <vector>

#include "dtcfd/boundary.hpp"
#include "dtcfd/fields.hpp"
#include "dtcfd/linear.hpp"
#include "dtcfd/transport.hpp"

namespace dtcfd {

struct MomentumProblem {
  const Mesh* mesh = nullptr;
  const CellMask* mask = nullptr;  ///< fluid cells
  const BoundaryConditions* bcs = nullptr;
  const FluidProps* fluid = nullptr;
  const FieldSet* fields = nullptr;
  /// Per mask edge: viscosity used for the tangential wall shear (wall functions). Empty means
  /// the cell's effective viscosity.
  std::span<const double> wall_viscosity;
  SchemeChoice scheme;
  double relaxation = 0.7;
  bool transpose_term = true;
  double pseudo_time_step = 0.0;  ///< false time step [s]; 0 disables
};

struct MomentumAssembly {
  std::array<LinearSystem, 3> systems;
  /// Cell volume over relaxed diagonal, per component [m3 s/kg].
  std::array<std::vector<double>, 3> d;
  std::vector<Vec3> grad_p;
  std::vector<EdgeKind> edge_kinds;
};

/// Assembles the three velocity-component systems with pressure gradient, buoyancy and the
/// explicit transpose-gradient stress as sources. Throws Error when a diagonal vanishes.
MomentumAssembly assemble_momentum(const MomentumProblem& problem);

/// Pressure at each mask edge face, extrapolated from the cell with the hydrostatic gradient.
std::vector<double> pressure_edge_values(const Mesh& mesh, const CellMask& mask, const FieldSet& fields);

/// Green-Gauss pressure gradient over the fluid cells.
std::vector<Vec3> pressure_gradient(const Mesh& mesh, const CellMask& mask, const FieldSet& fields);

/// Velocity at each mask edge face (inlet data, wall velocity, mirrored or extrapolated value).
std::vector<Vec3> velocity_edge_values(const Mesh& mesh, const CellMask& mask, const FieldSet& fields,
                                       std::span<const EdgeKind> kinds);

/// Momentum-interpolated mass fluxes on faces between two mask cells. Boundary faces keep
/// their values; faces between a mask cell and a cell outside the mask are set to zero.
void rhie_chow_face_flux(const Mesh& mesh, const CellMask& mask, const VectorField& velocity,
                         const ScalarField& pressure, std::span<const Vec3> grad_p,
                         const std::array<std::vector<double>, 3>& d, double density, FaceField& mass_flux);

/// Net mass outflow of every cell of the mask [kg/s]; zero elsewhere.
std::vector<double> mass_imbalance(const Mesh& mesh, const CellMask& mask, const FaceField& mass_flux);

struct PressureCorrectionResult {
  std::vector<double> p_prime;
  SolveResult solve;
  double imbalance_before = 0.0;  ///< sum of |cell imbalance| before the correction [kg/s]
  double imbalance_after = 0.0;   ///< max |cell imbalance| after the correction [kg/s]
};

/// Solves the pressure-correction equation (Neumann everywhere, one pinned cell per connected
/// fluid region) and corrects fluxes, and, when `correct_fields` is set, cell velocities and
/// the pressure with under-relaxation `relaxation`.
PressureCorrectionResult pressure_correction(const Mesh& mesh, const CellMask& mask, FieldSet& fields,
                                             const std::array<std::vector<double>, 3>& d, double density,
                                             double relaxation, const SolveOptions& options,
                                             bool correct_fields = true);

}  // namespace dtcfd
