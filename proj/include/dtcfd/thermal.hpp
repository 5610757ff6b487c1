#pragma once

#include <span>
#include <vector>

#include "dtcfd/boundary.hpp"
#include "dtcfd/fields.hpp"
#include "dtcfd/linear.hpp"
#include "dtcfd/transport.hpp"

namespace dtcfd {

/// Static enthalpy h = cp T [J/kg].
inline double enthalpy(double temperature, double cp) { return cp * temperature; }
/// h + |u|^2 / 2 [J/kg].
inline double total_enthalpy(double temperature, double cp, const Vec3& u) {
  return enthalpy(temperature, cp) + 0.5 * dot(u, u);
}

/// Boussinesq body force -rho_ref beta (T - T_ref) g [N/m3].
Vec3 buoyancy_force(double temperature, const FluidProps& fluid);

/// Body force per cell: Boussinesq force in fluid cells, zero elsewhere.
std::vector<Vec3> buoyancy_source(const Mesh& mesh, std::span<const double> temperature, const FluidProps& fluid);

/// Properties of the solid region with id `region`; throws Error when none is declared.
const SolidProps& solid_props(std::span<const SolidProps> solids, int region);

/// Per-axis conductivity of every active cell [W/(m K)]: lambda + cp mu_t / Pr_t in fluid cells,
/// the orthotropic solid conductivity in solid cells.
std::vector<Vec3> cell_conductivity(const Mesh& mesh, const FieldSet& fields, const FluidProps& fluid,
                                    std::span<const SolidProps> solids, const TurbulenceSettings& turbulence);

struct EnergyResult {
  SolveResult solve;
  double residual = 0.0;  ///< raw L1 residual at the previous iterate [W]
};

/// One update of the temperature over fluid and solid cells. Convection acts in the fluid,
/// conduction uses harmonic-mean face conductances, solid regions carry their heat sources.
EnergyResult solve_energy(const Mesh& mesh, const CellMask& active, const BoundaryConditions& bcs, FieldSet& fields,
                          const FluidProps& fluid, std::span<const SolidProps> solids,
                          const TurbulenceSettings& turbulence, const SchemeChoice& scheme, double relaxation,
                          const SolveOptions& options, double pseudo_time_step = 0.0);

/// Global heat balance of a temperature field.
struct EnergyAudit {
  double sources = 0.0;             ///< volumetric heat release [W]
  double boundary_conduction = 0.0; ///< conductive heat entering through boundary faces [W]
  double enthalpy_in = 0.0;         ///< cp-weighted enthalpy flow entering [W]
  double enthalpy_out = 0.0;        ///< cp-weighted enthalpy flow leaving [W]
  double imbalance = 0.0;           ///< sources + conduction - (out - in) [W]
  double relative = 0.0;            ///< |imbalance| / largest gross term
};

EnergyAudit global_energy_audit(const Mesh& mesh, const BoundaryConditions& bcs, const FieldSet& fields,
                                const FluidProps& fluid, std::span<const SolidProps> solids,
                                const TurbulenceSettings& turbulence);

/// Conductive heat flux through every interior face, evaluated separately from the owner and
/// from the neighbour side (half-cell resistances with the face temperature eliminated).
/// Returns the largest absolute difference between both evaluations [W].
double interface_flux_mismatch(const Mesh& mesh, const FieldSet& fields, const FluidProps& fluid,
                               std::span<const SolidProps> solids, const TurbulenceSettings& turbulence);

}  // namespace dtcfd
