#pragma once

#include <span>
#include <vector>

#include "dtcfd/boundary.hpp"
#include "dtcfd/fields.hpp"
#include "dtcfd/linear.hpp"
#include "dtcfd/transport.hpp"

namespace dtcfd {

/// Phi = mu_eff grad(u) : (grad(u) + grad(u)^T) - 2/3 div(u) (mu_eff div(u) + rho k), per unit volume.
double production(const Tensor3& grad_u, double mu_eff, double density, double k);

/// Production over all cells of `mask` from a velocity-gradient field.
std::vector<double> production(std::span<const Tensor3> grad_u, std::span<const double> mu_eff, double density,
                               std::span<const double> k, const CellMask& mask);

/// Log-law wall shear [Pa] for tangential speed `u_t` [m/s] at wall distance `d` [m]:
/// solves u_t / u_tau = ln(E y+) / kappa for u_tau, falling back to the viscous law mu u_t / d
/// below the intersection y+ of both laws.
double log_law_wall_shear(double u_t, double d, double density, double viscosity, double kappa, double log_law_e);

/// Intersection of the viscous and logarithmic laws, y+ = ln(E y+) / kappa.
double log_law_crossover(double kappa, double log_law_e);

/// Wall treatment for every wall-like edge (walls and fluid-solid interfaces) of the fluid mask.
struct WallTreatment {
  std::vector<std::size_t> edge;   ///< fluid-mask edge index
  std::vector<double> distance;    ///< [m]
  std::vector<double> tau_w;       ///< [Pa]
  std::vector<double> u_tau;       ///< [m/s]
  std::vector<double> y_plus;
  std::vector<double> edge_viscosity;  ///< per fluid-mask edge, tau_w d / u_t on walls, 0 elsewhere
  std::vector<double> wall_epsilon;    ///< per cell, fixed epsilon in wall cells, 0 elsewhere
  std::vector<double> wall_production; ///< per cell, volume-integrated production in wall cells [W]
  std::vector<std::uint8_t> wall_cell;
  std::size_t low_y_plus = 0;          ///< wall faces with y+ < 0.5 (outside wall-function validity)
};

/// Evaluates wall shear, y+ and the wall-cell k and epsilon treatment. When turbulence is
/// disabled the laminar shear mu u_t / d is reported and no k/epsilon terms are produced.
WallTreatment wall_functions(const Mesh& mesh, const CellMask& mask, std::span<const EdgeKind> kinds,
                             const FieldSet& fields, const FluidProps& fluid, const TurbulenceSettings& turbulence);

struct KEpsilonResult {
  SolveResult k_solve;
  SolveResult eps_solve;
  double k_residual = 0.0;    ///< raw L1 residual of the floor-bounded k system at the previous iterate
  double eps_residual = 0.0;
  std::vector<double> production;  ///< per unit volume [W/m3]
};

/// One k and one epsilon update followed by flooring and the eddy-viscosity refresh. Destruction
/// terms are implicit; wall cells take the wall-function epsilon and production.
KEpsilonResult solve_k_epsilon(const Mesh& mesh, const CellMask& mask, std::span<const EdgeKind> kinds,
                               FieldSet& fields, std::span<const Tensor3> grad_u, const WallTreatment& wall,
                               const FluidProps& fluid, const TurbulenceSettings& turbulence,
                               const SchemeChoice& scheme, double relaxation_k, double relaxation_eps,
                               const SolveOptions& options, double pseudo_time_step = 0.0);

/// Recomputes mu_t and mu_eff from k and epsilon on fluid cells.
void update_viscosity(const Mesh& mesh, FieldSet& fields, const FluidProps& fluid, const TurbulenceSettings& turbulence);

}  // namespace dtcfd
