#pragma once

#include <span>
#include <string>
#include <vector>

#include "dtcfd/linear.hpp"
#include "dtcfd/mesh.hpp"

namespace dtcfd {

enum class AdvectionScheme { Upwind, HighResolution };
enum class Limiter { VanLeer, Minmod, Superbee, VanAlbada };

struct SchemeChoice {
  AdvectionScheme advection = AdvectionScheme::HighResolution;
  Limiter limiter = Limiter::VanLeer;
};

/// Flux limiter psi(r), bounded to [0, 2].
double limiter_value(Limiter limiter, double r);

/// Limited face value from the upwind cell value, downwind cell value and the upwind-cell
/// gradient projected on the upwind-to-downwind vector. The result always lies between
/// `upwind` and `downwind`.
double high_resolution_face_value(double upwind, double downwind, double upwind_gradient_dot_d, Limiter limiter);

/// Linearised condition on one edge face of the equation's cell mask. The face contributes
///   conductance * (value - phi_P) + flux
/// to the cell balance, plus convection: outflow carries phi_P, inflow carries `value`.
/// `value` is also the face value used for gradients.
struct BoundaryCoeffs {
  double value = 0.0;
  double conductance = 0.0;
  double flux = 0.0;

  static BoundaryCoeffs dirichlet(double v, double conductance) { return {v, conductance, 0.0}; }
  static BoundaryCoeffs zero_gradient(double cell_value) { return {cell_value, 0.0, 0.0}; }
};

/// Inputs of one steady advection-diffusion equation
///   sum_f (c F_f phi_f - D_f (phi_N - phi_P)) = source - sink * phi_P
/// over the cells of `mask`.
struct TransportProblem {
  const Mesh* mesh = nullptr;
  const CellMask* mask = nullptr;
  std::span<const double> phi;                ///< current iterate (relaxation, deferred correction)
  const FaceField* mass_flux = nullptr;       ///< null for pure diffusion
  double flux_factor = 1.0;                   ///< c, e.g. cp for the energy equation
  const FaceField* conductance = nullptr;     ///< D_f on faces between masked cells
  std::span<const BoundaryCoeffs> edges;      ///< parallel to mask->edges
  std::span<const double> source;             ///< volume-integrated explicit source
  std::span<const double> sink;               ///< volume-integrated implicit sink coefficient >= 0
  SchemeChoice scheme;
  double relaxation = 1.0;                    ///< implicit under-relaxation factor in (0, 1]
  std::span<const double> pseudo_time;        ///< optional per-cell rho V / dt
  /// Subtracts the net outflow c sum_f F_f from the diagonal, so a uniform field is a fixed
  /// point of the convection operator even while the fluxes do not yet conserve mass.
  bool continuity_correction = false;
};

struct TransportDiagnostics {
  double max_bound_violation = 0.0;  ///< largest excursion of a face value outside its bracket
};

/// Assembles the relaxed linear system. Throws Error for relaxation outside (0, 1] or
/// negative conductances.
LinearSystem assemble_advection_diffusion(const TransportProblem& problem, TransportDiagnostics* diagnostics = nullptr);

/// D_f = Gamma_f A_f / delta_f with linearly interpolated cell diffusivities.
FaceField face_conductance(const Mesh& mesh, const CellMask& mask, std::span<const double> gamma);

/// D_f = A_f / (d_P / Gamma_P + d_N / Gamma_N) with per-axis cell diffusivities, so the flux
/// is continuous across material interfaces.
FaceField face_conductance_harmonic(const Mesh& mesh, const CellMask& mask, std::span<const Vec3> gamma);

std::string to_string(AdvectionScheme s);
std::string to_string(Limiter l);

}  // namespace dtcfd
