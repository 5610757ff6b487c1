#pragma once

#include <string>
#include <vector>

#include "dtcfd/mesh.hpp"

namespace dtcfd {

struct ScalarField {
  std::string name;
  std::string units;
  std::vector<double> values;

  double& operator[](std::size_t c) { return values[c]; }
  double operator[](std::size_t c) const { return values[c]; }
};

struct VectorField {
  std::string name;
  std::string units;
  std::vector<Vec3> values;

  Vec3& operator[](std::size_t c) { return values[c]; }
  const Vec3& operator[](std::size_t c) const { return values[c]; }
};

/// Constant-property fluid with Boussinesq buoyancy. Defaults: dry air at 40 degC.
struct FluidProps {
  double density = 1.127;                 ///< reference density [kg/m3]
  double viscosity = 1.91e-5;             ///< molecular viscosity [Pa s]
  double specific_heat = 1005.0;          ///< [J/(kg K)]
  double conductivity = 0.027;            ///< [W/(m K)]
  double expansivity = 3.193e-3;          ///< [1/K]
  double reference_temperature = 313.15;  ///< [K]
  Vec3 gravity{0.0, -9.81, 0.0};          ///< [m/s2]

  void validate() const;
};

/// Heat-generating solid with orthotropic conductivity: `conductivity_axial` along
/// `axial_axis`, `conductivity_radial` along the two transverse axes.
struct SolidProps {
  int region = 0;
  std::string name;
  double conductivity_axial = 1.0;   ///< [W/(m K)]
  double conductivity_radial = 1.0;  ///< [W/(m K)]
  int axial_axis = 1;
  double heat_source = 0.0;          ///< [W/m3]
  double rho_cp = 2.0e6;             ///< [J/(m3 K)], pseudo-time scaling only

  double conductivity(int axis) const { return axis == axial_axis ? conductivity_axial : conductivity_radial; }
  void validate() const;
};

/// Standard k-epsilon model constants.
struct TurbConstants {
  double c_mu = 0.09;
  double c1 = 1.44;
  double c2 = 1.92;
  double sigma_k = 1.0;
  double sigma_eps = 1.3;

  void validate() const;
};

struct TurbulenceSettings {
  bool enabled = true;
  TurbConstants constants;
  double k_floor = 1e-4;             ///< [m2/s2]
  double eps_floor = 1e-4;           ///< [m2/s3]
  double mut_ratio_max = 1e5;        ///< clip for mu_t / mu
  double kappa = 0.41;
  double log_law_e = 9.0;
  double prandtl_turbulent = 0.9;    ///< turbulent heat diffusivity mu_t cp / Pr_t
};

/// Per-boundary-face values (indexed like Mesh::boundary_faces()).
struct BoundaryValues {
  std::vector<Vec3> velocity;
  std::vector<double> temperature;
  std::vector<double> k;
  std::vector<double> epsilon;
};

/// Every unknown and derived quantity of one flow state.
struct FieldSet {
  VectorField velocity;   ///< [m/s]
  ScalarField pressure;   ///< gauge [Pa]
  ScalarField temperature;///< [K]
  ScalarField k;          ///< [m2/s2]
  ScalarField epsilon;    ///< [m2/s3]
  ScalarField mu_t;       ///< [Pa s]
  ScalarField mu_eff;     ///< [Pa s]
  VectorField buoyancy;   ///< [N/m3]
  FaceField mass_flux;    ///< [kg/s], positive along +axis
  BoundaryValues boundary;

  /// True when no stored cell value is NaN or infinite.
  bool finite() const;
};

/// Quiescent initial state at uniform temperature `t0` [K] with k and epsilon at their floors.
/// Throws Error for t0 <= 0.
FieldSet init_stagnant(const Mesh& mesh, const FluidProps& fluid, double t0,
                       const TurbulenceSettings& turbulence = {});

/// mu_t = c_mu rho k^2 / eps, clipped to mut_ratio_max * mu.
double eddy_viscosity(double k, double eps, double density, double c_mu, double mu_t_max);
inline double effective_viscosity(double mu, double mu_t) { return mu + mu_t; }

}  // namespace dtcfd
