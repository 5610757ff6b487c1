#include "dtcfd/fields.hpp"

#include <algorithm>
#include <cmath>

namespace dtcfd {

void FluidProps::validate() const {
  if (!(density > 0.0)) throw Error("fluid density must be > 0");
  if (!(viscosity > 0.0)) throw Error("fluid viscosity must be > 0");
  if (!(specific_heat > 0.0)) throw Error("fluid specific heat must be > 0");
  if (!(conductivity > 0.0)) throw Error("fluid conductivity must be > 0");
  if (!(expansivity >= 0.0)) throw Error("fluid expansivity must be >= 0");
  if (!(reference_temperature > 0.0)) throw Error("reference temperature must be > 0 K");
}

void SolidProps::validate() const {
  if (!(conductivity_axial > 0.0) || !(conductivity_radial > 0.0)) {
    throw Error("solid '" + name + "': conductivities must be > 0");
  }
  if (!(heat_source >= 0.0)) throw Error("solid '" + name + "': heat source must be >= 0");
  if (axial_axis < 0 || axial_axis > 2) throw Error("solid '" + name + "': axial axis must be 0, 1 or 2");
}

void TurbConstants::validate() const {
  // c_mu = 0 is allowed: it switches the eddy viscosity off.
  if (!(c_mu >= 0.0) || !(c1 > 0.0) || !(c2 > 0.0) || !(sigma_k > 0.0) || !(sigma_eps > 0.0)) {
    throw Error("turbulence constants must be positive");
  }
}

bool FieldSet::finite() const {
  auto ok = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };
  for (const auto& u : velocity.values) {
    if (!std::isfinite(u.x) || !std::isfinite(u.y) || !std::isfinite(u.z)) return false;
  }
  return ok(pressure.values) && ok(temperature.values) && ok(k.values) && ok(epsilon.values) &&
         ok(mu_t.values);
}

double eddy_viscosity(double k, double eps, double density, double c_mu, double mu_t_max) {
  return std::min(c_mu * density * k * k / eps, mu_t_max);
}

FieldSet init_stagnant(const Mesh& mesh, const FluidProps& fluid, double t0, const TurbulenceSettings& turb) {
  if (!(t0 > 0.0)) throw Error("initial temperature must be > 0 K");
  const std::size_t n = mesh.cell_count();
  FieldSet f;
  f.velocity = {"velocity", "m/s", std::vector<Vec3>(n)};
  f.pressure = {"p", "Pa", std::vector<double>(n, 0.0)};
  f.temperature = {"T", "K", std::vector<double>(n, 0.0)};
  f.k = {"K", "m2/s2", std::vector<double>(n, 0.0)};
  f.epsilon = {"eps", "m2/s3", std::vector<double>(n, 0.0)};
  f.mu_t = {"mu_t", "Pa s", std::vector<double>(n, 0.0)};
  f.mu_eff = {"mu_eff", "Pa s", std::vector<double>(n, 0.0)};
  f.buoyancy = {"buoyancy", "N/m3", std::vector<Vec3>(n)};
  f.mass_flux = mesh.make_face_field(0.0);

  const double mu_t = turb.enabled ? eddy_viscosity(turb.k_floor, turb.eps_floor, fluid.density,
                                                    turb.constants.c_mu, turb.mut_ratio_max * fluid.viscosity)
                                   : 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    if (!mesh.is_active(c)) continue;
    f.temperature[c] = t0;
    if (!mesh.is_fluid(c)) continue;
    f.k[c] = turb.k_floor;
    f.epsilon[c] = turb.eps_floor;
    f.mu_t[c] = mu_t;
    f.mu_eff[c] = effective_viscosity(fluid.viscosity, mu_t);
  }
  const std::size_t nb = mesh.boundary_faces().size();
  f.boundary.velocity.assign(nb, Vec3{});
  f.boundary.temperature.assign(nb, t0);
  f.boundary.k.assign(nb, turb.k_floor);
  f.boundary.epsilon.assign(nb, turb.eps_floor);
  return f;
}

}  // namespace dtcfd
