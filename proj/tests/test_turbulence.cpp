#include <doctest.h>

#include <cmath>
#include <random>

#include "dtcfd/boundary.hpp"
#include "dtcfd/gradient.hpp"
#include "dtcfd/turbulence.hpp"
#include "support.hpp"

using namespace dtcfd;

TEST_CASE("production of simple velocity gradients") {
  Tensor3 zero;
  CHECK(production(zero, 1.3e-3, 1.127, 0.0) == 0.0);

  const double s = 4.0, mu = 2.5e-3;
  Tensor3 shear;
  shear(0, 1) = s;
  CHECK(production(shear, mu, 1.127, 0.2) == doctest::Approx(mu * s * s).epsilon(1e-15));

  const double omega = 3.3;
  Tensor3 rotation;
  rotation(0, 1) = -omega;
  rotation(1, 0) = omega;
  CHECK(std::abs(production(rotation, 0.7, 1.127, 0.5)) <= 1e-10);

  Tensor3 stretch;
  stretch(0, 0) = 2.0;
  stretch(1, 1) = -1.0;
  stretch(2, 2) = -1.0;
  CHECK(production(stretch, 1.0, 1.0, 0.3) == doctest::Approx(2.0 * (4.0 + 1.0 + 1.0)).epsilon(1e-15));
}

namespace {

std::vector<Tensor3> velocity_gradients(const Mesh& m, const CellMask& mask, const std::vector<Vec3>& u) {
  std::vector<Vec3> edges(mask.edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) edges[e] = u[mask.edges[e].cell];
  return gradient(m, u, mask, edges);
}

}  // namespace

TEST_CASE("solid-body rotation field produces nothing") {
  const Mesh m = test::box_mesh(12, 12, 3, 2.0, 2.0, 0.5);
  const CellMask mask = fluid_mask(m);
  const double omega = 1.7;
  std::vector<Vec3> u(m.cell_count());
  for (std::size_t c = 0; c < m.cell_count(); ++c) {
    const Vec3 p = m.center(c) - Vec3{1.0, 1.0, 0.0};
    u[c] = {-omega * p.y, omega * p.x, 0.0};
  }
  const auto g = velocity_gradients(m, mask, u);
  const std::vector<double> mu(m.cell_count(), 0.4), k(m.cell_count(), 0.0);
  const auto phi = production(g, mu, 1.127, k, mask);
  for (std::size_t c = 0; c < m.cell_count(); ++c) {
    const auto q = m.ijk(c);
    if (q[0] == 0 || q[0] == 11 || q[1] == 0 || q[1] == 11) continue;
    CHECK(std::abs(phi[c]) <= 1e-10);
  }
}

TEST_CASE("production is Galilean invariant") {
  const Mesh m = test::box_mesh(6, 5, 4);
  const CellMask mask = fluid_mask(m);
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> u01(-1.0, 1.0);
  std::vector<Vec3> u(m.cell_count()), shifted(m.cell_count());
  std::vector<double> mu(m.cell_count()), k(m.cell_count());
  const Vec3 frame{12.5, -3.25, 7.0};
  for (std::size_t c = 0; c < m.cell_count(); ++c) {
    u[c] = {u01(rng), u01(rng), u01(rng)};
    shifted[c] = u[c] + frame;
    mu[c] = 1e-3 * (2.0 + u01(rng));
    k[c] = 0.1 * (1.5 + u01(rng));
  }
  const auto a = production(velocity_gradients(m, mask, u), mu, 1.127, k, mask);
  const auto b = production(velocity_gradients(m, mask, shifted), mu, 1.127, k, mask);
  double scale = 0.0;
  for (double v : a) scale = std::max(scale, std::abs(v));
  for (std::size_t c = 0; c < a.size(); ++c) CHECK(std::abs(a[c] - b[c]) <= 1e-12 * scale);
}

TEST_CASE("log-law wall shear") {
  const FluidProps air;
  const double rho = air.density, mu = air.viscosity, kappa = 0.41, e = 9.0;
  CHECK(log_law_wall_shear(0.0, 0.01, rho, mu, kappa, e) == 0.0);

  SUBCASE("inverse evaluation reproduces the input speed") {
    const double u = 1.0, d = 0.01;
    const double tau = log_law_wall_shear(u, d, rho, mu, kappa, e);
    const double u_tau = std::sqrt(tau / rho);
    const double y_plus = rho * u_tau * d / mu;
    REQUIRE(y_plus > log_law_crossover(kappa, e));
    const double u_back = u_tau / kappa * std::log(e * y_plus);
    CHECK(std::abs(u_back - u) <= 1e-6 * u);
  }
  SUBCASE("doubling the speed raises the shear by a factor between 2 and 4") {
    const double t1 = log_law_wall_shear(1.0, 0.01, rho, mu, kappa, e);
    const double t2 = log_law_wall_shear(2.0, 0.01, rho, mu, kappa, e);
    CHECK(t2 / t1 > 2.0);
    CHECK(t2 / t1 < 4.0);
  }
  SUBCASE("viscous sublayer") {
    const double u = 1e-4, d = 1e-3;
    CHECK(log_law_wall_shear(u, d, rho, mu, kappa, e) == doctest::Approx(mu * u / d).epsilon(1e-14));
  }
  SUBCASE("crossover solves y+ = ln(E y+) / kappa") {
    const double y = log_law_crossover(kappa, e);
    CHECK(y == doctest::Approx(std::log(e * y) / kappa).epsilon(1e-12));
    CHECK(y > 10.0);
    CHECK(y < 12.0);
  }
}

namespace {

/// Uniform stream along x in a duct with symmetry side walls, inlet at x = 0 and a
/// zero-gradient outlet at x = length.
struct Duct {
  Mesh mesh;
  CellMask mask;
  FluidProps fluid;
  TurbulenceSettings turb;
  BoundaryConditions bcs;
  std::vector<EdgeKind> kinds;
  FieldSet f;

  static std::vector<BoundarySpec> specs(double u, double k0, double eps0) {
    return {{"xmin", VelocityInlet{{u, 0.0, 0.0}, 313.15, k0, eps0, {}}},
            {"xmax", OutletFlow{}},
            {"ymin", Symmetry{}},
            {"ymax", Symmetry{}},
            {"zmin", Symmetry{}},
            {"zmax", Symmetry{}}};
  }

  Duct(int n, double length, double u, double k0, double eps0, double k_init, double eps_init)
      : mesh(test::box_mesh(n, 1, 1, length, 0.1, 0.1)),
        mask(fluid_mask(mesh)),
        bcs(mesh, specs(u, k0, eps0)),
        kinds(classify_edges(mesh, mask, bcs)) {
    turb.k_floor = 1e-12;
    turb.eps_floor = 1e-12;
    f = init_stagnant(mesh, fluid, 313.15, turb);
    for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
      f.velocity[c] = {u, 0.0, 0.0};
      f.k[c] = k_init;
      f.epsilon[c] = eps_init;
    }
    for (auto& v : f.mass_flux.axis[0]) v = fluid.density * u * 0.01;
    apply_boundary(f, mesh, bcs, fluid);
    update_viscosity(mesh, f, fluid, turb);
  }

  KEpsilonResult step(double relax = 1.0) {
    const std::vector<Tensor3> grad(mesh.cell_count());
    const WallTreatment wall = wall_functions(mesh, mask, kinds, f, fluid, turb);
    return solve_k_epsilon(mesh, mask, kinds, f, grad, wall, fluid, turb, {AdvectionScheme::Upwind, Limiter::VanLeer},
                           relax, relax, {1e-14, 0.0, 2000});
  }
};

}  // namespace

TEST_CASE("advection-destruction decay along a shear-free duct matches the closed form") {
  const double u = 1.0, k0 = 0.01, eps0 = 0.01, length = 1.0;
  Duct duct(400, length, u, k0, eps0, k0, eps0);
  for (int it = 0; it < 400; ++it) duct.step();
  const double c2 = duct.turb.constants.c2;
  double worst = 0.0;
  for (std::size_t c = 0; c < duct.mesh.cell_count(); ++c) {
    const double t = duct.mesh.center(c).x / u;
    const double k_exact = k0 * std::pow(1.0 + (c2 - 1.0) * eps0 * t / k0, -1.0 / (c2 - 1.0));
    worst = std::max(worst, std::abs(duct.f.k[c] - k_exact) / k_exact);
    if (c > 0) CHECK(duct.f.k[c] < duct.f.k[c - 1]);
  }
  CHECK(worst < 0.01);
}

TEST_CASE("k decreases every iteration without production") {
  Duct duct(20, 1.0, 0.0, 1e-3, 1e-3, 0.5, 0.5);
  double previous = 0.0;
  for (std::size_t c = 0; c < duct.mesh.cell_count(); ++c) previous += duct.f.k[c];
  for (int it = 0; it < 10; ++it) {
    duct.step(0.8);
    double total = 0.0;
    for (std::size_t c = 0; c < duct.mesh.cell_count(); ++c) {
      total += duct.f.k[c];
      CHECK(duct.f.k[c] >= duct.turb.k_floor);
      CHECK(duct.f.epsilon[c] >= duct.turb.eps_floor);
      CHECK(duct.f.mu_t[c] >= 0.0);
    }
    CHECK(total < previous);
    previous = total;
  }
}

TEST_CASE("floors hold under strong destruction") {
  Duct duct(10, 1.0, 0.0, 1e-3, 1e-3, 1e-3, 50.0);
  duct.turb.k_floor = 1e-4;
  duct.turb.eps_floor = 1e-4;
  for (int it = 0; it < 5; ++it) {
    duct.step();
    for (std::size_t c = 0; c < duct.mesh.cell_count(); ++c) {
      CHECK(duct.f.k[c] >= 1e-4);
      CHECK(duct.f.epsilon[c] >= 1e-4);
    }
  }
}

TEST_CASE("wall functions on a sheared wall cell") {
  const Mesh m = test::box_mesh(2, 2, 1, 1.0, 0.02, 1.0);
  const CellMask mask = fluid_mask(m);
  std::vector<BoundarySpec> specs = test::wall_specs(m);
  for (auto& s : specs) {
    if (s.patch != "ymin") s.kind = Symmetry{};
  }
  const BoundaryConditions bcs(m, specs);
  const auto kinds = classify_edges(m, mask, bcs);
  FluidProps fluid;
  TurbulenceSettings turb;
  FieldSet f = init_stagnant(m, fluid, 313.15, turb);
  for (std::size_t c = 0; c < m.cell_count(); ++c) {
    f.velocity[c] = {1.0, 0.0, 0.0};
    f.k[c] = 0.01;
  }
  apply_boundary(f, m, bcs, fluid);
  const WallTreatment w = wall_functions(m, mask, kinds, f, fluid, turb);
  REQUIRE(w.edge.size() == 2);
  for (std::size_t i = 0; i < w.edge.size(); ++i) {
    CHECK(w.distance[i] == doctest::Approx(0.005).epsilon(1e-14));
    CHECK(w.tau_w[i] == doctest::Approx(log_law_wall_shear(1.0, 0.005, fluid.density, fluid.viscosity, 0.41, 9.0)).epsilon(1e-12));
    CHECK(w.u_tau[i] == doctest::Approx(std::sqrt(w.tau_w[i] / fluid.density)).epsilon(1e-12));
  }
  const double cmu = turb.constants.c_mu;
  const double eps_wall = std::pow(cmu, 0.75) * std::pow(0.01, 1.5) / (0.41 * 0.005);
  for (std::size_t c = 0; c < m.cell_count(); ++c) {
    if (m.ijk(c)[1] == 0) {
      CHECK(w.wall_cell[c] != 0);
      CHECK(w.wall_epsilon[c] == doctest::Approx(eps_wall).epsilon(1e-12));
    } else {
      CHECK(w.wall_cell[c] == 0);
    }
  }
}
