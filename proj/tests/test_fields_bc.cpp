#include <doctest.h>

#include <cmath>
#include <limits>

#include "dtcfd/boundary.hpp"
#include "dtcfd/fields.hpp"
#include "dtcfd/thermal.hpp"
#include "support.hpp"

using namespace dtcfd;

TEST_CASE("init_stagnant at 40 degC") {
  const std::vector<RegionBox> boxes{{{{0.0, 0.0, 0.0}, {0.5, 1.0, 1.0}}, CellTag::solid(0)}};
  const Mesh m = test::box_mesh(4, 3, 2, 1.0, 1.0, 1.0, boxes);
  const FluidProps fluid;
  const FieldSet f = init_stagnant(m, fluid, 313.15);
  double v2 = 0.0;
  const double mu_t_floor = 0.09 * 1.127 * 1e-4 * 1e-4 / 1e-4;
  for (std::size_t c = 0; c < m.cell_count(); ++c) {
    CHECK(f.temperature[c] == 313.15);
    CHECK(f.pressure[c] == 0.0);
    v2 += dot(f.velocity[c], f.velocity[c]);
    if (m.is_fluid(c)) {
      CHECK(f.k[c] == 1e-4);
      CHECK(f.epsilon[c] == 1e-4);
      CHECK(f.mu_t[c] == doctest::Approx(mu_t_floor).epsilon(1e-12));
      CHECK(f.mu_t[c] == doctest::Approx(1.01e-5).epsilon(5e-3));
    }
  }
  CHECK(v2 == 0.0);
  CHECK(f.finite());
}

TEST_CASE("init_stagnant rejects non-positive temperatures") {
  const Mesh m = test::box_mesh(2, 2, 1);
  CHECK_THROWS_AS(init_stagnant(m, FluidProps{}, 0.0), Error);
  CHECK_THROWS_AS(init_stagnant(m, FluidProps{}, -5.0), Error);
}

TEST_CASE("field storage round-trip and finiteness") {
  const Mesh m = test::box_mesh(3, 2, 2);
  FieldSet f = init_stagnant(m, FluidProps{}, 300.0);
  for (std::size_t c = 0; c < m.cell_count(); ++c) {
    f.temperature[c] = 300.0 + 0.125 * static_cast<double>(c);
    f.velocity[c] = {static_cast<double>(c), -1.5, 0.25};
  }
  for (std::size_t c = 0; c < m.cell_count(); ++c) {
    CHECK(f.temperature[c] == 300.0 + 0.125 * static_cast<double>(c));
    CHECK(f.velocity[c] == Vec3{static_cast<double>(c), -1.5, 0.25});
  }
  CHECK(f.finite());
  f.k[3] = std::numeric_limits<double>::quiet_NaN();
  CHECK_FALSE(f.finite());
}

TEST_CASE("property validation") {
  FluidProps fluid;
  CHECK_NOTHROW(fluid.validate());
  fluid.expansivity = 0.0;
  CHECK_NOTHROW(fluid.validate());
  fluid.expansivity = -1e-3;
  CHECK_THROWS_AS(fluid.validate(), Error);
  fluid = FluidProps{};
  fluid.conductivity = 0.0;
  CHECK_THROWS_AS(fluid.validate(), Error);

  SolidProps solid;
  CHECK_NOTHROW(solid.validate());
  solid.heat_source = -1.0;
  CHECK_THROWS_AS(solid.validate(), Error);
  solid = SolidProps{};
  solid.conductivity_radial = 0.0;
  CHECK_THROWS_AS(solid.validate(), Error);

  TurbConstants k;
  CHECK_NOTHROW(k.validate());
  k.sigma_eps = 0.0;
  CHECK_THROWS_AS(k.validate(), Error);
}

TEST_CASE("symmetry faces mirror the interior velocity") {
  const Mesh m = test::box_mesh(2, 2, 1);
  std::vector<BoundarySpec> specs = test::wall_specs(m);
  for (auto& s : specs) {
    if (s.patch == "xmin") s.kind = Symmetry{};
  }
  FieldSet f = init_stagnant(m, FluidProps{}, 313.15);
  for (std::size_t c = 0; c < m.cell_count(); ++c) f.velocity[c] = {1.0, 2.0, 3.0};
  apply_boundary(f, m, specs, FluidProps{});
  const auto& patch = m.patches()[static_cast<std::size_t>(m.patch_index("xmin"))];
  REQUIRE(patch.faces.size() == 2);
  for (auto b : patch.faces) {
    CHECK(f.boundary.velocity[b] == Vec3{0.0, 2.0, 3.0});
    const auto& bf = m.boundary_faces()[b];
    CHECK(f.mass_flux.at(0, m.face_index(bf.cell, bf.dir)) == 0.0);
  }
}

namespace {

Mesh fan_mesh() {
  const std::vector<PatchRect> rects{{"fan1", Dir::XPlus, {{1.0, 0.0, 0.0}, {1.0, 0.25, 1.0}}},
                                     {"fan2", Dir::XPlus, {{1.0, 0.75, 0.0}, {1.0, 1.0, 1.0}}}};
  return test::box_mesh(4, 4, 4, 1.0, 1.0, 1.0, {}, rects);
}

std::vector<BoundarySpec> fan_specs(const Mesh& m, double fan_flow) {
  std::vector<BoundarySpec> specs = test::wall_specs(m);
  for (auto& s : specs) {
    if (s.patch == "xmin") s.kind = VelocityInlet{{2.0, 0.0, 0.0}, 313.15, 1e-3, 1e-3, {}};
    if (s.patch == "fan1" || s.patch == "fan2") s.kind = OutletFlow{fan_flow};
  }
  return specs;
}

}  // namespace

TEST_CASE("prescribed outlet flows must balance the inflow") {
  const Mesh m = fan_mesh();
  const BoundaryConditions ok(m, fan_specs(m, 1.0));
  CHECK(ok.total_inflow() == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(ok.prescribed_outflow() == doctest::Approx(2.0).epsilon(1e-14));
  CHECK_THROWS_AS(BoundaryConditions(m, fan_specs(m, 1.25)), Error);
  CHECK_NOTHROW(BoundaryConditions(m, fan_specs(m, 1.0 + 0.4 * kFlowBalanceTolerance)));
  CHECK_THROWS_AS(BoundaryConditions(m, fan_specs(m, 1.0 + 2.0 * kFlowBalanceTolerance)), Error);
}

TEST_CASE("apply_boundary fixes inlet data and balances the net flow") {
  const Mesh m = fan_mesh();
  const FluidProps fluid;
  const BoundaryConditions bcs(m, fan_specs(m, 1.0005));
  FieldSet f = init_stagnant(m, fluid, 300.0);
  apply_boundary(f, m, bcs, fluid);
  const auto& inlet = m.patches()[static_cast<std::size_t>(m.patch_index("xmin"))];
  for (auto b : inlet.faces) {
    CHECK(f.boundary.temperature[b] == 313.15);
    CHECK(f.boundary.velocity[b] == Vec3{2.0, 0.0, 0.0});
  }
  const double inflow_mass = fluid.density * 2.0;
  CHECK(std::abs(net_boundary_outflow(m, f.mass_flux)) <= 1e-3 * inflow_mass);
  CHECK(std::abs(net_boundary_outflow(m, f.mass_flux)) <= 1e-12 * inflow_mass);
}

TEST_CASE("boundary spec validation") {
  const Mesh m = test::box_mesh(2, 2, 2);
  SUBCASE("uncovered patch") {
    auto specs = test::wall_specs(m);
    specs.pop_back();
    CHECK_THROWS_AS(BoundaryConditions(m, specs), Error);
  }
  SUBCASE("inlet turbulence must be positive") {
    auto specs = test::wall_specs(m);
    specs[0].kind = VelocityInlet{{1.0, 0.0, 0.0}, 300.0, 0.0, 1e-3, {}};
    specs[1].kind = OutletFlow{};
    CHECK_THROWS_AS(BoundaryConditions(m, specs), Error);
    specs[0].kind = VelocityInlet{{1.0, 0.0, 0.0}, 300.0, 1e-3, -1.0, {}};
    CHECK_THROWS_AS(BoundaryConditions(m, specs), Error);
  }
}

TEST_CASE("eddy and effective viscosity") {
  const double big = 1e300;
  CHECK(eddy_viscosity(1.0, 1.0, 1.0, 0.09, big) == doctest::Approx(0.09).epsilon(1e-15));
  const double mu_t = eddy_viscosity(0.015, 0.09, 1.127, 0.09, big);
  CHECK(mu_t == doctest::Approx(0.09 * 1.127 * 0.015 * 0.015 / 0.09).epsilon(1e-14));
  CHECK(mu_t == doctest::Approx(2.54e-4).epsilon(2e-3));
  CHECK(eddy_viscosity(1e-12, 10.0, 1.127, 0.09, big) < 1e-24);
  CHECK(eddy_viscosity(10.0, 1e-4, 1.127, 0.09, 1.91e-5 * 1e5) == 1.91e-5 * 1e5);
  CHECK(effective_viscosity(1.91e-5, 0.0) == 1.91e-5);
  CHECK(effective_viscosity(1.91e-5, 2.54e-4) == doctest::Approx(2.731e-4).epsilon(1e-12));
}

TEST_CASE("enthalpy") {
  CHECK(enthalpy(313.15, 1005.0) == doctest::Approx(314715.75).epsilon(1e-15));
  CHECK(enthalpy(318.15, 1005.0) - enthalpy(313.15, 1005.0) == doctest::Approx(5025.0).epsilon(1e-9));
  CHECK(enthalpy(1e-12, 1005.0) < 1e-8);
  CHECK(total_enthalpy(300.0, 1000.0, {3.0, 4.0, 0.0}) == doctest::Approx(300012.5).epsilon(1e-15));
}

TEST_CASE("Boussinesq buoyancy") {
  const FluidProps fluid;
  CHECK(norm(buoyancy_force(fluid.reference_temperature, fluid)) == 0.0);
  const Vec3 b = buoyancy_force(fluid.reference_temperature + 20.0, fluid);
  CHECK(b.x == 0.0);
  CHECK(b.z == 0.0);
  CHECK(b.y == doctest::Approx(1.127 * 3.193e-3 * 20.0 * 9.81).epsilon(1e-12));
  CHECK(b.y == doctest::Approx(0.706).epsilon(1e-3));

  FluidProps frozen = fluid;
  frozen.expansivity = 0.0;
  CHECK(norm(buoyancy_force(350.0, frozen)) == 0.0);
}

TEST_CASE("buoyancy source: sign per cell and closed-box integral") {
  const std::vector<RegionBox> boxes{{{{0.0, 0.0, 0.0}, {0.5, 1.0, 0.5}}, CellTag::solid(0)}};
  const Mesh m = test::box_mesh(4, 4, 2, 2.0, 1.0, 0.5, boxes);
  FluidProps fluid;
  fluid.gravity = {0.0, -9.81, 0.0};
  std::vector<double> t(m.cell_count());
  for (std::size_t c = 0; c < m.cell_count(); ++c) t[c] = fluid.reference_temperature + (c % 3 == 0 ? -4.0 : 7.5);
  const auto b = buoyancy_source(m, t, fluid);
  for (std::size_t c = 0; c < m.cell_count(); ++c) {
    if (!m.is_fluid(c)) {
      CHECK(norm(b[c]) == 0.0);
    } else if (t[c] > fluid.reference_temperature) {
      CHECK(dot(b[c], fluid.gravity) < 0.0);
    } else {
      CHECK(dot(b[c], fluid.gravity) > 0.0);
    }
  }

  const double dt = 12.0;
  const std::vector<double> hot(m.cell_count(), fluid.reference_temperature + dt);
  const auto bh = buoyancy_source(m, hot, fluid);
  Vec3 total;
  double fluid_volume = 0.0;
  for (std::size_t c = 0; c < m.cell_count(); ++c) {
    total += bh[c] * m.volume(c);
    if (m.is_fluid(c)) fluid_volume += m.volume(c);
  }
  const Vec3 expected = fluid.gravity * (-fluid.density * fluid.expansivity * dt * fluid_volume);
  CHECK(total.y == doctest::Approx(expected.y).epsilon(1e-12));
  CHECK(total.x == 0.0);
}
