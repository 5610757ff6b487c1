#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "dtcfd/boundary.hpp"
#include "dtcfd/solver.hpp"
#include "dtcfd/thermal.hpp"
#include "dtcfd/verification.hpp"
#include "support.hpp"

using namespace dtcfd;

namespace {

struct ConjugateBox {
  Mesh mesh;
  CellMask active;
  FluidProps fluid;
  TurbulenceSettings turb;
  std::vector<SolidProps> solids;
  BoundaryConditions bcs;
  FieldSet f;

  ConjugateBox(std::vector<BoundarySpec> specs, double source)
      : mesh(make_mesh()), active(active_mask(mesh)), bcs(mesh, std::move(specs)) {
    turb.enabled = false;
    SolidProps s;
    s.region = 0;
    s.conductivity_axial = 4.0;
    s.conductivity_radial = 0.8;
    s.axial_axis = 1;
    s.heat_source = source;
    solids.push_back(s);
    f = init_stagnant(mesh, fluid, 330.0, turb);
    apply_boundary(f, mesh, bcs, fluid);
  }

  static Mesh make_mesh() {
    const std::vector<RegionBox> boxes{{{{0.25, 0.25, 0.0}, {0.5, 0.75, 1.0}}, CellTag::solid(0)}};
    return test::box_mesh(8, 8, 2, 1.0, 1.0, 1.0, boxes);
  }

  void solve(int iterations, SchemeChoice scheme = {AdvectionScheme::Upwind, Limiter::VanLeer}) {
    for (int i = 0; i < iterations; ++i) {
      solve_energy(mesh, active, bcs, f, fluid, solids, turb, scheme, 1.0, {1e-14, 0.0, 4000});
    }
  }
};

std::vector<BoundarySpec> fixed_walls(const Mesh& m, double t) {
  std::vector<BoundarySpec> specs;
  for (const auto& p : m.patches()) specs.push_back({p.name, Wall{{}, ThermalKind::FixedTemperature, 0.0, t}});
  return specs;
}

}  // namespace

TEST_CASE("source-free box held at 313.15 K becomes uniform") {
  ConjugateBox b(fixed_walls(ConjugateBox::make_mesh(), 313.15), 0.0);
  b.solve(3);
  for (std::size_t c = 0; c < b.mesh.cell_count(); ++c) CHECK(std::abs(b.f.temperature[c] - 313.15) < 1e-9);
  const auto audit = global_energy_audit(b.mesh, b.bcs, b.f, b.fluid, b.solids, b.turb);
  CHECK(std::abs(audit.sources) == 0.0);
  CHECK(std::abs(audit.boundary_conduction) < 1e-9);
  CHECK(std::abs(audit.enthalpy_in) == 0.0);
  CHECK(std::abs(audit.enthalpy_out) == 0.0);
}

TEST_CASE("conjugate conduction: interface flux continuity and global balance") {
  ConjugateBox b(fixed_walls(ConjugateBox::make_mesh(), 300.0), 5.0e3);
  b.solve(3);
  const auto audit = global_energy_audit(b.mesh, b.bcs, b.f, b.fluid, b.solids, b.turb);
  CHECK(audit.sources == doctest::Approx(5.0e3 * 0.25 * 0.5 * 1.0).epsilon(1e-12));
  CHECK(audit.relative < 1e-9);
  CHECK(interface_flux_mismatch(b.mesh, b.f, b.fluid, b.solids, b.turb) < 1e-9);
  double hottest = 0.0;
  std::size_t where = 0;
  for (std::size_t c = 0; c < b.mesh.cell_count(); ++c) {
    if (b.f.temperature[c] > hottest) hottest = b.f.temperature[c], where = c;
  }
  CHECK(b.mesh.kind(where) == CellKind::Solid);
}

TEST_CASE("orthotropic cell conductivity") {
  ConjugateBox b(fixed_walls(ConjugateBox::make_mesh(), 300.0), 0.0);
  const auto lambda = cell_conductivity(b.mesh, b.f, b.fluid, b.solids, b.turb);
  for (std::size_t c = 0; c < b.mesh.cell_count(); ++c) {
    if (b.mesh.kind(c) == CellKind::Solid) {
      CHECK(lambda[c] == Vec3{0.8, 4.0, 0.8});
    } else {
      CHECK(lambda[c] == Vec3{b.fluid.conductivity, b.fluid.conductivity, b.fluid.conductivity});
    }
  }
  CHECK_THROWS_AS(solid_props(b.solids, 5), Error);
}

TEST_CASE("source-free upwind advection obeys the maximum principle") {
  const Mesh m = test::box_mesh(12, 6, 1);
  const double t_in = 320.0, t_wall = 300.0;
  std::vector<BoundarySpec> specs{{"xmin", VelocityInlet{{0.05, 0.0, 0.0}, t_in, 1e-3, 1e-3, {}}},
                                  {"xmax", OutletFlow{}},
                                  {"ymin", Wall{{}, ThermalKind::FixedTemperature, 0.0, t_wall}},
                                  {"ymax", Wall{}},
                                  {"zmin", Symmetry{}},
                                  {"zmax", Symmetry{}}};
  const BoundaryConditions bcs(m, specs);
  FluidProps fluid;
  TurbulenceSettings turb;
  turb.enabled = false;
  FieldSet f = init_stagnant(m, fluid, 310.0, turb);
  for (std::size_t c = 0; c < m.cell_count(); ++c) f.velocity[c] = {0.05, 0.0, 0.0};
  for (auto& v : f.mass_flux.axis[0]) v = fluid.density * 0.05 * m.face_area(0, Dir::XPlus);
  apply_boundary(f, m, bcs, fluid);
  const CellMask active = active_mask(m);
  for (int it = 0; it < 3; ++it) {
    solve_energy(m, active, bcs, f, fluid, {}, turb, {AdvectionScheme::Upwind, Limiter::VanLeer}, 1.0,
                 {1e-14, 0.0, 4000});
  }
  for (std::size_t c = 0; c < m.cell_count(); ++c) {
    CHECK(f.temperature[c] >= t_wall - 1e-9);
    CHECK(f.temperature[c] <= t_in + 1e-9);
  }
}

TEST_CASE("sourced slab matches the parabola and the summation oracle") {
  const double q = 1.0e5, lambda = 2.0, L = 0.1, tw = 300.0;
  const Case c = conducting_slab_case(40, q, lambda, L, tw);
  SolverControls ctl;
  ctl.targets.fill(1e-10);
  ctl.relaxation.temperature = 1.0;
  ctl.scalar_solver = {1e-12, 0.0, 5000};
  const RunResult r = run_steady(c, ctl);
  REQUIRE(r.status == RunStatus::Converged);
  const double h = L / 40.0;
  const double wall_offset = q * h * h / (8.0 * lambda);
  double peak = 0.0;
  for (std::size_t i = 0; i < c.mesh.cell_count(); ++i) {
    const double x = c.mesh.center(i).x;
    const double exact = tw + q / (2.0 * lambda) * (L * L - x * x) + wall_offset;
    CHECK(std::abs(r.fields.temperature[i] - exact) <= 1e-6 * (exact - tw) + 1e-9);
    peak = std::max(peak, r.fields.temperature[i]);
  }
  CHECK(peak - tw == doctest::Approx(slab_peak_rise(q, lambda, L)).epsilon(1e-9));

  const auto audit = global_energy_audit(c.mesh, c.bcs, r.fields, c.fluid, c.solids, c.turbulence);
  double volume = 0.0;
  for (std::size_t i = 0; i < c.mesh.cell_count(); ++i) volume += c.mesh.volume(i);
  CHECK(-audit.boundary_conduction == doctest::Approx(q * volume).epsilon(1e-3));
  CHECK(slab_peak_rise(q, lambda, L) == doctest::Approx(250.0).epsilon(1e-15));
}
