#include <doctest.h>

#include <cmath>
#include <set>

#include "dtcfd/gradient.hpp"
#include "dtcfd/mesh.hpp"
#include "dtcfd/transformer_case.hpp"
#include "support.hpp"

using namespace dtcfd;

TEST_CASE("uniform 2x2x1 grid has four quarter-volume fluid cells") {
  const Mesh m = test::box_mesh(2, 2, 1);
  CHECK(m.cell_count() == 4);
  for (std::size_t c = 0; c < m.cell_count(); ++c) {
    CHECK(m.is_fluid(c));
    CHECK(m.volume(c) == doctest::Approx(0.25).epsilon(1e-15));
  }
}

TEST_CASE("solid box over the left half tags eight cells") {
  const std::vector<RegionBox> boxes{{{{0.0, 0.0, 0.0}, {0.5, 1.0, 1.0}}, CellTag::solid(3)}};
  const Mesh m = test::box_mesh(4, 4, 1, 1.0, 1.0, 1.0, boxes);
  int solid = 0, fluid = 0;
  for (std::size_t c = 0; c < m.cell_count(); ++c) {
    if (m.kind(c) == CellKind::Solid) {
      ++solid;
      CHECK(m.tag(c).solid_id == 3);
      CHECK(m.center(c).x < 0.5);
    } else if (m.is_fluid(c)) {
      ++fluid;
    }
  }
  CHECK(solid == 8);
  CHECK(fluid == 8);
}

TEST_CASE("later region boxes overwrite earlier ones") {
  const std::vector<RegionBox> boxes{{{{0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}}, CellTag::solid(1)},
                                     {{{0.0, 0.0, 0.0}, {0.25, 1.0, 1.0}}, CellTag::blanked()}};
  const Mesh m = test::box_mesh(4, 1, 1, 1.0, 1.0, 1.0, boxes);
  CHECK(m.kind(0) == CellKind::Blanked);
  for (std::size_t c = 1; c < 4; ++c) CHECK(m.kind(c) == CellKind::Solid);
}

TEST_CASE("build_mesh rejects bad input") {
  SUBCASE("non-monotone axis") {
    CHECK_THROWS_AS(build_mesh({std::vector<double>{0.0, 0.5, 0.4, 1.0}, uniform_nodes(0, 1, 1), uniform_nodes(0, 1, 1)}, {}),
                    MeshError);
  }
  SUBCASE("repeated node") {
    CHECK_THROWS_AS(build_mesh({std::vector<double>{0.0, 0.5, 0.5, 1.0}, uniform_nodes(0, 1, 1), uniform_nodes(0, 1, 1)}, {}),
                    MeshError);
  }
  SUBCASE("box outside the domain names the box") {
    const std::vector<RegionBox> boxes{{{{0.0, 0.0, 0.0}, {0.5, 0.5, 0.5}}, CellTag::solid(0)},
                                       {{{0.5, 0.5, 0.5}, {2.0, 1.0, 1.0}}, CellTag::solid(1)}};
    try {
      test::box_mesh(2, 2, 2, 1.0, 1.0, 1.0, boxes);
      FAIL("expected MeshError");
    } catch (const MeshError& e) {
      CHECK(std::string(e.what()).find("region box 1") != std::string::npos);
    }
  }
}

TEST_CASE("interior faces") {
  SUBCASE("two cells share one face") {
    const Mesh m = test::box_mesh(2, 1, 1, 2.0, 0.5, 0.25);
    const auto faces = interior_face_list(m);
    REQUIRE(faces.size() == 1);
    CHECK(faces[0].area == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(faces[0].distance == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(faces[0].axis == 0);
  }
  SUBCASE("a blanked middle cell separates its neighbours") {
    const std::vector<RegionBox> boxes{{{{1.0, 0.0, 0.0}, {2.0, 1.0, 1.0}}, CellTag::blanked()}};
    const Mesh m = test::box_mesh(3, 1, 1, 3.0, 1.0, 1.0, boxes);
    CHECK(interior_face_list(m).empty());
  }
}

TEST_CASE("patches partition the boundary faces") {
  const std::vector<PatchRect> rects{{"vent", Dir::XPlus, {{1.0, 0.25, 0.25}, {1.0, 0.75, 0.75}}}};
  const Mesh m = test::box_mesh(4, 4, 4, 1.0, 1.0, 1.0, {}, rects);
  std::set<std::size_t> seen;
  std::size_t total = 0;
  for (const auto& p : m.patches()) {
    for (auto f : p.faces) seen.insert(f);
    total += p.faces.size();
  }
  CHECK(total == m.boundary_faces().size());
  CHECK(seen.size() == m.boundary_faces().size());
  CHECK(m.patches()[static_cast<std::size_t>(m.patch_index("vent"))].faces.size() == 4);
}

TEST_CASE("graded nodes") {
  const auto u = uniform_nodes(0.0, 2.0, 8);
  const auto g0 = graded_nodes(0.0, 2.0, 8, 0.0);
  const auto g = graded_nodes(0.0, 2.0, 8, 2.0);
  REQUIRE(g.size() == 9);
  for (std::size_t i = 0; i < u.size(); ++i) CHECK(g0[i] == doctest::Approx(u[i]).epsilon(1e-14));
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == 2.0);
  CHECK(g[1] - g[0] < g[5] - g[4]);
  CHECK(g[1] - g[0] == doctest::Approx(g[8] - g[7]).epsilon(1e-12));
}

TEST_CASE("transformer desk mesh: size, closure and face enumeration") {
  const Case c = build_transformer_case(desk_transformer_params());
  const Mesh& m = c.mesh;
  CHECK(m.cell_count() == 196608);
  CHECK(geometric_closure_residual(m) < 1e-12);

  std::size_t expected = 0;
  for (std::size_t cell = 0; cell < m.cell_count(); ++cell) {
    if (!m.is_active(cell)) continue;
    for (Dir d : {Dir::XPlus, Dir::YPlus, Dir::ZPlus}) {
      const auto nb = m.neighbour(cell, d);
      if (nb >= 0 && m.is_active(static_cast<std::size_t>(nb))) ++expected;
    }
  }
  const auto faces = interior_face_list(m);
  CHECK(faces.size() == expected);
  const auto [nx, ny, nz] = m.dims();
  const std::size_t structured = static_cast<std::size_t>((nx - 1) * ny * nz + nx * (ny - 1) * nz + nx * ny * (nz - 1));
  CHECK(faces.size() < structured);
  std::set<std::pair<std::size_t, std::size_t>> unique;
  for (const auto& f : faces) unique.insert({f.owner, f.neighbour});
  CHECK(unique.size() == faces.size());
}

TEST_CASE("region tagging is deterministic") {
  const auto p = coarse_transformer_params();
  const Case a = build_transformer_case(p);
  const Case b = build_transformer_case(p);
  CHECK(a.mesh.tags() == b.mesh.tags());
}

TEST_CASE("Green-Gauss gradient") {
  const Mesh m = test::box_mesh(8, 6, 4, 2.0, 1.5, 1.0);
  SUBCASE("constant field") {
    const std::vector<double> phi(m.cell_count(), 3.7);
    for (const auto& g : gradient(m, phi)) CHECK(norm(g) == 0.0);
  }
  SUBCASE("linear field is exact in interior cells") {
    std::vector<double> phi(m.cell_count());
    for (std::size_t c = 0; c < m.cell_count(); ++c) phi[c] = 2.0 * m.center(c).x;
    const auto g = gradient(m, phi);
    for (std::size_t c = 0; c < m.cell_count(); ++c) {
      const auto q = m.ijk(c);
      if (q[0] == 0 || q[0] == m.n(0) - 1) continue;
      CHECK(g[c].x == doctest::Approx(2.0).epsilon(1e-12));
      CHECK(std::abs(g[c].y) < 1e-12);
      CHECK(std::abs(g[c].z) < 1e-12);
    }
  }
}

namespace {

double sine_gradient_error(int n) {
  const Mesh m = test::box_mesh(n, 1, 1);
  std::vector<double> phi(m.cell_count());
  for (std::size_t c = 0; c < m.cell_count(); ++c) phi[c] = std::sin(M_PI * m.center(c).x);
  const auto g = gradient(m, phi);
  double worst = 0.0;
  for (std::size_t c = 1; c + 1 < m.cell_count(); ++c) {
    worst = std::max(worst, std::abs(g[c].x - M_PI * std::cos(M_PI * m.center(c).x)));
  }
  return worst;
}

}  // namespace

TEST_CASE("gradient error of sin(pi x) drops about fourfold per refinement") {
  const double ratio = sine_gradient_error(32) / sine_gradient_error(64);
  CHECK(ratio > 3.5);
  CHECK(ratio < 4.5);
}

TEST_CASE("masks") {
  const std::vector<RegionBox> boxes{{{{0.0, 0.0, 0.0}, {0.5, 1.0, 1.0}}, CellTag::solid(0)},
                                     {{{0.75, 0.0, 0.0}, {1.0, 0.5, 1.0}}, CellTag::blanked()}};
  const Mesh m = test::box_mesh(4, 2, 1, 1.0, 1.0, 1.0, boxes);
  const CellMask fluid = fluid_mask(m);
  const CellMask active = active_mask(m);
  CHECK(fluid.count() == 3);
  CHECK(active.count() == 7);
  for (const auto& e : fluid.edges) {
    CHECK(fluid[e.cell]);
    CHECK(e.area > 0.0);
    CHECK(e.distance > 0.0);
  }
}

TEST_CASE("thin region boxes") {
  auto slab_mesh = [](double lo, double hi) {
    const std::vector<RegionBox> boxes{{{{lo, 0.0, 0.0}, {hi, 1.0, 1.0}}, CellTag::solid(0)}};
    return test::box_mesh(4, 1, 1, 1.0, 1.0, 1.0, boxes);
  };
  SUBCASE("mid-plane inside a cell takes that layer") {
    const Mesh m = slab_mesh(0.3, 0.32);
    CHECK(m.kind(1) == CellKind::Solid);
    CHECK(m.kind(0) == CellKind::Fluid);
    CHECK(m.kind(2) == CellKind::Fluid);
  }
  SUBCASE("mid-plane on an interior node takes both layers") {
    const Mesh m = slab_mesh(0.49, 0.51);
    CHECK(m.kind(1) == CellKind::Solid);
    CHECK(m.kind(2) == CellKind::Solid);
    CHECK(m.kind(0) == CellKind::Fluid);
    CHECK(m.kind(3) == CellKind::Fluid);
  }
  SUBCASE("mid-plane on the domain edge takes the edge layer") {
    const Mesh m = slab_mesh(0.0, 0.0);
    CHECK(m.kind(0) == CellKind::Solid);
    CHECK(m.kind(1) == CellKind::Fluid);
  }
}
