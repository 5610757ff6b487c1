#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "dtcfd/solver.hpp"
#include "dtcfd/verification.hpp"
#include "support.hpp"

using namespace dtcfd;

TEST_CASE("solver controls validation") {
  SolverControls ctl;
  CHECK_NOTHROW(ctl.validate());
  ctl.relaxation.pressure = 0.0;
  CHECK_THROWS_AS(ctl.validate(), Error);
  ctl = SolverControls{};
  ctl.relaxation.momentum = 1.2;
  CHECK_THROWS_AS(ctl.validate(), Error);
  ctl = SolverControls{};
  ctl.targets[3] = 0.0;
  CHECK_THROWS_AS(ctl.validate(), Error);
}

TEST_CASE("residual normalisation is fixed after the fifth iteration") {
  ResidualNormalizer n(5);
  Residuals raw{};
  raw.fill(0.0);
  raw[0] = 2.0;
  CHECK(n.normalize(1, raw)[0] == 1.0);
  raw[0] = 4.0;
  CHECK(n.normalize(2, raw)[0] == 1.0);
  raw[0] = 3.0;
  CHECK(n.normalize(5, raw)[0] == 0.75);
  raw[0] = 8.0;
  CHECK(n.normalize(6, raw)[0] == 2.0);
  CHECK(n.scale()[0] == 4.0);

  SUBCASE("an equation that is still zero takes its first non-zero value") {
    CHECK(n.scale()[6] == 0.0);
    raw[6] = 0.5;
    CHECK(n.normalize(7, raw)[6] == 1.0);
    raw[6] = 0.25;
    CHECK(n.normalize(8, raw)[6] == 0.5);
  }
}

TEST_CASE("normalized residual is zero at the solution and linear in a perturbation") {
  LinearSystem A({6, 1, 1});
  for (std::size_t c = 0; c < 6; ++c) {
    A.diag[c] = 3.0;
    if (c > 0) A.off[static_cast<std::size_t>(index_of(Dir::XMinus))][c] = -1.0;
    if (c < 5) A.off[static_cast<std::size_t>(index_of(Dir::XPlus))][c] = -1.0;
    A.rhs[c] = 1.0 + static_cast<double>(c);
  }
  std::vector<double> x(6, 0.0);
  solve_linear(A, x, {1e-15, 0.0, 500});
  CHECK(normalized_residual(A, x, 2.0) < 1e-13);
  CHECK(normalized_residual(A, x, 0.0) == 0.0);

  const std::vector<double> delta{0.3, -0.1, 0.7, 0.2, -0.4, 0.05};
  auto probe = [&](double eps) {
    std::vector<double> y(x);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += eps * delta[i];
    return normalized_residual(A, y, 2.0);
  };
  const double r1 = probe(1e-6), r2 = probe(2e-6);
  CHECK(r1 > 0.0);
  CHECK(r2 / r1 == doctest::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("a stagnant closed adiabatic box is a fixed point") {
  const Case c = sealed_box_case(8);
  SolverControls ctl;
  const RunResult r = run_steady(c, ctl);
  CHECK(r.status == RunStatus::Converged);
  CHECK(r.iterations <= 2);
  const FieldSet init = init_stagnant(c.mesh, c.fluid, c.initial_temperature, c.turbulence);
  for (std::size_t i = 0; i < c.mesh.cell_count(); ++i) {
    CHECK(r.fields.velocity[i] == Vec3{});
    CHECK(r.fields.temperature[i] == init.temperature[i]);
    CHECK(r.fields.pressure[i] == init.pressure[i]);
  }
}

TEST_CASE("Couette flow is reproduced to round-off") {
  const Case c = couette_case(16);
  SolverControls ctl;
  ctl.targets.fill(1e-10);
  ctl.flow_solver.tolerance = 1e-8;
  ctl.pressure_solver.tolerance = 1e-8;
  const RunResult r = run_steady(c, ctl);
  CHECK(r.status == RunStatus::Converged);
  CHECK(couette_max_error(c, r.fields) < 1e-8);
}

TEST_CASE("k-epsilon with c_mu = 0 degenerates to the laminar Couette solution") {
  SolverControls ctl;
  ctl.targets.fill(1e-8);
  ctl.flow_solver.tolerance = 1e-8;
  ctl.pressure_solver.tolerance = 1e-8;
  const Case laminar = couette_case(16);
  Case degenerate = couette_case(16);
  degenerate.turbulence.enabled = true;
  degenerate.turbulence.constants.c_mu = 0.0;
  const RunResult a = run_steady(laminar, ctl);
  const RunResult b = run_steady(degenerate, ctl);
  REQUIRE(a.status == RunStatus::Converged);
  REQUIRE(b.status == RunStatus::Converged);
  for (std::size_t i = 0; i < laminar.mesh.cell_count(); ++i) {
    CHECK(b.fields.mu_t[i] == 0.0);
    CHECK(norm(a.fields.velocity[i] - b.fields.velocity[i]) < 1e-7);
  }
}

TEST_CASE("lid-driven cavity: determinism and late-stage monotone convergence") {
  const Case c = lid_cavity_case(16, 100.0);
  const SolverControls ctl;
  const RunResult a = run_steady(c, ctl);
  const RunResult b = run_steady(c, ctl);
  REQUIRE(a.status == RunStatus::Converged);
  REQUIRE(a.history.size() == static_cast<std::size_t>(a.iterations));
  REQUIRE(a.history.size() == b.history.size());
  for (std::size_t i = 0; i < a.history.size(); ++i) CHECK(a.history.normalized[i] == b.history.normalized[i]);
  CHECK(a.max_mass_imbalance <= 1e-8 * mass_flux_scale(c.mesh, a.fields, c.fluid.density));

  const std::size_t window = 10, tail = 50;
  REQUIRE(a.history.size() > tail + window);
  for (std::size_t e = 0; e < kEquationCount; ++e) {
    double previous = std::numeric_limits<double>::infinity();
    for (std::size_t i = a.history.size() - tail; i < a.history.size(); ++i) {
      double m = 0.0;
      for (std::size_t j = i + 1 - window; j <= i; ++j) m = std::max(m, a.history.normalized[j][e]);
      CHECK(m <= previous);
      previous = m;
    }
  }
}

TEST_CASE("unrelaxed SIMPLE is reported as diverged") {
  const Case c = lid_cavity_case(16, 100.0);
  SolverControls ctl;
  ctl.relaxation.momentum = 1.0;
  ctl.relaxation.pressure = 1.0;
  const RunResult r = run_steady(c, ctl);
  CHECK(r.status == RunStatus::Diverged);
  CHECK(r.iterations < ctl.max_iterations);
  CHECK_FALSE(r.message.empty());
}

TEST_CASE("iteration callback sees every iteration") {
  const Case c = lid_cavity_case(8, 100.0);
  SolverControls ctl;
  ctl.max_iterations = 12;
  std::vector<int> seen;
  std::vector<Residuals> reported;
  const RunResult r = run_steady(c, ctl, [&](int it, const Residuals& res, const FieldSet& f) {
    seen.push_back(it);
    reported.push_back(res);
    CHECK(f.finite());
  });
  REQUIRE(seen.size() == static_cast<std::size_t>(r.iterations));
  for (std::size_t i = 0; i < seen.size(); ++i) {
    CHECK(seen[i] == static_cast<int>(i) + 1);
    CHECK(reported[i] == r.history.normalized[i]);
  }
}

TEST_CASE("locate_cell") {
  const Mesh m = test::box_mesh(4, 2, 2, 2.0, 1.0, 1.0);
  CHECK(locate_cell(m, {0.1, 0.1, 0.1}) == 0);
  CHECK(locate_cell(m, {1.9, 0.9, 0.9}) == static_cast<std::ptrdiff_t>(m.cell_count()) - 1);
  CHECK(locate_cell(m, {2.5, 0.5, 0.5}) == -1);
}
