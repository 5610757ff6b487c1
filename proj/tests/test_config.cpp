#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "dtcfd/config.hpp"

using namespace dtcfd;

namespace {

std::vector<ConfigIssue> issues_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.issues();
  }
  return {};
}

}  // namespace

TEST_CASE("minimal config fills defaults") {
  const CaseConfig c = parse_config("schema_version = 1\n");
  const CaseConfig d;
  CHECK(c.name == "transformer");
  CHECK(c.transformer.cells == d.transformer.cells);
  CHECK(c.transformer.fan_count == 2);
  CHECK(c.transformer.fluid.density == FluidProps{}.density);
  CHECK(c.controls.targets == d.controls.targets);
  CHECK(emit_config(c) == emit_config(d));
}

TEST_CASE("units are converted to SI") {
  const CaseConfig c = parse_config(
      "schema_version = 1   # comment\n"
      "\n"
      "initial_temperature = 40 C\n"
      "inlet.temperature = 35 degC\n"
      "fluid.gravity = 0 -9.81 0 m/s2\n"
      "geometry.baffle_y = 110 cm\n"
      "geometry.baffle_thickness = 40 mm\n"
      "fans.flow = 1800 m3/h\n"
      "solids.winding_source = 12 kW/m3\n"
      "fluid.conductivity = 0.03 W/(m K)\n"
      "fluid.reference_temperature = 313.15 K\n"
      "monitor = 10 20 30 cm\n");
  CHECK(c.transformer.initial_temperature == doctest::Approx(313.15).epsilon(1e-15));
  CHECK(c.transformer.inlet_temperature == doctest::Approx(308.15).epsilon(1e-15));
  CHECK(c.transformer.fluid.gravity == Vec3{0.0, -9.81, 0.0});
  CHECK(c.transformer.baffle_y == doctest::Approx(1.1).epsilon(1e-15));
  CHECK(c.transformer.baffle_thickness == doctest::Approx(0.04).epsilon(1e-15));
  CHECK(c.transformer.fan_flow == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(c.transformer.winding_source == doctest::Approx(12000.0).epsilon(1e-15));
  CHECK(c.transformer.fluid.conductivity == 0.03);
  REQUIRE(c.monitor_points.size() == 1);
  CHECK(c.monitor_points[0].z == doctest::Approx(0.3).epsilon(1e-15));
}

TEST_CASE("choices, booleans, vectors and integers") {
  const CaseConfig c = parse_config(
      "schema_version = 1\n"
      "name = desk4\n"
      "fans.count = 4\n"
      "fans.flow_mode = total\n"
      "geometry.cells = 16 24 8\n"
      "turbulence.enabled = false\n"
      "scheme.energy = upwind\n"
      "limiter.momentum = superbee\n"
      "threads = 3\n");
  CHECK(c.name == "desk4");
  CHECK(c.transformer.fan_count == 4);
  CHECK(c.transformer.flow_mode == FlowMode::Total);
  CHECK(c.transformer.cells == std::array<int, 3>{16, 24, 8});
  CHECK_FALSE(c.transformer.turbulence.enabled);
  CHECK(c.controls.schemes.energy.advection == AdvectionScheme::Upwind);
  CHECK(c.controls.schemes.momentum.limiter == Limiter::Superbee);
  CHECK(c.threads == 3);
}

TEST_CASE("round trip parse -> emit -> parse") {
  CaseConfig c;
  c.name = "trip";
  c.transformer.fan_count = 4;
  c.transformer.fan_flow = 0.123456789012345678;
  c.transformer.initial_temperature = 301.987654321;
  c.transformer.beam_z = {{0.05, 0.15}, {0.3, 0.35}, {0.6, 0.7}};
  c.controls.relaxation.pressure = 0.271828;
  c.controls.schemes.turbulence.advection = AdvectionScheme::HighResolution;
  c.monitor_points = {{0.1, 0.2, 0.3}, {1.0 / 3.0, 1.5, 0.7}};
  const std::string text = emit_config(c);
  const CaseConfig back = parse_config(text);
  CHECK(emit_config(back) == text);
  CHECK(back.transformer.fan_flow == c.transformer.fan_flow);
  CHECK(back.transformer.initial_temperature == c.transformer.initial_temperature);
  CHECK(back.transformer.beam_z == c.transformer.beam_z);
  CHECK(back.monitor_points[1].x == c.monitor_points[1].x);
  CHECK(back.controls.relaxation.pressure == c.controls.relaxation.pressure);
  const auto keys = config_keys();
  for (const auto& k : keys) CHECK(text.find(k + " = ") != std::string::npos);
}

TEST_CASE("every problem is reported with its line number") {
  const auto issues = issues_of(
      "schema_version = 1\n"
      "geometry.lenght = 1.5 m\n"
      "initial_temperature = 40\n"
      "fans.flow = 2 kg/s\n"
      "relaxation.momentum = 1.5\n"
      "fans.count = 2\n"
      "fans.count = 4\n"
      "this line has no equals sign\n");
  REQUIRE(issues.size() == 6);
  CHECK(issues[0].line == 2);
  CHECK(issues[0].message.find("unknown key 'geometry.lenght'") != std::string::npos);
  CHECK(issues[1].line == 3);
  CHECK(issues[1].message.find("missing unit") != std::string::npos);
  CHECK(issues[2].line == 4);
  CHECK(issues[2].message.find("kg/s") != std::string::npos);
  CHECK(issues[3].line == 5);
  CHECK(issues[4].line == 7);
  CHECK(issues[4].message.find("duplicate") != std::string::npos);
  CHECK(issues[5].line == 8);
}

TEST_CASE("schema version and semantic validation") {
  CHECK_FALSE(issues_of("name = x\n").empty());
  CHECK(issues_of("schema_version = 2\n").at(0).line == 1);
  const auto odd = issues_of("schema_version = 1\nfans.count = 3\n");
  REQUIRE(odd.size() == 1);
  CHECK(odd[0].line == 0);
  CHECK_FALSE(issues_of("schema_version = 1\nfluid.density = -1 kg/m3\n").empty());
  CHECK_FALSE(issues_of("schema_version = 1\nfluid.expansivity = 1e-3\n").empty());
  CHECK_FALSE(issues_of("schema_version = 1\nfans.flow_mode = sideways\n").empty());
  CHECK_FALSE(issues_of("schema_version = 1\nturbulence.c_mu = 0.09 m\n").empty());
}

TEST_CASE("ConfigError message lists all issues") {
  try {
    parse_config("schema_version = 1\nfoo = 1\nbar = 2\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string s = e.what();
    CHECK(s.find("line 2") != std::string::npos);
    CHECK(s.find("line 3") != std::string::npos);
  }
}

TEST_CASE("load_config") {
  CHECK_THROWS_AS(load_config("/nonexistent/dir/missing.cfg"), ConfigError);
  const auto path = std::filesystem::temp_directory_path() / "dtcfd_test_load.cfg";
  {
    std::ofstream out(path);
    out << "schema_version = 1\ngeometry.cells = 8 12 4\nmonitor = 0.5 1.0 0.3 m\n";
  }
  const CaseConfig c = load_config(path);
  std::filesystem::remove(path);
  const Case k = build_case(c);
  CHECK(k.mesh.cell_count() == 8 * 12 * 4);
  REQUIRE(k.monitor_points.size() == 1);
  CHECK(k.monitor_points[0] == Vec3{0.5, 1.0, 0.3});
}
