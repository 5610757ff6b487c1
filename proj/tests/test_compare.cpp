#include <doctest.h>

#include <sstream>

#include "dtcfd/compare.hpp"

using namespace dtcfd;

namespace {

FanRunSummary summary(const std::string& label, int fans, double outlet, double peak, double velocity) {
  FanRunSummary s;
  s.label = label;
  s.fan_count = fans;
  s.total_flow = 0.5 * fans / 2;
  s.status = RunStatus::Converged;
  s.iterations = 500;
  s.cells = {32, 48, 16};
  s.heat_load = 6523.4;
  s.mean_outlet_temperature = outlet;
  s.peak_winding_temperature = peak;
  s.peak_solid_temperature = peak + 0.5;
  s.mean_channel_velocity = velocity;
  return s;
}

}  // namespace

TEST_CASE("self comparison has zero deltas") {
  const FanRunSummary a = summary("a", 2, 324.67, 368.94, 2.734);
  const FanComparison c = compare_fan_configs(a, a);
  CHECK(c.outlet_delta == 0.0);
  CHECK_FALSE(c.rows.empty());
  for (const auto& r : c.rows) CHECK(r.delta == 0.0);
  CHECK(c.text().find("+0.00 K") != std::string::npos);
}

TEST_CASE("signed deltas second minus first") {
  const FanRunSummary two = summary("fans2", 2, 324.67, 368.94, 2.734);
  const FanRunSummary four = summary("fans4", 4, 318.91, 348.33, 5.469);
  const FanComparison c = compare_fan_configs(two, four);
  CHECK(c.outlet_delta == doctest::Approx(318.91 - 324.67).epsilon(1e-12));
  bool found_peak = false, found_velocity = false;
  for (const auto& r : c.rows) {
    if (r.quantity == "peak_winding_temperature") {
      found_peak = true;
      CHECK(r.delta == doctest::Approx(348.33 - 368.94).epsilon(1e-12));
      CHECK(r.first == 368.94);
    }
    if (r.quantity == "mean_channel_velocity") {
      found_velocity = true;
      CHECK(r.delta == doctest::Approx(5.469 - 2.734).epsilon(1e-12));
    }
  }
  CHECK(found_peak);
  CHECK(found_velocity);
  const std::string text = c.text();
  CHECK(text.find("outlet temperature delta: -5.76 K") != std::string::npos);
  CHECK(text.find("per-fan") != std::string::npos);

  std::istringstream csv(c.csv());
  std::string header;
  std::getline(csv, header);
  CHECK(header == "quantity,unit,first,second,delta");
  std::size_t rows = 0;
  for (std::string l; std::getline(csv, l);) ++rows;
  CHECK(rows == c.rows.size() + 1);
}

TEST_CASE("incomparable inputs are rejected") {
  const FanRunSummary a = summary("a", 2, 324.67, 368.94, 2.734);
  FanRunSummary b = a;
  b.status = RunStatus::MaxIterations;
  CHECK_THROWS_AS(compare_fan_configs(a, b), Error);
  CHECK_THROWS_AS(compare_fan_configs(b, a), Error);
  b = a;
  b.cells = {64, 96, 32};
  CHECK_THROWS_AS(compare_fan_configs(a, b), Error);
  b = a;
  b.heat_load *= 1.1;
  CHECK_THROWS_AS(compare_fan_configs(a, b), Error);
}
