#include "dtcfd/compare.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace dtcfd {

namespace {

constexpr double kCelsiusOffset = 273.15;

std::string fmt(const char* f, double v) {
  char b[64];
  std::snprintf(b, sizeof b, f, v);
  return b;
}

}  // namespace

FanRunSummary summarize_fan_run(const std::string& label, const TransformerCaseParams& params, const Case& c,
                                const RunResult& run) {
  const TransformerMetrics m = transformer_metrics(c, params, run.fields);
  FanRunSummary s;
  s.label = label;
  s.fan_count = params.fan_count;
  s.flow_mode = params.flow_mode;
  s.total_flow = m.total_flow;
  s.status = run.status;
  s.iterations = run.iterations;
  s.cells = c.mesh.dims();
  s.heat_load = m.heat_load;
  s.mean_outlet_temperature = m.mean_outlet_temperature;
  s.peak_winding_temperature = m.peak_winding_temperature;
  s.peak_solid_temperature = m.peak_solid_temperature;
  s.mean_channel_velocity = m.mean_channel_velocity;
  return s;
}

FanComparison compare_fan_configs(const FanRunSummary& first, const FanRunSummary& second) {
  for (const FanRunSummary* s : {&first, &second}) {
    if (s->status != RunStatus::Converged) {
      throw Error("run '" + s->label + "' did not converge (" + to_string(s->status) + ")");
    }
  }
  if (first.cells != second.cells) throw Error("runs use different grids");
  if (std::abs(first.heat_load - second.heat_load) > 1e-9 * std::max(1.0, std::abs(first.heat_load))) {
    throw Error("runs use different heat loads");
  }
  FanComparison cmp;
  cmp.first = first;
  cmp.second = second;
  auto add = [&](const char* q, const char* unit, double a, double b) { cmp.rows.push_back({q, unit, a, b, b - a}); };
  add("mean_outlet_temperature", "K", first.mean_outlet_temperature, second.mean_outlet_temperature);
  add("peak_winding_temperature", "K", first.peak_winding_temperature, second.peak_winding_temperature);
  add("peak_solid_temperature", "K", first.peak_solid_temperature, second.peak_solid_temperature);
  add("mean_channel_velocity", "m/s", first.mean_channel_velocity, second.mean_channel_velocity);
  add("total_flow", "m3/s", first.total_flow, second.total_flow);
  cmp.outlet_delta = cmp.rows.front().delta;
  return cmp;
}

std::string FanComparison::text() const {
  std::ostringstream os;
  os << "fan comparison: " << first.label << " (" << first.fan_count << " fans) -> " << second.label << " ("
     << second.fan_count << " fans)\n";
  os << "flow mode: " << to_string(first.flow_mode);
  if (second.flow_mode != first.flow_mode) os << " / " << to_string(second.flow_mode);
  os << "\n";
  char line[160];
  std::snprintf(line, sizeof line, "%-32s %12s %12s %12s\n", "quantity", first.label.c_str(), second.label.c_str(),
                "delta");
  os << line;
  for (const auto& r : rows) {
    const bool temperature = r.unit == "K";
    const double a = temperature ? r.first - kCelsiusOffset : r.first;
    const double b = temperature ? r.second - kCelsiusOffset : r.second;
    const std::string unit = temperature ? "degC" : r.unit;
    const std::string q = r.quantity + " [" + unit + "]";
    std::snprintf(line, sizeof line, "%-32s %12.3f %12.3f %+12.2f%s\n", q.c_str(), a, b, r.delta, temperature ? " K" : "");
    os << line;
  }
  os << "outlet temperature delta: " << fmt("%+.2f", outlet_delta) << " K\n";
  return os.str();
}

std::string FanComparison::csv() const {
  std::ostringstream os;
  os << "quantity,unit,first,second,delta\n";
  for (const auto& r : rows) {
    os << r.quantity << "," << r.unit << "," << fmt("%.9g", r.first) << "," << fmt("%.9g", r.second) << ","
       << fmt("%.9g", r.delta) << "\n";
  }
  os << "flow_mode,," << to_string(first.flow_mode) << "," << to_string(second.flow_mode) << ",\n";
  return os.str();
}

}  // namespace dtcfd
