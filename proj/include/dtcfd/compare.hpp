#pragma once

#include <array>
#include <string>
#include <vector>

#include "dtcfd/solver.hpp"
#include "dtcfd/transformer_case.hpp"

namespace dtcfd {

/// Headline results of one transformer run, as stored in a result bundle.
struct FanRunSummary {
  std::string label;
  int fan_count = 0;
  FlowMode flow_mode = FlowMode::PerFan;
  double total_flow = 0.0;  ///< modelled part [m3/s]
  RunStatus status = RunStatus::MaxIterations;
  int iterations = 0;
  std::array<int, 3> cells{};
  double heat_load = 0.0;                 ///< [W]
  double mean_outlet_temperature = 0.0;   ///< [K]
  double peak_winding_temperature = 0.0;  ///< [K]
  double peak_solid_temperature = 0.0;    ///< [K]
  double mean_channel_velocity = 0.0;     ///< [m/s]
};

FanRunSummary summarize_fan_run(const std::string& label, const TransformerCaseParams& params, const Case& c,
                                const RunResult& run);

struct ComparisonRow {
  std::string quantity;
  std::string unit;
  double first = 0.0;
  double second = 0.0;
  double delta = 0.0;  ///< second - first
};

struct FanComparison {
  FanRunSummary first;
  FanRunSummary second;
  std::vector<ComparisonRow> rows;
  double outlet_delta = 0.0;  ///< mean outlet temperature, second - first [K]

  /// Structured text report; temperatures in degC, deltas in K with two decimals.
  std::string text() const;
  /// quantity,unit,first,second,delta
  std::string csv() const;
};

/// Signed comparison `second - first`. Throws Error when a run did not converge or the grids or
/// heat loads differ.
FanComparison compare_fan_configs(const FanRunSummary& first, const FanRunSummary& second);

}  // namespace dtcfd
