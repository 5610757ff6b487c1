#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dtcfd/solver.hpp"
#include "dtcfd/transformer_case.hpp"

namespace dtcfd {

inline constexpr int kConfigSchemaVersion = 1;

/// Everything a `run` needs: transformer geometry and physics, solver controls, probes.
struct CaseConfig {
  int schema_version = kConfigSchemaVersion;
  std::string name = "transformer";
  TransformerCaseParams transformer = desk_transformer_params();
  SolverControls controls = transformer_controls();
  std::vector<Vec3> monitor_points;
  int threads = 0;  ///< 0 keeps the runtime default
};

struct ConfigIssue {
  int line = 0;  ///< 1-based, 0 for whole-file problems
  std::string message;
};

/// Every problem found in one configuration text.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues);
  const std::vector<ConfigIssue>& issues() const { return issues_; }

 private:
  std::vector<ConfigIssue> issues_;
};

/// Parses `key = value [unit]` lines (`#` starts a comment). Dimensional values need a unit
/// suffix; temperatures accept K or C. Missing keys keep their defaults. Throws ConfigError
/// listing every unknown key, missing or wrong unit, malformed or out-of-range value.
CaseConfig parse_config(const std::string& text);

/// Reads and parses a file; a missing file raises ConfigError.
CaseConfig load_config(const std::filesystem::path& path);

/// Canonical text with every key in SI units; parse_config(emit_config(c)) reproduces `c`.
std::string emit_config(const CaseConfig& config);

/// Known keys in emission order.
std::vector<std::string> config_keys();

/// Transformer case of the configuration with its monitor points attached.
Case build_case(const CaseConfig& config);

}  // namespace dtcfd
