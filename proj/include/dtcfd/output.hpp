#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "dtcfd/compare.hpp"
#include "dtcfd/solver.hpp"
#include "dtcfd/transformer_case.hpp"

namespace dtcfd {

/// Header of the residual history CSV.
inline constexpr const char* kResidualCsvHeader = "iteration,res_u,res_v,res_w,res_p,res_k,res_eps,res_T";
/// Header of slice CSVs.
inline constexpr const char* kSliceCsvHeader = "x,y,z,T,Vx,Vy,Vz,p,k,eps";
/// Header of per-patch surface CSVs.
inline constexpr const char* kPatchCsvHeader = "x,y,z,area,T,Vx,Vy,Vz,p,mass_flux";

/// Legacy ASCII VTK structured grid with cell data: SCALARS T, p, K, eps, mu_t and VECTORS
/// velocity, written with 17 significant digits.
void write_vtk(const std::filesystem::path& path, const Mesh& mesh, const FieldSet& fields, const std::string& title = "dtcfd");

/// Contents of a legacy VTK structured-grid file as written by write_vtk.
struct VtkData {
  std::array<int, 3> point_dims{};
  std::vector<Vec3> points;
  std::size_t cell_count = 0;
  std::map<std::string, std::vector<double>> scalars;
  std::map<std::string, std::vector<Vec3>> vectors;
};

/// Minimal reader for structured-grid files with cell data. Throws Error on malformed input.
VtkData read_vtk(const std::filesystem::path& path);

/// One row per outer iteration with the normalised residuals.
std::string residual_csv(const ResidualHistory& history);

/// iteration,<probe>_T,<probe>_speed,... for every monitor point.
std::string monitor_csv(const ResidualHistory& history, std::size_t point_count);

/// Cell layer normal to `axis` whose centre is closest to `coordinate`.
std::string slice_csv(const Mesh& mesh, const FieldSet& fields, int axis, double coordinate);

/// Boundary-face values of one patch; mass_flux is outward [kg/s].
std::string patch_csv(const Mesh& mesh, const FieldSet& fields, const std::string& patch);

/// Writes `text` to `path`, creating parent directories. Throws Error when the file cannot be written.
void write_text(const std::filesystem::path& path, const std::string& text);

/// Result bundle of one transformer run: fields.vtk, residuals.csv, monitors.csv,
/// slice_symmetry.csv, patch_<name>.csv, summary.json and the echoed config text.
void write_bundle(const std::filesystem::path& dir, const std::string& config_text, const TransformerCaseParams& params,
                  const Case& c, const RunResult& run, double seconds);

/// Summary stored in a bundle's summary.json.
FanRunSummary read_bundle_summary(const std::filesystem::path& dir);

}  // namespace dtcfd
