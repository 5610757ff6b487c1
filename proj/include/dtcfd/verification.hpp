#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "dtcfd/solver.hpp"

namespace dtcfd {

enum class VerificationId { MmsDiffusion, MmsAdvectionDiffusion, Couette, LidCavity, HeatedCavity, SealedStagnant, ConductingSlab };
enum class VerificationLevel { Coarse, Full };

std::string to_string(VerificationId id);
std::string to_string(VerificationLevel level);
/// Throws Error for an unknown id, listing the known ones.
VerificationId parse_verification_id(const std::string& name);
/// Accepts "coarse" or "full"; throws Error otherwise.
VerificationLevel parse_verification_level(const std::string& name);
std::vector<VerificationId> all_verification_ids();

/// One expected metric: passes when `value <= limit` (or `value >= limit` when `at_least`).
struct VerificationCheck {
  std::string metric;
  double value = 0.0;
  double limit = 0.0;
  bool at_least = false;

  bool passed() const { return at_least ? value >= limit : value <= limit; }
};

struct VerificationOutcome {
  VerificationId id = VerificationId::MmsDiffusion;
  std::vector<VerificationCheck> checks;
  int iterations = 0;     ///< outer iterations of the flow runs, 0 for scalar problems
  double seconds = 0.0;
  std::string error;      ///< set when the case failed to run

  bool passed() const;
};

/// Self-contained verification problem: grid levels, construction and expected checks.
struct VerificationCase {
  VerificationId id = VerificationId::MmsDiffusion;
  VerificationLevel level = VerificationLevel::Coarse;
  std::string description;
  std::vector<int> grid_levels;  ///< cells per axis of each grid that is run
  /// Runs the case; flow runs report every outer iteration to the callback.
  std::function<VerificationOutcome(const IterationCallback&)> run;
};

VerificationCase build_verification_case(VerificationId id, VerificationLevel level);

/// Runs every case in order. `on_case` sees each outcome as it completes.
std::vector<VerificationOutcome> run_verification_battery(
    VerificationLevel level, const std::function<void(const VerificationOutcome&)>& on_case = {},
    const IterationCallback& on_iteration = {});

/// Fixed-width PASS/FAIL table, one row per check.
std::string format_battery_table(std::span<const VerificationOutcome> outcomes);

/// Manufactured solution phi = sin(pi x) sin(pi y) on the unit cube (uniform in z).
double mms_solution(const Vec3& p);

enum class MmsProblem {
  Diffusion,            ///< Gamma = 1 with a weak uniform stream, high-resolution advection
  AdvectionDominated,   ///< Gamma = 1e-3, upwind advection
};

struct MmsResult {
  std::vector<int> cells;          ///< cells per axis
  std::vector<double> l2_error;    ///< volume-weighted RMS error
  std::vector<double> order;       ///< observed order between consecutive grids

  double min_order() const;
};

/// Solves the manufactured problem on cubes of `cells_per_axis`^3 cells.
MmsResult mms_convergence(MmsProblem problem, std::span<const int> cells_per_axis);

/// Plane Couette flow between a fixed wall at y = 0 and a wall moving at `lid_speed` along x at
/// y = 1, with the exact linear profile imposed at the inlet x = 0.
Case couette_case(int ny, double lid_speed = 1.0);
/// Largest |u - lid_speed y| + |v| + |w| over the cells [m/s].
double couette_max_error(const Case& c, const FieldSet& fields, double lid_speed = 1.0);

/// Laminar lid-driven unit square cavity (one cell thick, symmetry in z).
Case lid_cavity_case(int n, double reynolds);
/// Minimum u along the vertical centreline (mean of the two middle columns for even n).
double lid_cavity_min_centerline_u(const Case& c, const FieldSet& fields);

/// Laminar differentially heated square cavity: hot wall x = 0, cold wall x = 1, adiabatic top
/// and bottom, unit temperature difference, nondimensional properties.
Case heated_cavity_case(int n, double rayleigh, double prandtl = 0.71, double grading = 1.5);

struct WallNusselt {
  double average = 0.0;
  double maximum = 0.0;
};

/// Local Nusselt number from the one-sided wall gradient on the hot wall.
WallNusselt hot_wall_nusselt(const Case& c, const FieldSet& fields);

/// Closed adiabatic box with a conducting unheated block, turbulence and gravity on, at the
/// reference temperature.
Case sealed_box_case(int n);

/// One-dimensional solid slab of thickness `thickness` with uniform source `source`: adiabatic
/// at x = 0, held at `wall_temperature` at x = thickness.
Case conducting_slab_case(int n, double source = 1.0e5, double conductivity = 2.0, double thickness = 0.1,
                          double wall_temperature = 300.0);

/// Closed-form peak temperature rise q L^2 / (2 lambda).
double slab_peak_rise(double source, double conductivity, double thickness);

/// Published benchmark values used by the battery.
inline constexpr double kLidCavityRe100MinU = -0.21090;
inline constexpr double kHeatedCavityRa1e5NusseltAverage = 4.519;
inline constexpr double kHeatedCavityRa1e5NusseltMaximum = 7.717;

}  // namespace dtcfd
