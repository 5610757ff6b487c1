#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "dtcfd/boundary.hpp"
#include "dtcfd/fields.hpp"
#include "dtcfd/linear.hpp"
#include "dtcfd/thermal.hpp"
#include "dtcfd/transport.hpp"
#include "dtcfd/turbulence.hpp"

namespace dtcfd {

/// Everything needed to run one steady simulation.
struct Case {
  std::string name;
  Mesh mesh;
  BoundaryConditions bcs;
  FluidProps fluid;
  std::vector<SolidProps> solids;
  TurbulenceSettings turbulence;
  double initial_temperature = 313.15;  ///< [K]
  bool solve_flow = true;
  bool solve_energy = true;
  std::vector<Vec3> monitor_points;     ///< probe locations [m]
};

/// Equations in residual order.
enum class Equation { U = 0, V, W, P, K, Epsilon, T };
inline constexpr std::size_t kEquationCount = 7;
inline constexpr std::array<const char*, kEquationCount> kEquationNames{"u", "v", "w", "p", "k", "eps", "T"};

using Residuals = std::array<double, kEquationCount>;

struct Relaxation {
  double momentum = 0.7;
  double pressure = 0.3;
  double temperature = 0.8;
  double k = 0.8;
  double epsilon = 0.8;
};

/// Advection discretisation per equation group.
struct SchemeSet {
  SchemeChoice momentum;
  SchemeChoice turbulence;
  SchemeChoice energy;

  /// Same choice for every group.
  static SchemeSet uniform(const SchemeChoice& s) { return {s, s, s}; }
};

struct SolverControls {
  int max_iterations = 2000;
  Residuals targets{1e-5, 1e-5, 1e-5, 1e-5, 1e-5, 1e-5, 1e-5};
  Relaxation relaxation;
  SchemeSet schemes;
  /// Diverged when a residual exceeds `divergence_factor` times its minimum over the last
  /// `divergence_window` iterations (and is at least 1), or when a field turns non-finite.
  int divergence_window = 50;
  double divergence_factor = 10.0;
  /// False time step [s] added to every equation; 0 uses factor relaxation only.
  double pseudo_time_step = 0.0;
  SolveOptions flow_solver{1e-3, 0.0, 200, SolverKind::Auto, 10};
  SolveOptions pressure_solver{1e-3, 0.0, 500, SolverKind::Auto, 10};
  SolveOptions scalar_solver{1e-3, 0.0, 200, SolverKind::Auto, 10};
  /// Tight pressure-correction pass on the fluxes once the run ends.
  bool final_projection = true;
  double projection_tolerance = 1e-13;

  void validate() const;
};

/// Normalisation of raw residuals: each equation is scaled by its largest raw residual over
/// the first `fix_after` iterations. An equation whose raw residual is still zero by then is
/// normalised by its first non-zero value.
class ResidualNormalizer {
 public:
  explicit ResidualNormalizer(int fix_after = 5) : fix_after_(fix_after) {}
  Residuals normalize(int iteration, const Residuals& raw);
  const Residuals& scale() const { return scale_; }

 private:
  int fix_after_;
  Residuals scale_{};
};

/// Scaled L1 residual sum_c |b - A x|_c / normalization; 0 when the normalisation is 0.
double normalized_residual(const LinearSystem& system, std::span<const double> x, double normalization);

struct MonitorSample {
  double temperature = 0.0;
  double speed = 0.0;
};

struct ResidualHistory {
  std::vector<Residuals> normalized;
  std::vector<Residuals> raw;
  std::vector<std::vector<MonitorSample>> monitors;  ///< per iteration, per monitor point

  std::size_t size() const { return normalized.size(); }
};

/// Observer called after every outer iteration with the normalised residuals and the fields.
using IterationCallback = std::function<void(int, const Residuals&, const FieldSet&)>;

enum class RunStatus { Converged, MaxIterations, Diverged };
std::string to_string(RunStatus s);

struct RunResult {
  FieldSet fields;
  ResidualHistory history;
  RunStatus status = RunStatus::MaxIterations;
  int iterations = 0;
  WallTreatment wall;
  double max_mass_imbalance = 0.0;  ///< max per-cell |net outflow| after the run [kg/s]
  std::string message;
};

/// Segregated steady solve: momentum, pressure correction, k, epsilon, temperature, then the
/// buoyancy and viscosity refresh, repeated until every normalised residual meets its target.
RunResult run_steady(const Case& c, const SolverControls& controls,
                     const IterationCallback& on_iteration = {});

/// Same, continuing from `initial` instead of the stagnant state.
RunResult run_steady(const Case& c, const SolverControls& controls, FieldSet initial,
                     const IterationCallback& on_iteration = {});

/// Raw residuals of one outer iteration started from `fields`, i.e. evaluated at that state.
Residuals raw_residuals(const Case& c, const SolverControls& controls, const FieldSet& fields);

/// Residual normalisation of a run from the stagnant state (largest raw residual of the first
/// iterations, as used by run_steady).
Residuals normalization_scales(const Case& c, const SolverControls& controls);

/// Characteristic mass flux scale rho * max|V| * max face area used by the mass audit [kg/s].
double mass_flux_scale(const Mesh& mesh, const FieldSet& fields, double density);

/// Index of the cell containing `p`, or -1 outside the domain.
std::ptrdiff_t locate_cell(const Mesh& mesh, const Vec3& p);

}  // namespace dtcfd
