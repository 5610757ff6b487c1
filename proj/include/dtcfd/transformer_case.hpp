#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "dtcfd/solver.hpp"

namespace dtcfd {

/// How `fan_flow` is interpreted.
enum class FlowMode { PerFan, Total };
std::string to_string(FlowMode m);

/// Solid region ids of the transformer case.
inline constexpr int kCoreRegion = 0;
inline constexpr int kLowVoltageRegion = 1;
inline constexpr int kHighVoltageRegion = 2;

/// Dry transformer in a cooled enclosure. Three phases stand in a row along x with the centre
/// phase on the symmetry plane x = 0; the half model covers x in [0, length]. Each phase is a
/// core leg wrapped by a low-voltage and a high-voltage winding, rasterised as square rings with
/// an inner channel (core to LV) and a duct (LV to HV). A sealing plate at mid-height closes
/// the cross-section outside the windings. Heat-exchanger inlets (low) and exhaust fans (high)
/// sit on the end wall x = length.
struct TransformerCaseParams {
  double length = 1.5;  ///< half-model extent along x [m]
  double height = 2.25;
  double depth = 0.75;
  std::array<int, 3> cells{64, 96, 32};  ///< half-model cell counts
  bool full_model = false;               ///< mirror across x = 0 instead of a symmetry plane

  double phase_pitch = 0.75;
  double core_half_width = 0.08;
  double inner_channel = 0.055;
  double lv_thickness = 0.065;
  double duct_width = 0.055;
  double hv_thickness = 0.075;
  double winding_bottom = 0.35;
  double winding_top = 1.85;
  double core_bottom = 0.2;
  double core_top = 2.0;
  double yoke_height = 0.15;

  bool baffle = true;
  double baffle_y = 1.10;
  double baffle_thickness = 0.04;

  bool beams = true;
  double beam_bottom = 2.05;
  double beam_top = 2.15;
  double beam_length = 1.2;  ///< from the symmetry plane
  std::vector<std::pair<double, double>> beam_z{{0.1, 0.2}, {0.55, 0.65}};

  int fan_count = 2;  ///< fans on the whole transformer (half model carries fan_count / 2)
  FlowMode flow_mode = FlowMode::PerFan;
  double fan_flow = 0.5;  ///< [m3/s] per fan, or for all fans when flow_mode is Total
  double fan_bottom = 1.35;
  double fan_top = 1.75;
  double fan_width = 0.3;

  double inlet_bottom = 0.25;
  double inlet_top = 0.95;
  double inlet_z_lo = 0.1;
  double inlet_z_hi = 0.65;
  double inlet_temperature = 313.15;
  double turbulence_intensity = 0.05;
  double turbulence_length = 0.05;  ///< [m]

  double winding_source = 10000.0;  ///< [W/m3]
  double core_source = 3000.0;      ///< [W/m3]
  double winding_conductivity_axial = 5.0;
  double winding_conductivity_radial = 1.5;
  double core_conductivity_axial = 20.0;
  double core_conductivity_radial = 2.0;

  FluidProps fluid;
  TurbulenceSettings turbulence;
  double initial_temperature = 313.15;

  /// Throws Error for inconsistent geometry (overlapping phases or fans, parts outside the
  /// enclosure) or an odd fan count.
  void validate() const;

  int fans_per_side() const { return fan_count / 2; }
  /// Flow through one fan [m3/s].
  double flow_per_fan() const;
  /// Flow through the fans of the modelled part [m3/s].
  double modelled_flow() const;
  /// x of every phase centre inside the modelled domain.
  std::vector<double> phase_centers() const;
  double hv_outer() const;
  /// Lateral rectangle [z_lo, z_hi] of fan `k` on one side.
  std::pair<double, double> fan_z(int k) const;
};

/// Half (or mirrored full) transformer case ready for run_steady.
Case build_transformer_case(const TransformerCaseParams& params);

/// Desk-scale preset: 64 x 96 x 32 cells on the half model.
TransformerCaseParams desk_transformer_params();
/// CI preset: 32 x 48 x 16 cells, eight times fewer cells than the desk preset.
TransformerCaseParams coarse_transformer_params();

/// Solver controls for the transformer case: upwind momentum and turbulence, high-resolution
/// energy.
SolverControls transformer_controls();

/// Whether a cell column at (x, z) lies inside a winding footprint (core, windings, channels).
bool in_winding_column(const TransformerCaseParams& params, double x, double z);

struct TransformerMetrics {
  double mean_outlet_temperature = 0.0;  ///< flow-weighted over fan faces [K]
  double peak_winding_temperature = 0.0; ///< [K]
  double peak_solid_temperature = 0.0;   ///< [K]
  double mean_channel_velocity = 0.0;    ///< mean |v_y| over channel fluid cells [m/s]
  double plenum_mean_temperature = 0.0;  ///< fluid below the windings [K]
  double plenum_temperature_spread = 0.0;///< max - min there [K]
  double mid_plane_channel_fraction = 0.0; ///< share of |vertical mass flux| at mid-height through winding columns
  double channel_area = 0.0;             ///< vertical flow area of the channels at mid-height [m2]
  double heat_load = 0.0;                ///< total heat release of the modelled part [W]
  double total_flow = 0.0;               ///< [m3/s]
  int outlet_patches = 0;
};

TransformerMetrics transformer_metrics(const Case& c, const TransformerCaseParams& params, const FieldSet& fields);

/// True when every fluid path from the region below the sealing plate to the region above it
/// passes through a winding column.
bool baffle_seals(const Case& c, const TransformerCaseParams& params);

/// Cell of the mirrored full model at the position of half-model cell `half_cell` (x > 0), or
/// at its reflection across x = 0 when `reflected` is set.
std::size_t full_model_cell(const Mesh& half, const Mesh& full, std::size_t half_cell, bool reflected);

/// Half-model solution reflected across x = 0 onto the full-model grid (cell fields and mass
/// fluxes; derived fields are left at their full-model initial values).
FieldSet reflect_to_full_model(const Case& half, const Case& full, const FieldSet& fields);

}  // namespace dtcfd
