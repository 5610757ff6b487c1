#include "dtcfd/transformer_case.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace dtcfd {

std::string to_string(FlowMode m) { return m == FlowMode::PerFan ? "per-fan" : "total"; }

double TransformerCaseParams::hv_outer() const {
  return core_half_width + inner_channel + lv_thickness + duct_width + hv_thickness;
}

double TransformerCaseParams::flow_per_fan() const {
  return flow_mode == FlowMode::PerFan ? fan_flow : fan_flow / fan_count;
}

double TransformerCaseParams::modelled_flow() const {
  return flow_per_fan() * (full_model ? fan_count : fans_per_side());
}

std::vector<double> TransformerCaseParams::phase_centers() const {
  if (full_model) return {-phase_pitch, 0.0, phase_pitch};
  return {0.0, phase_pitch};
}

std::pair<double, double> TransformerCaseParams::fan_z(int k) const {
  const double c = depth * (k + 0.5) / fans_per_side();
  return {c - 0.5 * fan_width, c + 0.5 * fan_width};
}

void TransformerCaseParams::validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw Error("transformer case: " + what);
  };
  require(length > 0.0 && height > 0.0 && depth > 0.0, "enclosure dimensions must be > 0");
  require(cells[0] >= 1 && cells[1] >= 1 && cells[2] >= 1, "cell counts must be >= 1");
  require(core_half_width > 0.0 && inner_channel > 0.0 && lv_thickness > 0.0 && duct_width > 0.0 &&
              hv_thickness > 0.0,
          "winding ring dimensions must be > 0");
  require(phase_pitch >= 2.0 * hv_outer(), "phases overlap: pitch is smaller than two winding radii");
  require(phase_pitch + hv_outer() < length, "outer phase does not fit inside the enclosure");
  require(2.0 * hv_outer() < depth, "windings do not fit across the enclosure depth");
  require(core_bottom > 0.0 && core_bottom + yoke_height <= winding_bottom && winding_bottom < winding_top &&
              winding_top <= core_top - yoke_height && core_top < height,
          "core and winding heights are inconsistent");
  require(!baffle || (baffle_y - 0.5 * baffle_thickness > winding_bottom &&
                      baffle_y + 0.5 * baffle_thickness < winding_top && baffle_thickness > 0.0),
          "sealing plate must lie within the winding height");
  require(fan_count >= 2 && fan_count % 2 == 0, "fan count must be even and >= 2 (fans come in symmetric pairs)");
  require(fan_flow > 0.0, "fan flow must be > 0");
  require(fan_width > 0.0 && fan_width * fans_per_side() <= depth, "fans overlap along the end wall");
  require(fan_bottom < fan_top && fan_top <= height && inlet_bottom >= 0.0 && inlet_bottom < inlet_top &&
              inlet_top <= fan_bottom,
          "inlet must lie below the fans on the end wall");
  require(inlet_z_lo >= 0.0 && inlet_z_lo < inlet_z_hi && inlet_z_hi <= depth, "inlet extends past the end wall");
  require(!beams || (beam_bottom < beam_top && beam_top <= height && beam_length <= length),
          "beams must lie inside the enclosure");
  require(inlet_temperature > 0.0 && initial_temperature > 0.0, "temperatures must be > 0 K");
  require(winding_source >= 0.0 && core_source >= 0.0, "heat sources must be >= 0");
  require(turbulence_intensity > 0.0 && turbulence_length > 0.0, "inlet turbulence must be > 0");
}

TransformerCaseParams desk_transformer_params() { return {}; }

TransformerCaseParams coarse_transformer_params() {
  TransformerCaseParams p;
  p.cells = {32, 48, 16};
  return p;
}

SolverControls transformer_controls() {
  SolverControls c;
  c.schemes.momentum.advection = AdvectionScheme::Upwind;
  c.schemes.turbulence.advection = AdvectionScheme::Upwind;
  c.schemes.energy.advection = AdvectionScheme::HighResolution;
  return c;
}

bool in_winding_column(const TransformerCaseParams& p, double x, double z) {
  const double r = p.hv_outer();
  for (double xc : p.phase_centers()) {
    if (std::abs(x - xc) <= r && std::abs(z - 0.5 * p.depth) <= r) return true;
  }
  return false;
}

namespace {

std::vector<double> x_nodes(const TransformerCaseParams& p) {
  auto half = uniform_nodes(0.0, p.length, p.cells[0]);
  if (!p.full_model) return half;
  std::vector<double> full;
  for (auto it = half.rbegin(); it != half.rend(); ++it) full.push_back(-*it);
  full.insert(full.end(), half.begin() + 1, half.end());
  full[static_cast<std::size_t>(p.cells[0])] = 0.0;
  return full;
}

}  // namespace

Case build_transformer_case(const TransformerCaseParams& p) {
  p.validate();
  p.fluid.validate();
  const double x_lo = p.full_model ? -p.length : 0.0;
  const double x_hi = p.length;
  const double zc = 0.5 * p.depth;
  const auto centers = p.phase_centers();

  std::vector<RegionBox> boxes;
  auto ring_box = [&](double xc, double r, double y0, double y1, CellTag tag) {
    boxes.push_back({{{std::max(xc - r, x_lo), y0, zc - r}, {std::min(xc + r, x_hi), y1, zc + r}}, tag});
  };
  if (p.baffle) {
    boxes.push_back({{{x_lo, p.baffle_y - 0.5 * p.baffle_thickness, 0.0},
                      {x_hi, p.baffle_y + 0.5 * p.baffle_thickness, p.depth}},
                     CellTag::blanked()});
  }
  const double r_core = p.core_half_width;
  const double r_gap = r_core + p.inner_channel;
  const double r_lv = r_gap + p.lv_thickness;
  const double r_duct = r_lv + p.duct_width;
  const double r_hv = p.hv_outer();
  for (double xc : centers) {
    ring_box(xc, r_hv, p.winding_bottom, p.winding_top, CellTag::solid(kHighVoltageRegion));
    ring_box(xc, r_duct, p.winding_bottom, p.winding_top, CellTag::fluid());
    ring_box(xc, r_lv, p.winding_bottom, p.winding_top, CellTag::solid(kLowVoltageRegion));
    ring_box(xc, r_gap, p.winding_bottom, p.winding_top, CellTag::fluid());
  }
  for (double xc : centers) ring_box(xc, r_core, p.core_bottom, p.core_top, CellTag::solid(kCoreRegion));
  const double yoke_x0 = std::max(centers.front() - r_core, x_lo);
  const double yoke_x1 = std::min(centers.back() + r_core, x_hi);
  for (double y0 : {p.core_bottom, p.core_top - p.yoke_height}) {
    boxes.push_back({{{yoke_x0, y0, zc - r_core}, {yoke_x1, y0 + p.yoke_height, zc + r_core}},
                     CellTag::solid(kCoreRegion)});
  }
  if (p.beams) {
    for (const auto& [z0, z1] : p.beam_z) {
      boxes.push_back({{{p.full_model ? -p.beam_length : 0.0, p.beam_bottom, z0}, {p.beam_length, p.beam_top, z1}},
                       CellTag::blanked()});
    }
  }

  std::vector<PatchRect> rects;
  auto add_side = [&](Dir side, const std::string& suffix) {
    rects.push_back({"inlet" + suffix, side, {{0.0, p.inlet_bottom, p.inlet_z_lo}, {0.0, p.inlet_top, p.inlet_z_hi}}});
    for (int k = 0; k < p.fans_per_side(); ++k) {
      const auto [z0, z1] = p.fan_z(k);
      rects.push_back({"fan" + std::to_string(k + 1) + suffix, side, {{0.0, p.fan_bottom, z0}, {0.0, p.fan_top, z1}}});
    }
  };
  add_side(Dir::XPlus, "");
  if (p.full_model) add_side(Dir::XMinus, "_mirror");

  const int ny = p.cells[1];
  const int nz = p.cells[2];
  Mesh mesh = build_mesh({x_nodes(p), uniform_nodes(0.0, p.height, ny), uniform_nodes(0.0, p.depth, nz)}, boxes, rects);

  const double side_flow = p.flow_per_fan() * p.fans_per_side();
  std::vector<BoundarySpec> specs;
  for (const auto& patch : mesh.patches()) {
    const std::string& name = patch.name;
    if (name.rfind("inlet", 0) == 0) {
      double area = 0.0;
      for (auto f : patch.faces) {
        const auto& bf = mesh.boundary_faces()[f];
        area += mesh.face_area(bf.cell, bf.dir);
      }
      const Dir side = mesh.boundary_faces()[patch.faces.front()].dir;
      const double u = side_flow / area;
      VelocityInlet in;
      in.velocity = unit_normal(side) * (-u);
      in.temperature = p.inlet_temperature;
      in.k = 1.5 * std::pow(p.turbulence_intensity * u, 2.0);
      in.epsilon = std::pow(p.turbulence.constants.c_mu, 0.75) * std::pow(in.k, 1.5) / p.turbulence_length;
      specs.push_back({name, in});
    } else if (name.rfind("fan", 0) == 0) {
      specs.push_back({name, OutletFlow{p.flow_per_fan()}});
    } else if (name == "xmin" && !p.full_model) {
      specs.push_back({name, Symmetry{}});
    } else {
      specs.push_back({name, Wall{}});
    }
  }

  std::vector<SolidProps> solids;
  solids.push_back({kCoreRegion, "core", p.core_conductivity_axial, p.core_conductivity_radial, 1, p.core_source});
  solids.push_back({kLowVoltageRegion, "lv_winding", p.winding_conductivity_axial, p.winding_conductivity_radial, 1,
                    p.winding_source});
  solids.push_back({kHighVoltageRegion, "hv_winding", p.winding_conductivity_axial, p.winding_conductivity_radial, 1,
                    p.winding_source});

  BoundaryConditions bcs(mesh, std::move(specs));
  Case c{p.full_model ? "transformer-full" : "transformer-half",
         std::move(mesh),
         std::move(bcs),
         p.fluid,
         std::move(solids),
         p.turbulence,
         p.initial_temperature,
         true,
         true,
         {}};
  const double phase_b_hv = 0.5 * (r_duct + r_hv);
  c.monitor_points = {{phase_b_hv, 0.5 * (p.winding_bottom + p.winding_top), zc},
                      {0.5 * p.length, 0.5 * p.winding_bottom, zc},
                      {p.length - 0.05, 0.5 * (p.fan_bottom + p.fan_top), p.fan_z(0).first + 0.5 * p.fan_width}};
  return c;
}

TransformerMetrics transformer_metrics(const Case& c, const TransformerCaseParams& p, const FieldSet& f) {
  const Mesh& mesh = c.mesh;
  TransformerMetrics m;
  m.total_flow = p.modelled_flow();

  double flow = 0.0;
  double weighted = 0.0;
  for (std::size_t pi = 0; pi < mesh.patches().size(); ++pi) {
    if (!std::holds_alternative<OutletFlow>(c.bcs.for_patch(static_cast<int>(pi)).kind)) continue;
    ++m.outlet_patches;
    for (auto fid : mesh.patches()[pi].faces) {
      const auto& bf = mesh.boundary_faces()[fid];
      const double out = outward_flux(mesh, f.mass_flux, bf.cell, bf.dir);
      flow += out;
      weighted += out * f.temperature[bf.cell];
    }
  }
  m.mean_outlet_temperature = flow > 0.0 ? weighted / flow : 0.0;

  double channel_speed = 0.0;
  int channel_cells = 0;
  double plenum_sum = 0.0;
  double plenum_min = 1e300;
  double plenum_max = -1e300;
  int plenum_cells = 0;
  for (std::size_t cell = 0; cell < mesh.cell_count(); ++cell) {
    const Vec3 x = mesh.center(cell);
    if (mesh.kind(cell) == CellKind::Solid) {
      const int region = mesh.tag(cell).solid_id;
      m.heat_load += solid_props(c.solids, region).heat_source * mesh.volume(cell);
      m.peak_solid_temperature = std::max(m.peak_solid_temperature, f.temperature[cell]);
      if (region != kCoreRegion) m.peak_winding_temperature = std::max(m.peak_winding_temperature, f.temperature[cell]);
      continue;
    }
    if (!mesh.is_fluid(cell)) continue;
    const bool column = in_winding_column(p, x.x, x.z);
    if (column && x.y > p.winding_bottom && x.y < p.winding_top) {
      channel_speed += std::abs(f.velocity[cell].y);
      ++channel_cells;
    }
    if (!column && x.y < p.winding_bottom) {
      const double t = f.temperature[cell];
      plenum_sum += t;
      plenum_min = std::min(plenum_min, t);
      plenum_max = std::max(plenum_max, t);
      ++plenum_cells;
    }
  }
  m.mean_channel_velocity = channel_cells > 0 ? channel_speed / channel_cells : 0.0;
  if (plenum_cells > 0) {
    m.plenum_mean_temperature = plenum_sum / plenum_cells;
    m.plenum_temperature_spread = plenum_max - plenum_min;
  }

  // Horizontal node plane closest to mid-height.
  const auto& yn = mesh.nodes(1);
  int jm = 1;
  for (int j = 1; j < mesh.n(1); ++j) {
    if (std::abs(yn[static_cast<std::size_t>(j)] - 0.5 * p.height) <
        std::abs(yn[static_cast<std::size_t>(jm)] - 0.5 * p.height)) {
      jm = j;
    }
  }
  double total = 0.0;
  double through_columns = 0.0;
  for (int k = 0; k < mesh.n(2); ++k) {
    for (int i = 0; i < mesh.n(0); ++i) {
      const std::size_t below = mesh.index(i, jm - 1, k);
      const std::size_t above = mesh.index(i, jm, k);
      const double flux = std::abs(f.mass_flux.at(1, mesh.face_index(below, Dir::YPlus)));
      total += flux;
      const Vec3 x = mesh.center(below);
      if (in_winding_column(p, x.x, x.z)) {
        through_columns += flux;
        if (mesh.is_fluid(below) && mesh.is_fluid(above)) m.channel_area += mesh.face_area(below, Dir::YPlus);
      }
    }
  }
  m.mid_plane_channel_fraction = total > 0.0 ? through_columns / total : 1.0;
  return m;
}

bool baffle_seals(const Case& c, const TransformerCaseParams& p) {
  const Mesh& mesh = c.mesh;
  const double lower = p.baffle_y - 0.5 * p.baffle_thickness;
  const double upper = p.baffle_y + 0.5 * p.baffle_thickness;
  auto open = [&](std::size_t cell) {
    const Vec3 x = mesh.center(cell);
    return mesh.is_fluid(cell) && !in_winding_column(p, x.x, x.z);
  };
  std::vector<std::uint8_t> seen(mesh.cell_count(), 0);
  std::deque<std::size_t> queue;
  for (std::size_t cell = 0; cell < mesh.cell_count(); ++cell) {
    if (open(cell) && mesh.center(cell).y < lower) {
      seen[cell] = 1;
      queue.push_back(cell);
    }
  }
  while (!queue.empty()) {
    const std::size_t cell = queue.front();
    queue.pop_front();
    if (mesh.center(cell).y > upper) return false;
    for (Dir d : kAllDirs) {
      const auto nb = mesh.neighbour(cell, d);
      if (nb < 0) continue;
      const auto n = static_cast<std::size_t>(nb);
      if (!seen[n] && open(n)) {
        seen[n] = 1;
        queue.push_back(n);
      }
    }
  }
  return true;
}

std::size_t full_model_cell(const Mesh& half, const Mesh& full, std::size_t half_cell, bool reflected) {
  const auto [i, j, k] = half.ijk(half_cell);
  const int nx = half.n(0);
  if (full.n(0) != 2 * nx || full.n(1) != half.n(1) || full.n(2) != half.n(2)) {
    throw Error("full model grid does not mirror the half model");
  }
  return full.index(reflected ? nx - 1 - i : nx + i, j, k);
}

FieldSet reflect_to_full_model(const Case& half, const Case& full, const FieldSet& h) {
  const Mesh& hm = half.mesh;
  const Mesh& fm = full.mesh;
  FieldSet f = init_stagnant(fm, full.fluid, full.initial_temperature, full.turbulence);
  for (std::size_t c = 0; c < hm.cell_count(); ++c) {
    for (bool reflected : {false, true}) {
      const std::size_t fc = full_model_cell(hm, fm, c, reflected);
      Vec3 v = h.velocity[c];
      if (reflected) v.x = -v.x;
      f.velocity[fc] = v;
      f.pressure[fc] = h.pressure[c];
      f.temperature[fc] = h.temperature[c];
      f.k[fc] = h.k[c];
      f.epsilon[fc] = h.epsilon[c];
      f.mu_t[fc] = h.mu_t[c];
      f.mu_eff[fc] = h.mu_eff[c];
      for (Dir d : {Dir::XPlus, Dir::YPlus, Dir::ZPlus}) {
        const int a = axis_of(d);
        const double flux = h.mass_flux.at(a, hm.face_index(c, d));
        if (a != 0) {
          f.mass_flux.at(a, fm.face_index(fc, d)) = flux;
        } else if (reflected) {
          f.mass_flux.at(0, fm.face_index(fc, Dir::XMinus)) = -flux;
        } else {
          f.mass_flux.at(0, fm.face_index(fc, Dir::XPlus)) = flux;
        }
      }
    }
    if (hm.ijk(c)[0] == 0) f.mass_flux.at(0, fm.face_index(full_model_cell(hm, fm, c, false), Dir::XMinus)) = 0.0;
  }
  return f;
}

}  // namespace dtcfd
