#include "dtcfd/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dtcfd {

std::string to_string(Dir d) {
  static constexpr const char* names[] = {"xmin", "xmax", "ymin", "ymax", "zmin", "zmax"};
  return names[index_of(d)];
}

namespace {

void check_axis(const std::vector<double>& nodes, int axis) {
  if (nodes.size() < 2) {
    throw MeshError("axis " + std::to_string(axis) + ": need at least 2 nodes");
  }
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (!(nodes[i] > nodes[i - 1])) {
      std::ostringstream os;
      os << "axis " << axis << ": node coordinates not strictly increasing at index " << i;
      throw MeshError(os.str());
    }
  }
}

/// Cell index range [first, last) along one axis selected by a box extent.
std::pair<int, int> select_range(const std::vector<double>& centers, const std::vector<double>& nodes,
                                 double lo, double hi) {
  const auto first = std::lower_bound(centers.begin(), centers.end(), lo);
  const auto last = std::upper_bound(centers.begin(), centers.end(), hi);
  if (first < last) {
    return {static_cast<int>(first - centers.begin()), static_cast<int>(last - centers.begin())};
  }
  // Thinner than a cell: take the layer that contains the mid-plane, or both layers when the
  // mid-plane is an interior node.
  const double mid = 0.5 * (lo + hi);
  auto it = std::upper_bound(nodes.begin(), nodes.end(), mid);
  const int last_cell = static_cast<int>(centers.size()) - 1;
  int cell = static_cast<int>(it - nodes.begin()) - 1;
  if (cell > 0 && cell <= last_cell && nodes[static_cast<std::size_t>(cell)] == mid) return {cell - 1, cell + 1};
  cell = std::clamp(cell, 0, last_cell);
  return {cell, cell + 1};
}

}  // namespace

Mesh::Mesh(std::array<std::vector<double>, 3> nodes, std::vector<CellTag> tags,
           std::span<const PatchRect> rects)
    : nodes_(std::move(nodes)), tags_(std::move(tags)) {
  for (int a = 0; a < 3; ++a) {
    auto& nd = nodes_[static_cast<std::size_t>(a)];
    check_axis(nd, a);
    dims_[static_cast<std::size_t>(a)] = static_cast<int>(nd.size()) - 1;
    auto& cw = widths_[static_cast<std::size_t>(a)];
    auto& cc = centers_[static_cast<std::size_t>(a)];
    for (std::size_t i = 0; i + 1 < nd.size(); ++i) {
      cw.push_back(nd[i + 1] - nd[i]);
      cc.push_back(0.5 * (nd[i] + nd[i + 1]));
    }
  }
  const std::size_t n = static_cast<std::size_t>(dims_[0]) * static_cast<std::size_t>(dims_[1]) *
                        static_cast<std::size_t>(dims_[2]);
  if (tags_.size() != n) {
    throw MeshError("tag array size does not match cell count");
  }
  strides_ = {1, static_cast<std::size_t>(dims_[0]),
              static_cast<std::size_t>(dims_[0]) * static_cast<std::size_t>(dims_[1])};
  ijk_.resize(n);
  for (int k = 0; k < dims_[2]; ++k) {
    for (int j = 0; j < dims_[1]; ++j) {
      for (int i = 0; i < dims_[0]; ++i) ijk_[index(i, j, k)] = {i, j, k};
    }
  }

  // Side patches first, then carved rectangles, then faces against blanked cells.
  std::vector<std::string> names;
  for (Dir d : kAllDirs) names.push_back(to_string(d));
  for (const auto& r : rects) {
    if (std::find(names.begin(), names.end(), r.name) != names.end() || r.name == kBlankedPatch) {
      throw MeshError("duplicate patch name '" + r.name + "'");
    }
    names.push_back(r.name);
  }
  const int blanked_id = static_cast<int>(names.size());
  names.emplace_back(kBlankedPatch);

  boundary_lookup_.assign(6 * n, -1);
  std::vector<std::vector<std::size_t>> members(names.size());
  for (std::size_t c = 0; c < n; ++c) {
    if (!is_active(c)) continue;
    for (Dir d : kAllDirs) {
      const auto nb = neighbour(c, d);
      int patch = -1;
      if (nb < 0) {
        patch = index_of(d);
        const Vec3 fc = face_center(c, d);
        for (std::size_t r = 0; r < rects.size(); ++r) {
          const auto& rect = rects[r];
          if (rect.side != d) continue;
          bool inside = true;
          for (int a = 0; a < 3; ++a) {
            if (a == axis_of(d)) continue;
            inside = inside && fc[a] >= rect.area.lo[a] && fc[a] <= rect.area.hi[a];
          }
          if (!inside) continue;
          if (patch >= 6) {
            throw MeshError("patch rectangles '" + names[static_cast<std::size_t>(patch)] + "' and '" +
                            rect.name + "' overlap");
          }
          patch = 6 + static_cast<int>(r);
        }
      } else if (!is_active(static_cast<std::size_t>(nb))) {
        patch = blanked_id;
      }
      if (patch < 0) continue;
      const std::size_t id = boundary_faces_.size();
      boundary_faces_.push_back({c, d, patch});
      boundary_lookup_[6 * c + static_cast<std::size_t>(index_of(d))] = static_cast<int>(id);
      members[static_cast<std::size_t>(patch)].push_back(id);
    }
  }

  for (std::size_t r = 0; r < rects.size(); ++r) {
    if (members[6 + r].empty()) {
      throw MeshError("patch rectangle '" + rects[r].name + "' selects no boundary faces");
    }
  }
  // Drop empty patches and renumber.
  std::vector<int> remap(names.size(), -1);
  for (std::size_t p = 0; p < names.size(); ++p) {
    if (members[p].empty()) continue;
    remap[p] = static_cast<int>(patches_.size());
    patches_.push_back({names[p], std::move(members[p])});
  }
  for (auto& bf : boundary_faces_) bf.patch = remap[static_cast<std::size_t>(bf.patch)];
}

Vec3 Mesh::face_center(std::size_t c, Dir d) const {
  Vec3 p = center(c);
  const int a = axis_of(d);
  const int idx = ijk_[c][static_cast<std::size_t>(a)];
  p[a] = nodes(a)[static_cast<std::size_t>(idx + (is_plus(d) ? 1 : 0))];
  return p;
}

std::size_t Mesh::face_count(int axis) const {
  std::size_t n = 1;
  for (int b = 0; b < 3; ++b) {
    n *= static_cast<std::size_t>(dims_[static_cast<std::size_t>(b)] + (b == axis ? 1 : 0));
  }
  return n;
}

FaceField Mesh::make_face_field(double value) const {
  FaceField f;
  for (int a = 0; a < 3; ++a) f.axis[static_cast<std::size_t>(a)].assign(face_count(a), value);
  return f;
}

int Mesh::patch_index(const std::string& name) const {
  for (std::size_t p = 0; p < patches_.size(); ++p) {
    if (patches_[p].name == name) return static_cast<int>(p);
  }
  return -1;
}

Box Mesh::bounds() const {
  return {{nodes_[0].front(), nodes_[1].front(), nodes_[2].front()},
          {nodes_[0].back(), nodes_[1].back(), nodes_[2].back()}};
}

Mesh build_mesh(std::array<std::vector<double>, 3> nodes, std::span<const RegionBox> boxes,
                std::span<const PatchRect> patches) {
  std::array<std::vector<double>, 3> centers;
  std::array<int, 3> dims{};
  for (int a = 0; a < 3; ++a) {
    const auto& nd = nodes[static_cast<std::size_t>(a)];
    check_axis(nd, a);
    dims[static_cast<std::size_t>(a)] = static_cast<int>(nd.size()) - 1;
    for (std::size_t i = 0; i + 1 < nd.size(); ++i) {
      centers[static_cast<std::size_t>(a)].push_back(0.5 * (nd[i] + nd[i + 1]));
    }
  }
  const std::size_t n = static_cast<std::size_t>(dims[0]) * static_cast<std::size_t>(dims[1]) *
                        static_cast<std::size_t>(dims[2]);
  std::vector<CellTag> tags(n, CellTag::fluid());

  for (std::size_t b = 0; b < boxes.size(); ++b) {
    const auto& box = boxes[b].box;
    std::array<std::pair<int, int>, 3> range;
    for (int a = 0; a < 3; ++a) {
      const auto& nd = nodes[static_cast<std::size_t>(a)];
      const double span = nd.back() - nd.front();
      const double tol = 1e-12 * span;
      if (!(box.lo[a] <= box.hi[a]) || box.lo[a] < nd.front() - tol || box.hi[a] > nd.back() + tol) {
        std::ostringstream os;
        os << "region box " << b << " [(" << box.lo.x << ", " << box.lo.y << ", " << box.lo.z << ") - ("
           << box.hi.x << ", " << box.hi.y << ", " << box.hi.z << ")] lies outside the domain";
        throw MeshError(os.str());
      }
      range[static_cast<std::size_t>(a)] =
          select_range(centers[static_cast<std::size_t>(a)], nd, box.lo[a], box.hi[a]);
    }
    for (int k = range[2].first; k < range[2].second; ++k) {
      for (int j = range[1].first; j < range[1].second; ++j) {
        for (int i = range[0].first; i < range[0].second; ++i) {
          const std::size_t c = static_cast<std::size_t>(i) +
                                static_cast<std::size_t>(dims[0]) *
                                    (static_cast<std::size_t>(j) +
                                     static_cast<std::size_t>(dims[1]) * static_cast<std::size_t>(k));
          tags[c] = boxes[b].tag;
        }
      }
    }
  }
  return Mesh(std::move(nodes), std::move(tags), patches);
}

std::vector<double> uniform_nodes(double lo, double hi, int n) {
  if (n < 1 || !(hi > lo)) throw MeshError("uniform_nodes: need n >= 1 and hi > lo");
  std::vector<double> x(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) x[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / n;
  x.back() = hi;
  return x;
}

std::vector<double> graded_nodes(double lo, double hi, int n, double strength) {
  if (strength <= 0.0) return uniform_nodes(lo, hi, n);
  if (n < 1 || !(hi > lo)) throw MeshError("graded_nodes: need n >= 1 and hi > lo");
  std::vector<double> x(static_cast<std::size_t>(n) + 1);
  const double t = std::tanh(strength);
  for (int i = 0; i <= n; ++i) {
    const double s = 2.0 * i / n - 1.0;  // [-1, 1]
    x[static_cast<std::size_t>(i)] = lo + (hi - lo) * 0.5 * (1.0 + std::tanh(strength * s) / t);
  }
  x.front() = lo;
  x.back() = hi;
  return x;
}

std::vector<InteriorFace> interior_face_list(const Mesh& mesh) {
  std::vector<InteriorFace> faces;
  for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
    if (!mesh.is_active(c)) continue;
    for (Dir d : {Dir::XPlus, Dir::YPlus, Dir::ZPlus}) {
      const auto nb = mesh.neighbour(c, d);
      if (nb < 0 || !mesh.is_active(static_cast<std::size_t>(nb))) continue;
      faces.push_back({c, static_cast<std::size_t>(nb), axis_of(d), mesh.face_area(c, d), unit_normal(d),
                       mesh.center_distance(c, d)});
    }
  }
  return faces;
}

double geometric_closure_residual(const Mesh& mesh) {
  double worst = 0.0;
  for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
    Vec3 sum;
    double total = 0.0;
    for (Dir d : kAllDirs) {
      const double a = mesh.face_area(c, d);
      sum += unit_normal(d) * a;
      total += a;
    }
    worst = std::max(worst, norm(sum) / total);
  }
  return worst;
}

std::size_t CellMask::count() const {
  return static_cast<std::size_t>(std::count(on.begin(), on.end(), std::uint8_t{1}));
}

namespace {

CellMask make_mask(const Mesh& mesh, bool fluid_only) {
  CellMask m;
  m.on.assign(mesh.cell_count(), 0);
  for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
    m.on[c] = fluid_only ? mesh.is_fluid(c) : mesh.is_active(c);
  }
  m.edge_begin.assign(mesh.cell_count() + 1, 0);
  for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
    m.edge_begin[c] = m.edges.size();
    if (!m.on[c]) continue;
    for (Dir d : kAllDirs) {
      const auto nb = mesh.neighbour(c, d);
      if (nb >= 0 && m.on[static_cast<std::size_t>(nb)]) continue;
      m.edges.push_back({c, d, mesh.boundary_face_id(c, d), nb, mesh.face_area(c, d), mesh.half_width(c, d)});
    }
  }
  m.edge_begin[mesh.cell_count()] = m.edges.size();
  return m;
}

}  // namespace

CellMask fluid_mask(const Mesh& mesh) { return make_mask(mesh, true); }
CellMask active_mask(const Mesh& mesh) { return make_mask(mesh, false); }

}  // namespace dtcfd
