#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dtcfd/types.hpp"

namespace dtcfd {

class MeshError : public Error {
 public:
  using Error::Error;
};

enum class CellKind : std::uint8_t { Fluid = 0, Solid = 1, Blanked = 2 };

struct CellTag {
  CellKind kind = CellKind::Fluid;
  int solid_id = -1;  ///< region id for Solid cells, -1 otherwise

  static constexpr CellTag fluid() { return {CellKind::Fluid, -1}; }
  static constexpr CellTag solid(int id) { return {CellKind::Solid, id}; }
  static constexpr CellTag blanked() { return {CellKind::Blanked, -1}; }
  friend constexpr bool operator==(const CellTag&, const CellTag&) = default;
};

struct Box {
  Vec3 lo;
  Vec3 hi;
  bool contains(const Vec3& p) const {
    return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y && p.z >= lo.z && p.z <= hi.z;
  }
};

/// Axis-aligned box whose cells receive `tag`. Cells are selected by centroid; a box thinner
/// than one cell along an axis still captures the cell layer containing its mid-plane (both
/// layers when the mid-plane falls on a node).
struct RegionBox {
  Box box;
  CellTag tag;
};

/// Rectangle carved out of one domain side into its own named patch. Only the two tangential
/// extents of `area` are used.
struct PatchRect {
  std::string name;
  Dir side = Dir::XMinus;
  Box area;
};

/// A face of a non-blanked cell that is not shared with another non-blanked cell.
struct BoundaryFace {
  std::size_t cell = 0;
  Dir dir = Dir::XMinus;
  int patch = -1;
};

struct Patch {
  std::string name;
  std::vector<std::size_t> faces;  ///< indices into Mesh::boundary_faces()
};

struct InteriorFace {
  std::size_t owner = 0;
  std::size_t neighbour = 0;
  int axis = 0;
  double area = 0.0;
  Vec3 normal;
  double distance = 0.0;  ///< owner-to-neighbour centroid distance
};

/// Per-axis face arrays of a structured grid (x-faces, y-faces, z-faces).
struct FaceField {
  std::array<std::vector<double>, 3> axis;

  double& at(int a, std::size_t f) { return axis[static_cast<std::size_t>(a)][f]; }
  double at(int a, std::size_t f) const { return axis[static_cast<std::size_t>(a)][f]; }
};

/// Block-structured Cartesian grid with per-cell region tags and labelled boundary patches.
/// Immutable after construction.
class Mesh {
 public:
  static constexpr const char* kBlankedPatch = "blanked";

  Mesh(std::array<std::vector<double>, 3> nodes, std::vector<CellTag> tags,
       std::span<const PatchRect> patches);

  std::array<int, 3> dims() const { return dims_; }
  int n(int axis) const { return dims_[static_cast<std::size_t>(axis)]; }
  std::size_t cell_count() const { return tags_.size(); }

  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(dims_[0]) *
               (static_cast<std::size_t>(j) + static_cast<std::size_t>(dims_[1]) * static_cast<std::size_t>(k));
  }
  std::array<int, 3> ijk(std::size_t c) const { return ijk_[c]; }

  const std::vector<double>& nodes(int axis) const { return nodes_[static_cast<std::size_t>(axis)]; }
  double width(int axis, int i) const { return widths_[static_cast<std::size_t>(axis)][static_cast<std::size_t>(i)]; }
  double center_coord(int axis, int i) const { return centers_[static_cast<std::size_t>(axis)][static_cast<std::size_t>(i)]; }

  const CellTag& tag(std::size_t c) const { return tags_[c]; }
  CellKind kind(std::size_t c) const { return tags_[c].kind; }
  bool is_fluid(std::size_t c) const { return tags_[c].kind == CellKind::Fluid; }
  bool is_active(std::size_t c) const { return tags_[c].kind != CellKind::Blanked; }
  const std::vector<CellTag>& tags() const { return tags_; }

  Vec3 center(std::size_t c) const {
    const auto& q = ijk_[c];
    return {center_coord(0, q[0]), center_coord(1, q[1]), center_coord(2, q[2])};
  }
  Vec3 face_center(std::size_t c, Dir d) const;
  double volume(std::size_t c) const {
    const auto& q = ijk_[c];
    return width(0, q[0]) * width(1, q[1]) * width(2, q[2]);
  }
  double face_area(std::size_t c, Dir d) const {
    const auto& q = ijk_[c];
    switch (axis_of(d)) {
      case 0:
        return width(1, q[1]) * width(2, q[2]);
      case 1:
        return width(0, q[0]) * width(2, q[2]);
      default:
        return width(0, q[0]) * width(1, q[1]);
    }
  }
  /// Half cell width along the face normal (cell centre to face distance).
  double half_width(std::size_t c, Dir d) const {
    const int a = axis_of(d);
    return 0.5 * width(a, ijk_[c][static_cast<std::size_t>(a)]);
  }
  /// Neighbouring cell index, or -1 when the face lies on the domain boundary.
  std::ptrdiff_t neighbour(std::size_t c, Dir d) const {
    const int a = axis_of(d);
    const int i = ijk_[c][static_cast<std::size_t>(a)] + (is_plus(d) ? 1 : -1);
    if (i < 0 || i >= dims_[static_cast<std::size_t>(a)]) return -1;
    const auto s = static_cast<std::ptrdiff_t>(strides_[static_cast<std::size_t>(a)]);
    return static_cast<std::ptrdiff_t>(c) + (is_plus(d) ? s : -s);
  }
  /// Centroid distance to the neighbour, or to the face for domain-boundary faces.
  double center_distance(std::size_t c, Dir d) const {
    const int a = axis_of(d);
    const int i = ijk_[c][static_cast<std::size_t>(a)];
    const int j = i + (is_plus(d) ? 1 : -1);
    if (j < 0 || j >= dims_[static_cast<std::size_t>(a)]) return 0.5 * width(a, i);
    return std::abs(center_coord(a, j) - center_coord(a, i));
  }
  /// Linear interpolation weight of cell `c` at face `d` (1 at its own centre, 0 at the neighbour).
  double interp_weight(std::size_t c, Dir d) const {
    const int a = axis_of(d);
    const int i = ijk_[c][static_cast<std::size_t>(a)];
    const int j = i + (is_plus(d) ? 1 : -1);
    if (j < 0 || j >= dims_[static_cast<std::size_t>(a)]) return 1.0;
    return 0.5 * width(a, j) / std::abs(center_coord(a, j) - center_coord(a, i));
  }

  /// Index of face `d` of cell `c` in the per-axis FaceField arrays.
  std::size_t face_index(std::size_t c, Dir d) const {
    const int a = axis_of(d);
    const auto& q = ijk_[c];
    const auto i = static_cast<std::size_t>(q[0] + (a == 0 && is_plus(d) ? 1 : 0));
    const auto j = static_cast<std::size_t>(q[1] + (a == 1 && is_plus(d) ? 1 : 0));
    const auto k = static_cast<std::size_t>(q[2] + (a == 2 && is_plus(d) ? 1 : 0));
    const auto ex = static_cast<std::size_t>(dims_[0] + (a == 0 ? 1 : 0));
    const auto ey = static_cast<std::size_t>(dims_[1] + (a == 1 ? 1 : 0));
    return i + ex * (j + ey * k);
  }
  std::size_t face_count(int axis) const;
  FaceField make_face_field(double value = 0.0) const;

  const std::vector<BoundaryFace>& boundary_faces() const { return boundary_faces_; }
  /// Boundary-face id of face `d` of cell `c`, or -1 when the face is interior or inactive.
  int boundary_face_id(std::size_t c, Dir d) const {
    return boundary_lookup_[6 * c + static_cast<std::size_t>(index_of(d))];
  }
  const std::vector<Patch>& patches() const { return patches_; }
  int patch_index(const std::string& name) const;

  Box bounds() const;

 private:
  std::array<int, 3> dims_{};
  std::array<std::size_t, 3> strides_{};
  std::vector<std::array<int, 3>> ijk_;
  std::array<std::vector<double>, 3> nodes_;
  std::array<std::vector<double>, 3> centers_;
  std::array<std::vector<double>, 3> widths_;
  std::vector<CellTag> tags_;
  std::vector<BoundaryFace> boundary_faces_;
  std::vector<int> boundary_lookup_;
  std::vector<Patch> patches_;
};

/// Builds a mesh, applying region boxes in order (later boxes overwrite earlier ones).
/// Throws MeshError for non-monotone axes, boxes outside the domain, or bad patch rectangles.
Mesh build_mesh(std::array<std::vector<double>, 3> nodes, std::span<const RegionBox> boxes,
                std::span<const PatchRect> patches = {});

/// `n` equal intervals on [lo, hi].
std::vector<double> uniform_nodes(double lo, double hi, int n);
/// `n` intervals on [lo, hi] clustered symmetrically towards both ends with a tanh stretch.
/// `strength` 0 reproduces uniform spacing.
std::vector<double> graded_nodes(double lo, double hi, int n, double strength);

/// Every face shared by two non-blanked cells, listed once.
std::vector<InteriorFace> interior_face_list(const Mesh& mesh);

/// Maximum over cells of |sum of outward face-area vectors| / (total face area of the cell).
double geometric_closure_residual(const Mesh& mesh);

/// A face of a cell inside an equation's unknown set whose other side is outside that set.
struct EdgeFace {
  std::size_t cell = 0;
  Dir dir = Dir::XMinus;
  int boundary_face = -1;       ///< -1 when the other side is an active cell outside the mask
  std::ptrdiff_t other = -1;    ///< neighbouring cell, -1 on the domain boundary
  double area = 0.0;
  double distance = 0.0;        ///< cell centre to face
};

/// Cell membership of one equation's unknowns.
struct CellMask {
  std::vector<std::uint8_t> on;
  std::vector<EdgeFace> edges;
  std::vector<std::size_t> edge_begin;  ///< edges of cell c are [edge_begin[c], edge_begin[c+1])

  bool operator[](std::size_t c) const { return on[c] != 0; }
  std::size_t count() const;
};

CellMask fluid_mask(const Mesh& mesh);
CellMask active_mask(const Mesh& mesh);

}  // namespace dtcfd
