#pragma once

#include <span>
#include <vector>

#include "dtcfd/mesh.hpp"

namespace dtcfd {

/// Green-Gauss cell gradient over all non-blanked cells. Faces without an active neighbour use
/// the cell value (zero normal gradient). Blanked cells receive a zero gradient.
std::vector<Vec3> gradient(const Mesh& mesh, std::span<const double> phi);

/// Green-Gauss gradient over the cells of `mask`; `edge_values[e]` is the face value on
/// `mask.edges[e]`.
std::vector<Vec3> gradient(const Mesh& mesh, std::span<const double> phi, const CellMask& mask,
                           std::span<const double> edge_values);

/// Velocity gradient tensor (i, j) = d u_i / d x_j over the cells of `mask`.
std::vector<Tensor3> gradient(const Mesh& mesh, std::span<const Vec3> u, const CellMask& mask,
                              std::span<const Vec3> edge_values);

}  // namespace dtcfd
