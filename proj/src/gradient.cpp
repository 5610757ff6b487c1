#include "dtcfd/gradient.hpp"

namespace dtcfd {


std::vector<Vec3> gradient(const Mesh& mesh, std::span<const double> phi) {
  const auto mask = active_mask(mesh);
  std::vector<double> edge(mask.edges.size());
  for (std::size_t e = 0; e < edge.size(); ++e) edge[e] = phi[mask.edges[e].cell];
  return gradient(mesh, phi, mask, edge);
}

std::vector<Vec3> gradient(const Mesh& mesh, std::span<const double> phi, const CellMask& mask,
                           std::span<const double> edge_values) {
  std::vector<Vec3> g(mesh.cell_count());
  const auto n = static_cast<std::ptrdiff_t>(mesh.cell_count());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ci = 0; ci < n; ++ci) {
    const auto c = static_cast<std::size_t>(ci);
    if (!mask[c]) continue;
    Vec3 acc;
    std::size_t e = mask.edge_begin[c];
    for (Dir d : kAllDirs) {
      const auto nb = mesh.neighbour(c, d);
      double face;
      if (nb >= 0 && mask[static_cast<std::size_t>(nb)]) {
        const double w = mesh.interp_weight(c, d);
        face = w * phi[c] + (1.0 - w) * phi[static_cast<std::size_t>(nb)];
      } else {
        face = edge_values[e++];
      }
      acc[axis_of(d)] += sign_of(d) * face * mesh.face_area(c, d);
    }
    g[c] = acc * (1.0 / mesh.volume(c));
  }
  return g;
}

std::vector<Tensor3> gradient(const Mesh& mesh, std::span<const Vec3> u, const CellMask& mask,
                              std::span<const Vec3> edge_values) {
  std::vector<Tensor3> g(mesh.cell_count());
  const auto n = static_cast<std::ptrdiff_t>(mesh.cell_count());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ci = 0; ci < n; ++ci) {
    const auto c = static_cast<std::size_t>(ci);
    if (!mask[c]) continue;
    Tensor3 acc;
    std::size_t e = mask.edge_begin[c];
    for (Dir d : kAllDirs) {
      const auto nb = mesh.neighbour(c, d);
      Vec3 face;
      if (nb >= 0 && mask[static_cast<std::size_t>(nb)]) {
        const double w = mesh.interp_weight(c, d);
        face = w * u[c] + (1.0 - w) * u[static_cast<std::size_t>(nb)];
      } else {
        face = edge_values[e++];
      }
      const int j = axis_of(d);
      const double s = sign_of(d) * mesh.face_area(c, d);
      for (int i = 0; i < 3; ++i) acc(i, j) += face[i] * s;
    }
    const double inv = 1.0 / mesh.volume(c);
    for (auto& v : acc.m) v *= inv;
    g[c] = acc;
  }
  return g;
}

}  // namespace dtcfd
