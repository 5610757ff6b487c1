#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "dtcfd/boundary.hpp"
#include "dtcfd/mesh.hpp"
#include "dtcfd/transport.hpp"

namespace dtcfd::test {

/// Uniform box [0, lx] x [0, ly] x [0, lz] split into nx x ny x nz cells.
inline Mesh box_mesh(int nx, int ny, int nz, double lx = 1.0, double ly = 1.0, double lz = 1.0,
                     std::span<const RegionBox> boxes = {}, std::span<const PatchRect> patches = {}) {
  return build_mesh({uniform_nodes(0.0, lx, nx), uniform_nodes(0.0, ly, ny), uniform_nodes(0.0, lz, nz)}, boxes,
                    patches);
}

/// Stationary adiabatic walls on every patch of `mesh`.
inline std::vector<BoundarySpec> wall_specs(const Mesh& mesh) {
  std::vector<BoundarySpec> specs;
  for (const auto& p : mesh.patches()) specs.push_back({p.name, Wall{}});
  return specs;
}

/// Edge coefficients for a scalar over `mask`: Dirichlet `lo` on x-min, `hi` on x-max with
/// conductance gamma A / d, zero gradient elsewhere.
inline std::vector<BoundaryCoeffs> x_dirichlet_edges(const Mesh&, const CellMask& mask, std::span<const double> phi,
                                                     double gamma, double lo, double hi) {
  std::vector<BoundaryCoeffs> out;
  for (const auto& e : mask.edges) {
    if (e.dir == Dir::XMinus) {
      out.push_back(BoundaryCoeffs::dirichlet(lo, gamma * e.area / e.distance));
    } else if (e.dir == Dir::XPlus) {
      out.push_back(BoundaryCoeffs::dirichlet(hi, gamma * e.area / e.distance));
    } else {
      out.push_back(BoundaryCoeffs::zero_gradient(phi[e.cell]));
    }
  }
  return out;
}

/// Dense Gaussian elimination with partial pivoting.
inline std::vector<double> dense_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
    }
    std::swap(a[k], a[piv]);
    std::swap(b[k], b[piv]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double m = a[i][k] / a[k][k];
      for (std::size_t j = k; j < n; ++j) a[i][j] -= m * a[k][j];
      b[i] -= m * b[k];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
    x[i] = s / a[i][i];
  }
  return x;
}

}  // namespace dtcfd::test
