#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "dtcfd/types.hpp"

namespace dtcfd {

/// Seven-point stencil system on a structured grid:
///   diag[c] x[c] + sum_d off[d][c] x[neighbour(c, d)] = rhs[c].
/// Cells without an unknown carry identity rows.
class LinearSystem {
 public:
  LinearSystem() = default;
  explicit LinearSystem(std::array<int, 3> dims);

  std::array<int, 3> dims() const { return dims_; }
  std::size_t size() const { return diag.size(); }
  std::size_t stride(int axis) const { return strides_[static_cast<std::size_t>(axis)]; }

  /// y = A x
  void multiply(std::span<const double> x, std::span<double> y) const;
  /// r = b - A x
  void residual(std::span<const double> x, std::span<double> r) const;
  /// sum_c |b - A x|_c
  double residual_l1(std::span<const double> x) const;
  /// Whether off[d][c] equals the transposed entry for every coupling.
  bool is_symmetric(double rel_tol = 1e-12) const;
  /// Replaces row `c` by x[c] = value.
  void fix_value(std::size_t c, double value);

  std::vector<double> diag;
  std::vector<double> rhs;
  std::array<std::vector<double>, 6> off;

 private:
  std::array<int, 3> dims_{};
  std::array<std::size_t, 3> strides_{};
};

enum class SolveStatus { Converged, MaxIterations, Diverged };
enum class SolverKind { Auto, ConjugateGradient, BiCGStab, GaussSeidel };

struct SolveOptions {
  double tolerance = 1e-3;       ///< on ||b - A x|| / ||b - A x0||
  double abs_tolerance = 0.0;    ///< on ||b - A x||
  int max_iterations = 500;
  SolverKind kind = SolverKind::Auto;
  int divergence_checks = 10;    ///< consecutive growing checks above the start residual
};

struct SolveResult {
  SolveStatus status = SolveStatus::Converged;
  int iterations = 0;
  double initial_residual = 0.0;  ///< L2
  double final_residual = 0.0;    ///< L2
  double relative() const { return initial_residual > 0.0 ? final_residual / initial_residual : 0.0; }
};

/// Solves in place starting from `x`. Auto picks preconditioned CG for symmetric systems and
/// BiCGStab otherwise, both with a diagonal-ILU preconditioner.
SolveResult solve_linear(const LinearSystem& system, std::span<double> x, const SolveOptions& options = {});

std::string to_string(SolveStatus s);

/// Sum over [0, n) of f(i) using a fixed blocking, so the result does not depend on the
/// number of worker threads.
double deterministic_sum(std::size_t n, auto&& f);

}  // namespace dtcfd

#include "dtcfd/detail/reduce.hpp"
