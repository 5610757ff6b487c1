#include "dtcfd/linear.hpp"

#include <algorithm>
#include <cmath>

namespace dtcfd {

LinearSystem::LinearSystem(std::array<int, 3> dims) : dims_(dims) {
  const std::size_t n =
      static_cast<std::size_t>(dims[0]) * static_cast<std::size_t>(dims[1]) * static_cast<std::size_t>(dims[2]);
  strides_ = {1, static_cast<std::size_t>(dims[0]),
              static_cast<std::size_t>(dims[0]) * static_cast<std::size_t>(dims[1])};
  diag.assign(n, 0.0);
  rhs.assign(n, 0.0);
  for (auto& o : off) o.assign(n, 0.0);
}

namespace {

/// Calls f(c, has_minus[3], has_plus[3]) over all cells in lexicographic order of one k-plane.
template <typename F>
void for_plane(const std::array<int, 3>& dims, int k, F&& f) {
  std::array<bool, 3> lo{}, hi{};
  lo[2] = k > 0;
  hi[2] = k + 1 < dims[2];
  std::size_t c = static_cast<std::size_t>(k) * static_cast<std::size_t>(dims[0]) * static_cast<std::size_t>(dims[1]);
  for (int j = 0; j < dims[1]; ++j) {
    lo[1] = j > 0;
    hi[1] = j + 1 < dims[1];
    for (int i = 0; i < dims[0]; ++i, ++c) {
      lo[0] = i > 0;
      hi[0] = i + 1 < dims[0];
      f(c, lo, hi);
    }
  }
}

double row_product(const LinearSystem& A, std::span<const double> x, std::size_t c, const std::array<bool, 3>& lo,
                   const std::array<bool, 3>& hi) {
  double s = A.diag[c] * x[c];
  for (int a = 0; a < 3; ++a) {
    const std::size_t st = A.stride(a);
    if (lo[static_cast<std::size_t>(a)]) s += A.off[static_cast<std::size_t>(2 * a)][c] * x[c - st];
    if (hi[static_cast<std::size_t>(a)]) s += A.off[static_cast<std::size_t>(2 * a + 1)][c] * x[c + st];
  }
  return s;
}

double dot(std::span<const double> a, std::span<const double> b) {
  return deterministic_sum(a.size(), [&](std::size_t i) { return a[i] * b[i]; });
}

/// Diagonal-ILU factor: pivots d with (D + L) D^-1 (D + U) ~ A.
class DiluPreconditioner {
 public:
  explicit DiluPreconditioner(const LinearSystem& A) : A_(A), inv_(A.size()) {
    std::vector<double> d(A.size());
    const auto dims = A.dims();
    for (int k = 0; k < dims[2]; ++k) {
      for_plane(dims, k, [&](std::size_t c, const auto& lo, const auto&) {
        double v = A.diag[c];
        for (int a = 0; a < 3; ++a) {
          if (!lo[static_cast<std::size_t>(a)]) continue;
          const std::size_t l = c - A.stride(a);
          v -= A.off[static_cast<std::size_t>(2 * a)][c] * A.off[static_cast<std::size_t>(2 * a + 1)][l] / d[l];
        }
        if (std::abs(v) < 1e-300) v = A.diag[c] != 0.0 ? A.diag[c] : 1.0;
        d[c] = v;
        inv_[c] = 1.0 / v;
      });
    }
  }

  void apply(std::span<const double> r, std::span<double> z) const {
    const auto dims = A_.dims();
    for (int k = 0; k < dims[2]; ++k) {
      for_plane(dims, k, [&](std::size_t c, const auto& lo, const auto&) {
        double v = r[c];
        for (int a = 0; a < 3; ++a) {
          if (lo[static_cast<std::size_t>(a)]) v -= A_.off[static_cast<std::size_t>(2 * a)][c] * z[c - A_.stride(a)];
        }
        z[c] = v * inv_[c];
      });
    }
    const std::size_t nx = static_cast<std::size_t>(dims[0]);
    const std::size_t ny = static_cast<std::size_t>(dims[1]);
    for (int k = dims[2] - 1; k >= 0; --k) {
      for (int j = dims[1] - 1; j >= 0; --j) {
        for (int i = dims[0] - 1; i >= 0; --i) {
          const std::size_t c = static_cast<std::size_t>(i) + nx * (static_cast<std::size_t>(j) + ny * static_cast<std::size_t>(k));
          double v = 0.0;
          if (i + 1 < dims[0]) v += A_.off[1][c] * z[c + 1];
          if (j + 1 < dims[1]) v += A_.off[3][c] * z[c + nx];
          if (k + 1 < dims[2]) v += A_.off[5][c] * z[c + nx * ny];
          z[c] -= v * inv_[c];
        }
      }
    }
  }

 private:
  const LinearSystem& A_;
  std::vector<double> inv_;
};

struct Monitor {
  double r0 = 0.0;
  double last = 0.0;
  int growing = 0;
  const SolveOptions& opt;

  bool done(double r) const { return r <= opt.tolerance * r0 || r <= opt.abs_tolerance; }
  bool diverged(double r) {
    growing = (r > last && r > r0) ? growing + 1 : 0;
    last = r;
    return !std::isfinite(r) || growing >= opt.divergence_checks;
  }
};

SolveResult conjugate_gradient(const LinearSystem& A, std::span<double> x, const SolveOptions& opt) {
  const std::size_t n = A.size();
  std::vector<double> r(n), z(n), p(n), q(n);
  A.residual(x, r);
  SolveResult res;
  Monitor mon{std::sqrt(dot(r, r)), 0.0, 0, opt};
  mon.last = mon.r0;
  res.initial_residual = res.final_residual = mon.r0;
  if (mon.r0 == 0.0 || mon.done(mon.r0)) return res;
  const DiluPreconditioner M(A);
  M.apply(r, z);
  p = z;
  double rz = dot(r, z);
  for (int it = 1; it <= opt.max_iterations; ++it) {
    A.multiply(p, q);
    const double pq = dot(p, q);
    if (pq == 0.0) break;
    const double alpha = rz / pq;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    const double rn = std::sqrt(dot(r, r));
    res.iterations = it;
    res.final_residual = rn;
    if (mon.done(rn)) return res;
    if (mon.diverged(rn)) {
      res.status = SolveStatus::Diverged;
      return res;
    }
    M.apply(r, z);
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  res.status = SolveStatus::MaxIterations;
  return res;
}

SolveResult bicgstab(const LinearSystem& A, std::span<double> x, const SolveOptions& opt) {
  const std::size_t n = A.size();
  std::vector<double> r(n), r_hat(n), p(n, 0.0), v(n, 0.0), s(n), t(n), y(n), z(n);
  A.residual(x, r);
  SolveResult res;
  Monitor mon{std::sqrt(dot(r, r)), 0.0, 0, opt};
  mon.last = mon.r0;
  res.initial_residual = res.final_residual = mon.r0;
  if (mon.r0 == 0.0 || mon.done(mon.r0)) return res;
  const DiluPreconditioner M(A);
  r_hat = r;
  double rho = 1.0, alpha = 1.0, omega = 1.0;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    const double rho_new = dot(r_hat, r);
    if (rho_new == 0.0) {
      // Breakdown: restart the shadow residual.
      r_hat = r;
      rho = 1.0;
      alpha = 1.0;
      omega = 1.0;
      std::fill(p.begin(), p.end(), 0.0);
      std::fill(v.begin(), v.end(), 0.0);
      continue;
    }
    const double beta = (rho_new / rho) * (alpha / omega);
    rho = rho_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
    M.apply(p, y);
    A.multiply(y, v);
    const double rv = dot(r_hat, v);
    if (rv == 0.0) break;
    alpha = rho / rv;
    for (std::size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
    const double sn = std::sqrt(dot(s, s));
    if (mon.done(sn)) {
      for (std::size_t i = 0; i < n; ++i) x[i] += alpha * y[i];
      res.iterations = it;
      res.final_residual = sn;
      return res;
    }
    M.apply(s, z);
    A.multiply(z, t);
    const double tt = dot(t, t);
    omega = tt > 0.0 ? dot(t, s) / tt : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * y[i] + omega * z[i];
      r[i] = s[i] - omega * t[i];
    }
    const double rn = std::sqrt(dot(r, r));
    res.iterations = it;
    res.final_residual = rn;
    if (mon.done(rn)) return res;
    if (mon.diverged(rn)) {
      res.status = SolveStatus::Diverged;
      return res;
    }
    if (omega == 0.0) break;
  }
  res.status = SolveStatus::MaxIterations;
  return res;
}

SolveResult gauss_seidel(const LinearSystem& A, std::span<double> x, const SolveOptions& opt) {
  const std::size_t n = A.size();
  std::vector<double> r(n);
  A.residual(x, r);
  SolveResult res;
  Monitor mon{std::sqrt(dot(r, r)), 0.0, 0, opt};
  mon.last = mon.r0;
  res.initial_residual = res.final_residual = mon.r0;
  if (mon.r0 == 0.0 || mon.done(mon.r0)) return res;
  const auto dims = A.dims();
  for (int it = 1; it <= opt.max_iterations; ++it) {
    for (int k = 0; k < dims[2]; ++k) {
      for_plane(dims, k, [&](std::size_t c, const auto& lo, const auto& hi) {
        const double ax = row_product(A, x, c, lo, hi) - A.diag[c] * x[c];
        x[c] = (A.rhs[c] - ax) / A.diag[c];
      });
    }
    A.residual(x, r);
    const double rn = std::sqrt(dot(r, r));
    res.iterations = it;
    res.final_residual = rn;
    if (mon.done(rn)) return res;
    if (mon.diverged(rn)) {
      res.status = SolveStatus::Diverged;
      return res;
    }
  }
  res.status = SolveStatus::MaxIterations;
  return res;
}

}  // namespace

void LinearSystem::multiply(std::span<const double> x, std::span<double> y) const {
#pragma omp parallel for schedule(static)
  for (int k = 0; k < dims_[2]; ++k) {
    for_plane(dims_, k, [&](std::size_t c, const auto& lo, const auto& hi) { y[c] = row_product(*this, x, c, lo, hi); });
  }
}

void LinearSystem::residual(std::span<const double> x, std::span<double> r) const {
#pragma omp parallel for schedule(static)
  for (int k = 0; k < dims_[2]; ++k) {
    for_plane(dims_, k,
              [&](std::size_t c, const auto& lo, const auto& hi) { r[c] = rhs[c] - row_product(*this, x, c, lo, hi); });
  }
}

double LinearSystem::residual_l1(std::span<const double> x) const {
  std::vector<double> r(size());
  residual(x, r);
  return deterministic_sum(r.size(), [&](std::size_t i) { return std::abs(r[i]); });
}

bool LinearSystem::is_symmetric(double rel_tol) const {
  for (std::size_t c = 0; c < size(); ++c) {
    for (int a = 0; a < 3; ++a) {
      const double up = off[static_cast<std::size_t>(2 * a + 1)][c];
      if (up == 0.0) continue;
      const std::size_t u = c + strides_[static_cast<std::size_t>(a)];
      if (u >= size()) return false;
      const double down = off[static_cast<std::size_t>(2 * a)][u];
      if (std::abs(up - down) > rel_tol * std::max(std::abs(up), std::abs(down))) return false;
    }
  }
  // Lower couplings without a matching upper entry.
  for (std::size_t c = 0; c < size(); ++c) {
    for (int a = 0; a < 3; ++a) {
      const double down = off[static_cast<std::size_t>(2 * a)][c];
      if (down == 0.0) continue;
      const std::size_t st = strides_[static_cast<std::size_t>(a)];
      if (c < st || off[static_cast<std::size_t>(2 * a + 1)][c - st] == 0.0) return false;
    }
  }
  return true;
}

void LinearSystem::fix_value(std::size_t c, double value) {
  diag[c] = 1.0;
  rhs[c] = value;
  for (auto& o : off) o[c] = 0.0;
}

SolveResult solve_linear(const LinearSystem& system, std::span<double> x, const SolveOptions& options) {
  SolverKind kind = options.kind;
  if (kind == SolverKind::Auto) kind = system.is_symmetric() ? SolverKind::ConjugateGradient : SolverKind::BiCGStab;
  switch (kind) {
    case SolverKind::ConjugateGradient:
      return conjugate_gradient(system, x, options);
    case SolverKind::GaussSeidel:
      return gauss_seidel(system, x, options);
    default:
      return bicgstab(system, x, options);
  }
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged:
      return "converged";
    case SolveStatus::MaxIterations:
      return "max-iterations";
    case SolveStatus::Diverged:
      return "diverged";
  }
  return "unknown";
}

}  // namespace dtcfd
