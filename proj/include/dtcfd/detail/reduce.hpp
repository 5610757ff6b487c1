#pragma once

#include <array>
#include <cstddef>

namespace dtcfd {

double deterministic_sum(std::size_t n, auto&& f) {
  constexpr std::size_t kBlocks = 64;
  std::array<double, kBlocks> partial{};
  const std::size_t chunk = (n + kBlocks - 1) / kBlocks;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(kBlocks); ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * chunk;
    const std::size_t hi = lo + chunk < n ? lo + chunk : n;
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += f(i);
    partial[static_cast<std::size_t>(b)] = s;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace dtcfd
