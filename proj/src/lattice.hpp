#pragma once

// Internal helpers for evaluating rank-indicator sums on tensor grids.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace copsub::detail {

// Largest m in [0, n] with m / n <= a (same comparison as R / n <= u).
inline std::int32_t rank_threshold(double a, std::size_t n) {
  const double nd = static_cast<double>(n);
  auto m = static_cast<std::int64_t>(std::floor(a * nd));
  m = std::clamp<std::int64_t>(m, 0, static_cast<std::int64_t>(n));
  while (m < static_cast<std::int64_t>(n) && static_cast<double>(m + 1) / nd <= a) ++m;
  while (m > 0 && static_cast<double>(m) / nd > a) --m;
  return static_cast<std::int32_t>(m);
}

// Smallest k in [1, n] with k / n >= a; 0 encodes a <= 0 (generalized inverse -inf).
inline std::int32_t quantile_index(double a, std::size_t n) {
  if (a <= 0.0) return 0;
  const double nd = static_cast<double>(n);
  auto k = static_cast<std::int64_t>(std::ceil(a * nd));
  k = std::clamp<std::int64_t>(k, 1, static_cast<std::int64_t>(n));
  while (k > 1 && static_cast<double>(k - 1) / nd >= a) --k;
  while (k < static_cast<std::int64_t>(n) && static_cast<double>(k) / nd < a) ++k;
  return static_cast<std::int32_t>(k);
}

// Cell of every row in the tensor lattice: cell[i] is the flat index of the
// smallest threshold tuple admitting row i, or SIZE_MAX if none does.
// thresholds[j] must be nondecreasing.
inline std::vector<std::size_t> lattice_cells(std::span<const std::int32_t> keys, std::size_t n,
                                              std::size_t d,
                                              const std::vector<std::vector<std::int32_t>>& thresholds) {
  std::vector<std::size_t> cells(n, SIZE_MAX);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t flat = 0;
    bool inside = true;
    for (std::size_t j = 0; j < d && inside; ++j) {
      const auto& th = thresholds[j];
      const auto it = std::lower_bound(th.begin(), th.end(), keys[i * d + j]);
      if (it == th.end()) {
        inside = false;
      } else {
        flat = flat * th.size() + static_cast<std::size_t>(it - th.begin());
      }
    }
    if (inside) cells[i] = flat;
  }
  return cells;
}

// In-place inclusive prefix sums along every axis of a row-major tensor.
inline void cumulate(std::vector<double>& hist, const std::vector<std::size_t>& dims) {
  const std::size_t total = hist.size();
  std::size_t stride = 1;
  for (std::size_t j = dims.size(); j-- > 0;) {
    const std::size_t len = dims[j];
    for (std::size_t base = 0; base < total; ++base) {
      if ((base / stride) % len != 0) hist[base] += hist[base - stride];
    }
    stride *= len;
  }
}

// sum_i weight_i * 1{key_ij <= thresholds[j][t_j] for all j}, over the tensor lattice.
inline std::vector<double> weighted_lattice_sums(std::span<const std::size_t> cells,
                                                 std::span<const double> weights,
                                                 const std::vector<std::size_t>& dims) {
  std::size_t total = 1;
  for (std::size_t len : dims) total *= len;
  std::vector<double> hist(total, 0.0);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i] != SIZE_MAX) hist[cells[i]] += weights.empty() ? 1.0 : weights[i];
  }
  cumulate(hist, dims);
  return hist;
}

}  // namespace copsub::detail
