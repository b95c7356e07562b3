#pragma once

#include <algorithm>
#include <vector>

namespace afocal {

/// Lagrange interpolation of a table on a uniform grid using `points` nodes
/// around u (clamped to the table).
inline double interpolate_uniform(const std::vector<double>& grid, const std::vector<double>& table,
                                  double u, int points = 6) {
  const int n = static_cast<int>(grid.size());
  points = std::min(points, n);
  const double h = (grid.back() - grid.front()) / (n - 1);
  const int base = static_cast<int>(std::floor((u - grid.front()) / h));
  const int lo = std::clamp(base - (points / 2 - 1), 0, n - points);
  double v = 0.0;
  for (int i = 0; i < points; ++i) {
    double w = 1.0;
    for (int j = 0; j < points; ++j) {
      if (j != i) w *= (u - grid[lo + j]) / (grid[lo + i] - grid[lo + j]);
    }
    v += w * table[lo + i];
  }
  return v;
}

}  // namespace afocal
