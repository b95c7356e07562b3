#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "afocal/numkit/interp.hpp"
#include "afocal/numkit/tolerance.hpp"

namespace afocal {

struct Zero {
  double u;
  /// Set for near-zero samples without a sign change (possible even-order zero).
  bool tangential = false;
};

inline bool identically_zero(const std::vector<double>& values, double tol) {
  for (double v : values)
    if (std::abs(v) >= tol) return false;
  return true;
}

/// Roots of a tabulated function: one per sign change, refined by bisection on
/// `refine` (default: a local cubic interpolant of the table) to
/// cfg.refine_depth. Near-zero samples without a sign change are reported as
/// tangential. With `periodic`, the last sample duplicates the first and the
/// table is scanned cyclically over the distinct samples.
inline std::vector<Zero> locate_zeros(const std::vector<double>& grid,
                                      const std::vector<double>& values,
                                      const ToleranceConfig& cfg, bool periodic = false,
                                      const std::function<double(double)>& refine = {}) {
  std::vector<Zero> out;
  const int n = static_cast<int>(values.size());
  if (n < 3) return out;
  const int m = periodic ? n - 1 : n;  // distinct samples
  const double period = grid[n - 1] - grid[0];
  auto eval = [&](double u) {
    if (refine) return refine(u);
    return interpolate_uniform(grid, values, u, 4);
  };
  auto sign = [](double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); };

  std::vector<bool> near_root(m, false);
  const int pairs = periodic ? m : m - 1;
  for (int i = 0; i < pairs; ++i) {
    const int j = (i + 1) % m;
    const int si = sign(values[i]);
    if (si == 0) {
      // exact zero: a root when the nearest non-zero neighbours disagree
      int prev = i - 1, next = i + 1;
      if (periodic) {
        prev = (prev + m) % m;
        next = next % m;
      }
      const int sp = (prev >= 0 && prev < m) ? sign(values[prev]) : 0;
      const int sn = (next >= 0 && next < m) ? sign(values[next]) : 0;
      if (sp != 0 && sn != 0 && sp != sn) {
        out.push_back({grid[i], false});
        near_root[i] = true;
      }
      continue;
    }
    const int sj = sign(values[j]);
    if (sj == 0 || si == sj) continue;
    double a = grid[i];
    double b = (j == 0 && periodic) ? grid[0] + period : grid[j];
    double fa = values[i];
    for (int it = 0; it < cfg.refine_depth; ++it) {
      const double mid = 0.5 * (a + b);
      const double wrapped = (periodic && mid > grid[n - 1]) ? mid - period : mid;
      const double fm = eval(wrapped);
      if (fm == 0.0) {
        a = b = mid;
        break;
      }
      if ((fm > 0) == (fa > 0)) {
        a = mid;
        fa = fm;
      } else {
        b = mid;
      }
    }
    double root = 0.5 * (a + b);
    if (periodic && root >= grid[n - 1]) root -= period;
    out.push_back({root, false});
    near_root[i] = near_root[j] = true;
  }

  // tangential candidates: local minima of |v| below tol_zero away from roots
  for (int i = 0; i < m; ++i) {
    const double v = std::abs(values[i]);
    if (v >= cfg.tol_zero || near_root[i]) continue;
    const bool has_prev = periodic || i > 0;
    const bool has_next = periodic || i + 1 < m;
    const double pv = has_prev ? std::abs(values[(i - 1 + m) % m]) : INFINITY;
    const double nv = has_next ? std::abs(values[(i + 1) % m]) : INFINITY;
    if (v <= pv && v < nv) out.push_back({grid[i], true});
  }
  return out;
}

}  // namespace afocal
