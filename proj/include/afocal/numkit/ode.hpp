#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "afocal/numkit/vec.hpp"

namespace afocal {

inline constexpr double kDivergenceBound = 1e12;

/// Classical RK4 on the given grid, `substeps` equal steps per interval.
inline std::vector<VecD> integrate_ode(const std::function<VecD(double, const VecD&)>& rhs,
                                       const VecD& y0, const std::vector<double>& grid,
                                       int substeps = 1) {
  std::vector<VecD> out;
  out.reserve(grid.size());
  VecD y = y0;
  out.push_back(y);
  for (size_t k = 1; k < grid.size(); ++k) {
    const double h = (grid[k] - grid[k - 1]) / substeps;
    double u = grid[k - 1];
    for (int s = 0; s < substeps; ++s) {
      const VecD k1 = rhs(u, y);
      const VecD k2 = rhs(u + h / 2, y + (h / 2) * k1);
      const VecD k3 = rhs(u + h / 2, y + (h / 2) * k2);
      const VecD k4 = rhs(u + h, y + h * k3);
      y += (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
      u = (s + 1 == substeps) ? grid[k] : u + h;
    }
    if (!y.allFinite() || y.cwiseAbs().maxCoeff() > kDivergenceBound) {
      throw PointError(ErrorKind::DivergentODE, grid[k], "solution left the bound 1e12");
    }
    out.push_back(y);
  }
  return out;
}

inline std::vector<double> integrate_scalar_ode(const std::function<double(double, double)>& rhs,
                                                double y0, const std::vector<double>& grid,
                                                int substeps = 1) {
  const auto vec_rhs = [&rhs](double u, const VecD& y) {
    VecD r(1);
    r[0] = rhs(u, y[0]);
    return r;
  };
  VecD init(1);
  init[0] = y0;
  const auto sol = integrate_ode(vec_rhs, init, grid, substeps);
  std::vector<double> out(sol.size());
  for (size_t k = 0; k < sol.size(); ++k) out[k] = sol[k][0];
  return out;
}

}  // namespace afocal
