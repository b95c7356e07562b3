#pragma once

#include <cmath>
#include <memory>
#include <vector>

#include "afocal/numkit/curve_source.hpp"

namespace afocal {

/// Uniform grid a, a + h, ..., b with `intervals` steps.
inline std::vector<double> uniform_grid(double a, double b, int intervals) {
  std::vector<double> g(static_cast<size_t>(intervals) + 1);
  for (int k = 0; k <= intervals; ++k) g[k] = a + (b - a) * k / intervals;
  g.back() = b;
  return g;
}

/// Throws GridTooCoarse / NonUniformGrid unless grid is an increasing uniform
/// grid with at least `min_samples` samples.
inline double check_uniform_grid(const std::vector<double>& grid, size_t min_samples) {
  if (grid.size() < min_samples) {
    throw Error(ErrorKind::GridTooCoarse, "need at least " + std::to_string(min_samples) +
                                              " samples, got " + std::to_string(grid.size()));
  }
  const double h = (grid.back() - grid.front()) / static_cast<double>(grid.size() - 1);
  if (!(h > 0)) throw Error(ErrorKind::NonUniformGrid, "grid is not increasing");
  for (size_t k = 1; k < grid.size(); ++k) {
    const double step = grid[k] - grid[k - 1];
    if (!(step > 0) || std::abs(step - h) > 1e-12 * std::max(1.0, std::abs(h)) +
                                               1e-12 * std::abs(grid[k])) {
      throw Error(ErrorKind::NonUniformGrid, "spacing varies at sample " + std::to_string(k));
    }
  }
  return h;
}

/// A curve sampled on a grid with derivative jets of order 0..order at every
/// sample. When `source` is set the jets are exact and consumers may ask the
/// source for higher orders.
struct JetCurve {
  std::vector<double> grid;
  std::vector<std::vector<VecD>> jets;  // jets[sample][derivative order]
  std::vector<bool> low_confidence;
  CurvePtr source;

  size_t size() const { return grid.size(); }
  int order() const { return jets.empty() ? -1 : static_cast<int>(jets.front().size()) - 1; }
  int dim() const { return jets.empty() ? 0 : static_cast<int>(jets.front().front().size()); }
  const VecD& jet(size_t k, int m) const { return jets[k][static_cast<size_t>(m)]; }
  bool analytic() const { return source != nullptr && source->max_order() >= kUnlimitedOrder; }

  /// Endpoint jets agree within tol for every stored order.
  bool endpoints_match(double tol) const {
    if (jets.size() < 2) return false;
    for (int m = 0; m <= order(); ++m) {
      const double scale = std::max(1.0, jets.front()[m].norm());
      if ((jets.front()[m] - jets.back()[m]).norm() > tol * scale) return false;
    }
    return true;
  }

  static JetCurve from_source(CurvePtr src, std::vector<double> grid, int order) {
    if (grid.size() < 17) {
      throw Error(ErrorKind::GridTooCoarse, "a curve grid needs at least 17 samples");
    }
    for (size_t k = 1; k < grid.size(); ++k) {
      if (!(grid[k] > grid[k - 1])) throw Error(ErrorKind::NonUniformGrid, "grid not increasing");
    }
    JetCurve c;
    c.grid = std::move(grid);
    c.jets.resize(c.grid.size());
    c.low_confidence.assign(c.grid.size(), src->max_order() < order);
    for (size_t k = 0; k < c.grid.size(); ++k) {
      const SVec s = src->taylor(c.grid[k], order);
      for (int m = 0; m <= order; ++m) c.jets[k].push_back(derivative_of(s, m));
    }
    c.source = std::move(src);
    return c;
  }
};

}  // namespace afocal
