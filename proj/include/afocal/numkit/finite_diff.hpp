#pragma once

#include <vector>

#include "afocal/numkit/jet_curve.hpp"

namespace afocal {

/// Finite-difference weights (Fornberg's recursion) for derivatives 0..m at
/// x0 from samples at the given nodes. Result w[k][j]: weight of node j in
/// the k-th derivative.
inline std::vector<std::vector<double>> fd_weights(double x0, const std::vector<double>& nodes,
                                                   int m) {
  const int n = static_cast<int>(nodes.size()) - 1;
  std::vector<std::vector<double>> c(static_cast<size_t>(m) + 1,
                                     std::vector<double>(nodes.size(), 0.0));
  double c1 = 1.0;
  double c4 = nodes[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

/// Derivatives 0..order of a uniformly sampled scalar table. Interior samples
/// use central differences (one Richardson step for orders 1-2, giving O(h^4);
/// plain five-point stencils for orders 3-4, O(h^2)). Samples without a full
/// central stencil get one-sided stencils and are marked in `edge`. With
/// `periodic`, the last sample duplicates the first and stencils wrap.
inline std::vector<std::vector<double>> derive_scalar_jets(const std::vector<double>& values,
                                                           double h, int order, bool periodic,
                                                           std::vector<bool>* edge = nullptr) {
  const int n = static_cast<int>(values.size());
  std::vector<std::vector<double>> out(values.size(), std::vector<double>(order + 1, 0.0));
  if (edge) edge->assign(values.size(), false);
  const int distinct = periodic ? n - 1 : n;
  auto at = [&](int i) {
    if (periodic) i = ((i % distinct) + distinct) % distinct;
    return values[static_cast<size_t>(i)];
  };
  for (int k = 0; k < n; ++k) {
    out[k][0] = values[k];
    const bool central = periodic || (k >= 2 && k + 2 < n);
    if (central) {
      const double fm1 = at(k - 1), fp1 = at(k + 1), fm2 = at(k - 2), fp2 = at(k + 2);
      const double f0 = values[k];
      if (order >= 1) {
        const double dh = (fp1 - fm1) / (2 * h);
        const double d2h = (fp2 - fm2) / (4 * h);
        out[k][1] = (4 * dh - d2h) / 3;
      }
      if (order >= 2) {
        const double dh = (fp1 - 2 * f0 + fm1) / (h * h);
        const double d2h = (fp2 - 2 * f0 + fm2) / (4 * h * h);
        out[k][2] = (4 * dh - d2h) / 3;
      }
      if (order >= 3) out[k][3] = (fp2 - 2 * fp1 + 2 * fm1 - fm2) / (2 * h * h * h);
      if (order >= 4) out[k][4] = (fp2 - 4 * fp1 + 6 * f0 - 4 * fm1 + fm2) / (h * h * h * h);
      continue;
    }
    if (edge) (*edge)[k] = true;
    // one-sided (or off-centre) stencil of order + 5 nodes inside the table
    const int width = std::min(n, order + 5);
    int lo = std::clamp(k - width / 2, 0, n - width);
    std::vector<double> nodes(width);
    for (int j = 0; j < width; ++j) nodes[j] = (lo + j - k) * h;
    const auto w = fd_weights(0.0, nodes, order);
    for (int m = 1; m <= order; ++m) {
      double s = 0.0;
      for (int j = 0; j < width; ++j) s += w[m][j] * values[lo + j];
      out[k][m] = s;
    }
  }
  return out;
}

/// Jets of a sampled curve on a uniform grid (see derive_scalar_jets).
/// Samples without a central stencil are flagged low-confidence. The returned
/// curve carries a tabulated source whose expansions are the jets.
inline JetCurve derive_jets(const std::vector<double>& grid, const std::vector<VecD>& samples,
                            int order, bool periodic = false) {
  if (order < 1 || order > 4) throw Error(ErrorKind::InvalidConfig, "jet order must be 1..4");
  if (samples.size() != grid.size() || samples.empty()) {
    throw Error(ErrorKind::DimensionMismatch, "grid and sample counts differ");
  }
  const double h = check_uniform_grid(grid, static_cast<size_t>(2 * order + 9));
  const int dim = static_cast<int>(samples.front().size());
  JetCurve c;
  c.grid = grid;
  c.jets.assign(grid.size(), std::vector<VecD>(order + 1, VecD::Zero(dim)));
  c.low_confidence.assign(grid.size(), false);
  for (int i = 0; i < dim; ++i) {
    std::vector<double> comp(samples.size());
    for (size_t k = 0; k < samples.size(); ++k) {
      if (samples[k].size() != dim) throw Error(ErrorKind::DimensionMismatch, "ragged samples");
      comp[k] = samples[k][i];
    }
    std::vector<bool> edge;
    const auto jets = derive_scalar_jets(comp, h, order, periodic, &edge);
    for (size_t k = 0; k < samples.size(); ++k) {
      for (int m = 0; m <= order; ++m) c.jets[k][m][i] = jets[k][m];
      if (edge[k]) c.low_confidence[k] = true;
    }
  }
  std::vector<SVec> expansions(grid.size());
  for (size_t k = 0; k < grid.size(); ++k) {
    SVec s(dim, Series(order));
    double fact = 1.0;
    for (int m = 0; m <= order; ++m) {
      if (m > 0) fact *= m;
      for (int i = 0; i < dim; ++i) s[i][m] = c.jets[k][m][i] / fact;
    }
    expansions[k] = std::move(s);
  }
  c.source = std::make_shared<GridSeriesCurve>(grid, std::move(expansions), order);
  return c;
}

}  // namespace afocal
