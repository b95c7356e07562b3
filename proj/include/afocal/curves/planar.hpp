#pragma once

// Equi-affine invariants of planar curves: affine arc-length, affine
// curvature, evolute, support function, vertices and the reconstruction ODE.

#include <cmath>
#include <memory>
#include <optional>
#include <vector>

#include "afocal/numkit.hpp"
#include "afocal/numkit/reparam.hpp"
#include "afocal/curves/library.hpp"

namespace afocal::curves {

/// Series order used for invariant jets of analytic curves.
inline constexpr int kInvariantOrder = 12;

struct PlanarAffineCurve {
  JetCurve jets;                    // in affine arc-length, orders 0..4
  std::vector<double> t_of_u;       // original parameter at each sample
  std::vector<Series> rho_series;   // local expansion of rho at each sample
  std::vector<double> rho;
  std::vector<double> rho_prime;
  bool reflected = false;           // input had [G_t, G_tt] < 0 and was mirrored in y
  bool closed = false;
  bool convex = true;
  bool low_confidence = false;      // invariants from finite-difference jets
  double normalization_residual = 0.0;  // max |[G', G''] - 1|
  double structure_residual = 0.0;      // max |G''' + rho G'|

  const std::vector<double>& grid() const { return jets.grid; }
  size_t size() const { return jets.size(); }
  double length() const { return jets.grid.back() - jets.grid.front(); }
  SVec expansion(double u, int order) const { return jets.source->taylor(u, order); }

  /// rho^(k)(u) from the nearest local expansion; nullopt when the series is
  /// too short (sampled input).
  std::optional<double> rho_derivative(double u, int k) const {
    const size_t j = nearest(u);
    const Series& s = rho_series[j];
    if (s.order() < k + 1) return std::nullopt;
    return s.shifted(u - jets.grid[j]).derivative(k);
  }

  size_t nearest(double u) const {
    const double h = length() / static_cast<double>(size() - 1);
    const long j = std::lround((u - jets.grid.front()) / h);
    return static_cast<size_t>(std::clamp<long>(j, 0, static_cast<long>(size()) - 1));
  }
};

namespace detail {

inline double uniform_step(const std::vector<double>& g) {
  return (g.back() - g.front()) / static_cast<double>(g.size() - 1);
}

inline JetCurve jets_from_expansions(const std::vector<double>& grid,
                                     const std::vector<SVec>& exps, CurvePtr source, int order,
                                     bool low) {
  JetCurve c;
  c.grid = grid;
  c.jets.resize(grid.size());
  c.low_confidence.assign(grid.size(), low);
  for (size_t k = 0; k < grid.size(); ++k) {
    for (int m = 0; m <= order; ++m) c.jets[k].push_back(derivative_of(exps[k], m));
  }
  c.source = std::move(source);
  return c;
}

inline double winding_of_tangent(const JetCurve& c) {
  double total = 0.0;
  for (size_t k = 1; k < c.size(); ++k) {
    const VecD& a = c.jet(k - 1, 1);
    const VecD& b = c.jet(k, 1);
    total += std::atan2(a[0] * b[1] - a[1] * b[0], a.dot(b));
  }
  return total;
}

}  // namespace detail

/// Reparametrizes a planar curve by affine arc-length du = [G_t, G_tt]^(1/3) dt
/// on the interval of `raw`, keeping its sample count.
inline PlanarAffineCurve reparam_affine_planar(const JetCurve& raw, const ToleranceConfig& cfg,
                                               bool convex_check = false) {
  cfg.validate();
  if (raw.dim() != 2) throw Error(ErrorKind::DimensionMismatch, "planar curve must have dimension 2");
  if (!raw.source) throw Error(ErrorKind::InsufficientJets, "curve has no local expansions");
  PlanarAffineCurve out;
  CurvePtr src = raw.source;
  const double w0 = det2(raw.jet(0, 1), raw.jet(0, 2));
  if (w0 < 0) {
    MatD flip = MatD::Identity(2, 2);
    flip(1, 1) = -1.0;
    src = affine_image(src, flip, VecD::Zero(2));
    out.reflected = true;
  }
  const int order = std::min(kInvariantOrder + 3, src->max_order() - 2);
  if (order < 1) throw Error(ErrorKind::InsufficientJets, "planar reparametrization needs jets of order 3");
  const double tol_zero = cfg.tol_zero;
  const auto density = [src, tol_zero](double t, int n) {
    const SVec g = src->taylor(t, n + 2);
    const SVec g1 = d(g);
    const Series w = det2(g1, d(g1));
    if (!(w.value() >= tol_zero)) {
      throw PointError(ErrorKind::InflectionPoint, t, "[G_t, G_tt] vanishes or changes sign");
    }
    return SpeedDensity{pow(w, 1.0 / 3.0), Series(n, 0.0)};
  };
  const double t0 = raw.grid.front(), t1 = raw.grid.back();
  for (double t : raw.grid) density(t, 0);
  const Reparametrization rp =
      reparametrize(src, t0, t1, static_cast<int>(raw.size()) - 1, density, order);

  out.low_confidence = !raw.analytic();
  out.t_of_u = rp.t;
  out.jets = detail::jets_from_expansions(rp.u, rp.expansions, rp.curve, 4, out.low_confidence);
  out.closed = out.jets.endpoints_match(1e-8);
  const size_t n = rp.u.size();
  out.rho_series.resize(n);
  out.rho.resize(n);
  for (size_t k = 0; k < n; ++k) {
    const SVec g1 = d(rp.expansions[k]);
    const SVec g2 = d(g1);
    const SVec g3 = d(g2);
    const Series norm = det2(g1, g2);
    out.rho_series[k] = det2(g2, g3) / norm;
    out.rho[k] = out.rho_series[k].value();
    out.normalization_residual = std::max(out.normalization_residual, std::abs(norm.value() - 1.0));
    const VecD res = derivative_of(g3, 0) + out.rho[k] * derivative_of(g1, 0);
    out.structure_residual = std::max(out.structure_residual, res.norm());
  }
  out.rho_prime.resize(n);
  if (out.rho_series[0].order() >= 1) {
    for (size_t k = 0; k < n; ++k) out.rho_prime[k] = out.rho_series[k].derivative(1);
  } else {
    const auto fd = derive_scalar_jets(out.rho, detail::uniform_step(rp.u), 1, out.closed);
    for (size_t k = 0; k < n; ++k) out.rho_prime[k] = fd[k][1];
  }
  if (convex_check) {
    const double turn = detail::winding_of_tangent(out.jets);
    out.convex = out.closed ? std::abs(turn - kTwoPi) < 1e-6 : turn <= kTwoPi + 1e-6;
  }
  return out;
}

struct Evolute {
  std::vector<double> u;            // samples kept
  std::vector<VecD> points;
  std::vector<double> omitted_u;    // samples with |rho| < tol_zero
  std::vector<Zero> cusps;          // zeros of rho'
};

/// E = G + G''/rho, with cusps located at the zeros of rho'.
inline Evolute affine_evolute(const PlanarAffineCurve& c, const ToleranceConfig& cfg) {
  Evolute e;
  for (size_t k = 0; k < c.size(); ++k) {
    if (std::abs(c.rho[k]) < cfg.tol_zero) {
      e.omitted_u.push_back(c.grid()[k]);
      continue;
    }
    e.u.push_back(c.grid()[k]);
    e.points.push_back(c.jets.jet(k, 0) + c.jets.jet(k, 2) / c.rho[k]);
  }
  if (!identically_zero(c.rho_prime, cfg.tol_zero)) {
    std::function<double(double)> refine;
    if (c.rho_series[0].order() >= 2) refine = [&c](double u) { return *c.rho_derivative(u, 1); };
    e.cusps = locate_zeros(c.grid(), c.rho_prime, cfg, c.closed, refine);
  }
  return e;
}

struct SupportFunction {
  std::vector<double> z;
  std::vector<double> z_second;
  std::vector<double> residual;     // z'' - 1 + rho z
  double max_residual = 0.0;
};

/// z(u) = [G(u) - O, G'(u)] and the identity z'' = 1 - rho z.
inline SupportFunction support_function(const PlanarAffineCurve& c, const VecD& origin) {
  if (origin.size() != 2) throw Error(ErrorKind::DimensionMismatch, "origin must be planar");
  SupportFunction s;
  for (size_t k = 0; k < c.size(); ++k) {
    const SVec g = c.expansion(c.grid()[k], 4);
    const SVec rel{g[0] - origin[0], g[1] - origin[1]};
    const Series z = det2(rel, d(g));
    s.z.push_back(z.value());
    s.z_second.push_back(z.derivative(2));
    s.residual.push_back(s.z_second.back() - 1.0 + c.rho[k] * s.z.back());
    s.max_residual = std::max(s.max_residual, std::abs(s.residual.back()));
  }
  return s;
}

struct VertexCount {
  int count = 0;
  bool degenerate = false;          // rho' vanishes identically (conics)
  bool certified = false;           // the curve is closed
  std::vector<Zero> zeros;          // crossings and tangential candidates
  int tangential = 0;
};

/// Zeros of rho' over one period (closed) or over the arc.
inline VertexCount count_vertices(const PlanarAffineCurve& c, bool closed,
                                  const ToleranceConfig& cfg) {
  if (closed && !c.closed) {
    throw Error(ErrorKind::NotClosed, "endpoint jets differ by more than 1e-8");
  }
  VertexCount v;
  v.certified = closed;
  if (identically_zero(c.rho_prime, cfg.tol_zero)) {
    v.degenerate = true;
    return v;
  }
  std::function<double(double)> refine;
  if (c.rho_series[0].order() >= 2) refine = [&c](double u) { return *c.rho_derivative(u, 1); };
  v.zeros = locate_zeros(c.grid(), c.rho_prime, cfg, closed, refine);
  for (const Zero& z : v.zeros) (z.tangential ? v.tangential : v.count) += 1;
  return v;
}

struct Reconstruction {
  std::vector<VecD> gamma, gamma_prime;
  std::vector<double> z, z_prime;
};

/// Integrates g'' = -rho g, z'' = -rho z + 1 with rho interpolated from the
/// table (six-point Lagrange).
inline Reconstruction reconstruct_from_curvature(const std::vector<double>& grid,
                                                 const std::vector<double>& rho, const VecD& g0,
                                                 const VecD& g0p, double z0, double z0p,
                                                 int substeps = 2) {
  if (grid.size() != rho.size()) throw Error(ErrorKind::DimensionMismatch, "rho table length");
  VecD y(6);
  y << g0[0], g0[1], g0p[0], g0p[1], z0, z0p;
  const auto rhs = [&](double u, const VecD& s) {
    const double r = interpolate_uniform(grid, rho, u, 6);
    VecD f(6);
    f << s[2], s[3], -r * s[0], -r * s[1], s[5], 1.0 - r * s[4];
    return f;
  };
  const auto sol = integrate_ode(rhs, y, grid, substeps);
  Reconstruction out;
  for (const VecD& s : sol) {
    out.gamma.push_back(vec({s[0], s[1]}));
    out.gamma_prime.push_back(vec({s[2], s[3]}));
    out.z.push_back(s[4]);
    out.z_prime.push_back(s[5]);
  }
  return out;
}

namespace detail {

inline Series support_series(const PlanarAffineCurve& c, size_t k, const VecD& origin, int order) {
  const SVec g = c.expansion(c.grid()[k], order + 1);
  const SVec rel{g[0] - origin[0], g[1] - origin[1]};
  return det2(rel, d(g));
}

}  // namespace detail

/// Z(u) = integral_{u0}^{u} [G - O, G'] dv on the curve's grid.
inline std::vector<double> area_function(const PlanarAffineCurve& c, const VecD& origin,
                                         double u0) {
  const int order = std::min(kInvariantOrder, c.jets.source->max_order() - 1);
  const double h = detail::uniform_step(c.grid());
  std::vector<double> z(c.size(), 0.0);
  for (size_t k = 1; k < c.size(); ++k) {
    z[k] = z[k - 1] + detail::support_series(c, k - 1, origin, order).integral(0.0).eval(h);
  }
  const size_t j = c.nearest(u0);
  const double at_u0 =
      z[j] + detail::support_series(c, j, origin, order).integral(0.0).eval(u0 - c.grid()[j]);
  for (double& v : z) v -= at_u0;
  return z;
}

/// The spatial curve (G, Z) with Z the area function, as a curve source in u.
inline CurvePtr area_lift(const PlanarAffineCurve& c, const VecD& origin, double u0) {
  const int order = std::min(kInvariantOrder + 4, c.jets.source->max_order() - 1);
  const std::vector<double> z = area_function(c, origin, u0);
  std::vector<SVec> exps;
  for (size_t k = 0; k < c.size(); ++k) {
    const SVec g = c.expansion(c.grid()[k], order + 1);
    exps.push_back(
        SVec{g[0], g[1], detail::support_series(c, k, origin, order).integral(z[k])});
  }
  return std::make_shared<GridSeriesCurve>(c.grid(), exps, order + 1);
}

}  // namespace afocal::curves
