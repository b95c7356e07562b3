#pragma once

// Equi-affine invariants of space curves: Phi'''' = -rho Phi'' + tau Phi' in
// affine arc-length, the cylindricity test rho' + tau = 0 and the projective
// density (rho' + 2 tau)^(1/3).

#include <cmath>
#include <optional>
#include <vector>

#include "afocal/curves/planar.hpp"

namespace afocal::curves {

struct SpatialAffineCurve {
  JetCurve jets;                    // in affine arc-length, orders 0..4
  std::vector<double> t_of_u;
  std::vector<Series> rho_series, tau_series;
  std::vector<double> rho, tau, rho_prime;
  bool reflected = false;           // input had negative orientation, mirrored in z
  bool closed = false;
  bool low_confidence = false;
  double normalization_residual = 0.0;  // max |[Phi', Phi'', Phi'''] - 1|
  double structure_residual = 0.0;      // max |Phi'''' + rho Phi'' - tau Phi'|

  const std::vector<double>& grid() const { return jets.grid; }
  size_t size() const { return jets.size(); }
};

/// Reparametrizes by du = |[Phi_t, Phi_tt, Phi_ttt]|^(1/6) dt and extracts
/// rho, tau by Cramer's rule on Phi'''' = -rho Phi'' + tau Phi'.
inline SpatialAffineCurve spatial_invariants(const JetCurve& raw, const ToleranceConfig& cfg) {
  cfg.validate();
  if (raw.dim() != 3) throw Error(ErrorKind::DimensionMismatch, "spatial curve must have dimension 3");
  if (!raw.source) throw Error(ErrorKind::InsufficientJets, "curve has no local expansions");
  SpatialAffineCurve out;
  CurvePtr src = raw.source;
  const SVec e0 = src->taylor(raw.grid.front(), 3);
  if (det3(d(e0), d(d(e0)), d(d(d(e0)))).value() < 0) {
    MatD flip = MatD::Identity(3, 3);
    flip(2, 2) = -1.0;
    src = affine_image(src, flip, VecD::Zero(3));
    out.reflected = true;
  }
  const int order = std::min(kInvariantOrder + 3, src->max_order() - 3);
  if (order < 1) throw Error(ErrorKind::InsufficientJets, "spatial invariants need jets of order 4");
  const double tol_zero = cfg.tol_zero;
  const auto density = [src, tol_zero](double t, int n) {
    const SVec p = src->taylor(t, n + 3);
    const SVec p1 = d(p), p2 = d(p1), p3 = d(p2);
    const Series w = det3(p1, p2, p3);
    if (!(w.value() >= tol_zero)) {
      throw PointError(ErrorKind::DegenerateTorsion, t, "[Phi_t, Phi_tt, Phi_ttt] vanishes");
    }
    return SpeedDensity{pow(w, 1.0 / 6.0), Series(n, 0.0)};
  };
  for (double t : raw.grid) density(t, 0);
  const Reparametrization rp = reparametrize(src, raw.grid.front(), raw.grid.back(),
                                             static_cast<int>(raw.size()) - 1, density, order);
  out.low_confidence = !raw.analytic();
  out.t_of_u = rp.t;
  out.jets = detail::jets_from_expansions(rp.u, rp.expansions, rp.curve, 4, out.low_confidence);
  out.closed = out.jets.endpoints_match(1e-8);
  const size_t n = rp.u.size();
  out.rho_series.resize(n);
  out.tau_series.resize(n);
  out.rho.resize(n);
  out.tau.resize(n);
  for (size_t k = 0; k < n; ++k) {
    const SVec p1 = d(rp.expansions[k]);
    const SVec p2 = d(p1), p3 = d(p2), p4 = d(p3);
    const Series vol = det3(p1, p2, p3);
    out.rho_series[k] = -det3(p1, p4, p3) / vol;
    out.tau_series[k] = det3(p4, p2, p3) / vol;
    out.rho[k] = out.rho_series[k].value();
    out.tau[k] = out.tau_series[k].value();
    out.normalization_residual = std::max(out.normalization_residual, std::abs(vol.value() - 1.0));
    const VecD res = derivative_of(p4, 0) + out.rho[k] * derivative_of(p2, 0) -
                     out.tau[k] * derivative_of(p1, 0);
    out.structure_residual = std::max(out.structure_residual, res.norm());
  }
  out.rho_prime.resize(n);
  if (out.rho_series[0].order() >= 1) {
    for (size_t k = 0; k < n; ++k) out.rho_prime[k] = out.rho_series[k].derivative(1);
  } else {
    const auto fd = derive_scalar_jets(out.rho, detail::uniform_step(rp.u), 1, out.closed);
    for (size_t k = 0; k < n; ++k) out.rho_prime[k] = fd[k][1];
  }
  return out;
}

struct Cylindricity {
  bool cylindrical = false;
  std::vector<double> residual;     // rho' + tau
  double max_residual = 0.0;
};

inline Cylindricity cylindricity_test(const SpatialAffineCurve& c, const ToleranceConfig& cfg) {
  Cylindricity r;
  for (size_t k = 0; k < c.size(); ++k) {
    r.residual.push_back(c.rho_prime[k] + c.tau[k]);
    r.max_residual = std::max(r.max_residual, std::abs(r.residual.back()));
  }
  r.cylindrical = r.max_residual < cfg.tol_residual;
  return r;
}

struct ProjectiveDensity {
  std::vector<double> density;      // signed cube root of rho' + 2 tau
  std::vector<Zero> zeros;
  bool identically_zero = false;
};

/// `periodic` scans the tables cyclically; it defaults to the curve being
/// closed but also applies to open curves with periodic invariants.
inline ProjectiveDensity projective_density(const SpatialAffineCurve& c, const ToleranceConfig& cfg,
                                            std::optional<bool> periodic = std::nullopt) {
  ProjectiveDensity p;
  std::vector<double> raw;
  for (size_t k = 0; k < c.size(); ++k) {
    raw.push_back(c.rho_prime[k] + 2.0 * c.tau[k]);
    p.density.push_back(std::cbrt(raw.back()));
  }
  p.identically_zero = identically_zero(raw, cfg.tol_zero);
  if (!p.identically_zero) p.zeros = locate_zeros(c.grid(), raw, cfg, periodic.value_or(c.closed));
  return p;
}

/// Phi = (integral of G, u) for a planar curve G in affine arc-length, so that
/// Phi' = (G, 1); then rho(Phi) = rho(G) and tau = 0.
inline CurvePtr tangent_lift(const PlanarAffineCurve& c) {
  const int order = std::min(kInvariantOrder + 4, c.jets.source->max_order());
  const double h = detail::uniform_step(c.grid());
  std::vector<SVec> exps;
  double x = 0.0, y = 0.0;
  for (size_t k = 0; k < c.size(); ++k) {
    const SVec g = c.expansion(c.grid()[k], order);
    if (k > 0) {
      const SVec prev = c.expansion(c.grid()[k - 1], order);
      x += prev[0].integral(0.0).eval(h);
      y += prev[1].integral(0.0).eval(h);
    }
    exps.push_back(SVec{g[0].integral(x), g[1].integral(y), Series::variable(c.grid()[k], order + 1)});
  }
  return std::make_shared<GridSeriesCurve>(c.grid(), exps, order + 1);
}

}  // namespace afocal::curves
