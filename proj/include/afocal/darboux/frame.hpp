#pragma once

// Darboux frame of a curve phi in a surface M of R^3: the gauge in which
// phi''' is tangent to M, the Darboux field xi (xi' = -sigma T), the invariants
// sigma, rho, tau, lambda, mu and the transversal eta = phi'' + lambda xi.

#include <cmath>
#include <optional>
#include <vector>

#include "afocal/darboux/surface.hpp"
#include "afocal/numkit/reparam.hpp"

namespace afocal::darboux {

/// Series order of position expansions; invariants come out 4 orders lower.
inline constexpr int kFrameOrder = 14;

struct NondegeneracyReport {
  double min_dot = 0.0;  // min |phi'' . n| with n unit
  double u_at_min = 0.0;
};

inline double unit_dot(const VecD& v, const VecD& n) { return v.dot(n) / n.norm(); }

/// The osculating plane must differ from the tangent plane: phi_tt . n != 0.
inline NondegeneracyReport check_nondegenerate(const CurveOnSurface& c, int intervals,
                                               const ToleranceConfig& cfg) {
  NondegeneracyReport r;
  r.min_dot = INFINITY;
  for (double t : uniform_grid(c.t0, c.t1, intervals)) {
    const double v = std::abs(unit_dot(c.curve->derivative(t, 2), c.normal->position(t)));
    if (v < r.min_dot) {
      r.min_dot = v;
      r.u_at_min = t;
    }
  }
  if (!(r.min_dot >= cfg.tol_zero)) {
    throw PointError(ErrorKind::DegeneratePoint, r.u_at_min,
                     "osculating plane coincides with the tangent plane");
  }
  return r;
}

/// A curve on a surface in the Darboux gauge phi''' . n = 0.
struct GaugedCurve {
  std::vector<double> grid;        // u, uniform from 0
  std::vector<double> t_of_u;
  std::vector<SVec> phi;           // position expansions in u
  std::vector<SVec> normal;        // normal expansions in u
  double gauge = 1.0;              // t'(u0)
  bool periodic = false;
  double gauge_residual = 0.0;     // max |phi''' . n| with n unit
  double containment_residual = 0.0;

  size_t size() const { return grid.size(); }
};

/// Integrates d/dt log t' = -(phi_ttt . n) / (3 phi_tt . n) with t'(u0) = gauge.
inline GaugedCurve reparam_darboux(const CurveOnSurface& c, int intervals,
                                   const ToleranceConfig& cfg, double gauge = 1.0) {
  cfg.validate();
  if (!(gauge > 0)) throw Error(ErrorKind::InvalidConfig, "gauge must be positive");
  check_nondegenerate(c, intervals, cfg);
  const CurvePtr pos = c.curve, nor = c.normal;
  const double tol_zero = cfg.tol_zero;
  const auto density = [pos, nor, gauge, tol_zero](double t, int n) {
    const SVec p = pos->taylor(t, n + 3);
    const SVec nn = nor->taylor(t, n);
    const SVec p2 = d(d(p));
    const Series a = dot(truncated(p2, n), nn);
    if (!(std::abs(a.value()) >= tol_zero * value_of(nn).norm())) {
      throw PointError(ErrorKind::DegeneratePoint, t, "phi_tt . n vanishes");
    }
    const Series g = -dot(d(p2), nn) / (3.0 * a);
    return SpeedDensity{Series(n, 1.0 / gauge), g};
  };
  const Reparametrization rp = reparametrize(pos, c.t0, c.t1, intervals, density, kFrameOrder);
  GaugedCurve out;
  out.grid = rp.u;
  out.t_of_u = rp.t;
  out.gauge = gauge;
  out.phi = rp.expansions;
  out.containment_residual = c.containment_residual;
  for (size_t k = 0; k < rp.u.size(); ++k) {
    out.normal.push_back(compose(nor->taylor(rp.t[k], rp.dt[k].order()), rp.dt[k]));
    const VecD n = value_of(out.normal.back());
    out.gauge_residual =
        std::max(out.gauge_residual, std::abs(unit_dot(derivative_of(out.phi[k], 3), n)));
  }
  if (c.periodic) {
    bool match = true;
    for (int m = 0; m <= 4; ++m) {
      const VecD a = derivative_of(out.phi.front(), m), b = derivative_of(out.phi.back(), m);
      match = match && (a - b).norm() <= 1e-8 * std::max(1.0, a.norm());
    }
    out.periodic = match;
  }
  return out;
}

struct DarbouxFrame {
  std::vector<double> grid;
  std::vector<double> t_of_u;      // original curve parameter at each sample
  std::vector<SVec> phi, normal, xi, eta;
  std::vector<Series> sigma, rho, tau, lambda, mu;
  double lambda0 = 0.0;
  double gauge = 1.0;
  bool periodic = false;
  bool completed = false;          // lambda, eta, mu present
  double parallel_residual = 0.0;  // max |xi' components along phi'', xi|

  size_t size() const { return grid.size(); }
  double step() const { return (grid.back() - grid.front()) / static_cast<double>(size() - 1); }

  size_t nearest(double u) const {
    const long j = std::lround((u - grid.front()) / step());
    return static_cast<size_t>(std::clamp<long>(j, 0, static_cast<long>(size()) - 1));
  }
  /// Local expansion of a per-sample series family around an arbitrary u.
  Series at(const std::vector<Series>& s, double u) const {
    const size_t j = nearest(u);
    return s[j].shifted(u - grid[j]);
  }
  SVec at(const std::vector<SVec>& s, double u) const {
    const size_t j = nearest(u);
    return shifted(s[j], u - grid[j]);
  }
  static std::vector<double> values(const std::vector<Series>& s) {
    std::vector<double> v;
    for (const auto& x : s) v.push_back(x.value());
    return v;
  }
};

/// xi = xi0 + c T with xi0 = w / [T, phi'', w], w = n x T and c chosen so that
/// xi' . n = 0; then sigma, rho, tau from volume forms.
inline DarbouxFrame darboux_field(const GaugedCurve& g, const ToleranceConfig& cfg) {
  DarbouxFrame f;
  f.grid = g.grid;
  f.t_of_u = g.t_of_u;
  f.gauge = g.gauge;
  f.periodic = g.periodic;
  f.phi = g.phi;
  f.normal = g.normal;
  for (size_t k = 0; k < g.size(); ++k) {
    const SVec& p = g.phi[k];
    const SVec t = d(p), p2 = d(t), p3 = d(p2);
    const SVec n = truncated(g.normal[k], min_order(t));
    const SVec w = cross(n, t);
    const Series vol = det3(truncated(t, min_order(p2)), p2, truncated(w, min_order(p2)));
    if (!(std::abs(vol.value()) >= cfg.tol_zero)) {
      throw PointError(ErrorKind::DegeneratePoint, g.grid[k], "[T, phi'', n x T] vanishes");
    }
    const SVec xi0 = truncated(w, vol.order()) / vol;
    const SVec dxi0 = d(xi0);
    const int m = min_order(dxi0);
    const Series c = -dot(dxi0, truncated(n, m)) / dot(truncated(p2, m), truncated(n, m));
    SVec xi;
    for (int i = 0; i < 3; ++i) xi.push_back(xi0[i].truncated(m) + c * t[i].truncated(m));
    const SVec dxi = d(xi);
    const int q = min_order(dxi);
    const SVec tq = truncated(t, q), p2q = truncated(p2, q), xiq = truncated(xi, q);
    f.xi.push_back(xi);
    f.sigma.push_back(-det3(dxi, p2q, xiq));
    f.tau.push_back(det3(truncated(t, min_order(p3)), truncated(p2, min_order(p3)), p3));
    f.rho.push_back(-det3(p3, truncated(p2, min_order(p3)), truncated(xi, min_order(p3))));
    // xi' in the basis (T, phi'', xi) has no phi'' or xi component
    const VecD dv = value_of(dxi), tv = value_of(tq), p2v = value_of(p2q), xv = value_of(xiq);
    f.parallel_residual = std::max({f.parallel_residual, std::abs(det3(tv, dv, xv)),
                                    std::abs(det3(tv, p2v, dv))});
  }
  return f;
}

/// lambda' = -tau with lambda(u0) = lambda0, eta = phi'' + lambda xi,
/// mu = rho + lambda sigma. Each step integrates the tau expansions of its two
/// end samples over the half-steps nearest to them.
inline DarbouxFrame complete_frame(DarbouxFrame f, double lambda0) {
  if (!std::isfinite(lambda0)) throw Error(ErrorKind::InvalidConfig, "lambda0 must be finite");
  std::vector<double> lam(f.size(), lambda0);
  for (size_t k = 1; k < f.size(); ++k) {
    const double h = f.grid[k] - f.grid[k - 1];
    const Series a = f.tau[k - 1].integral(0.0), b = f.tau[k].integral(0.0);
    lam[k] = lam[k - 1] - (a.eval(0.5 * h) - b.eval(-0.5 * h));
    if (!std::isfinite(lam[k])) throw PointError(ErrorKind::DivergentODE, f.grid[k], "lambda diverges");
  }
  f.lambda0 = lambda0;
  f.lambda.clear();
  f.eta.clear();
  f.mu.clear();
  for (size_t k = 0; k < f.size(); ++k) {
    const Series l = (-f.tau[k]).integral(lam[k]);
    const SVec p2 = d(d(f.phi[k]));
    const int n = std::min(min_order(f.xi[k]), l.order());
    SVec eta;
    for (int i = 0; i < 3; ++i) eta.push_back(p2[i].truncated(n) + l.truncated(n) * f.xi[k][i].truncated(n));
    f.lambda.push_back(l);
    f.eta.push_back(eta);
    f.mu.push_back(f.rho[k] + l * f.sigma[k]);
  }
  f.completed = true;
  return f;
}

/// Pointwise checks of the frame equations at every sample.
struct FrameResiduals {
  double normalization = 0.0;      // |[T, phi'', xi] - 1|
  double normalization_eta = 0.0;  // |[T, eta, xi] - 1|
  double xi_tangent = 0.0;         // |xi . n| / |n|
  double xi_eq = 0.0;              // |xi' + sigma T|
  double eta_eq = 0.0;             // |eta' + mu T|
  double t_eq = 0.0;               // |T' - eta + lambda xi|
};

inline FrameResiduals frame_residuals(const DarbouxFrame& f) {
  FrameResiduals r;
  for (size_t k = 0; k < f.size(); ++k) {
    const VecD t = derivative_of(f.phi[k], 1), p2 = derivative_of(f.phi[k], 2);
    const VecD xi = value_of(f.xi[k]), dxi = derivative_of(f.xi[k], 1);
    const VecD n = value_of(f.normal[k]);
    r.normalization = std::max(r.normalization, std::abs(det3(t, p2, xi) - 1.0));
    r.xi_tangent = std::max(r.xi_tangent, std::abs(xi.dot(n)) / n.norm());
    r.xi_eq = std::max(r.xi_eq, (dxi + f.sigma[k].value() * t).norm());
    if (!f.completed) continue;
    const VecD eta = value_of(f.eta[k]), deta = derivative_of(f.eta[k], 1);
    const double lam = f.lambda[k].value();
    r.normalization_eta = std::max(r.normalization_eta, std::abs(det3(t, eta, xi) - 1.0));
    r.eta_eq = std::max(r.eta_eq, (deta + f.mu[k].value() * t).norm());
    r.t_eq = std::max(r.t_eq, (p2 - eta + lam * xi).norm());
  }
  return r;
}

struct ConstantPoint {
  VecD point;
  double spread = 0.0;  // max distance of the per-sample points from the mean
};

namespace detail {

inline double spread_of(const std::vector<Series>& s, double* mean) {
  double m = 0.0;
  for (const auto& x : s) m += x.value();
  m /= static_cast<double>(s.size());
  double sp = 0.0;
  for (const auto& x : s) sp = std::max(sp, std::abs(x.value() - m));
  *mean = m;
  return sp;
}

inline ConstantPoint mean_point(const DarbouxFrame& f, const std::vector<SVec>& dir, double c) {
  std::vector<VecD> pts;
  VecD m = VecD::Zero(3);
  for (size_t k = 0; k < f.size(); ++k) {
    pts.push_back(value_of(f.phi[k]) + value_of(dir[k]) / c);
    m += pts.back();
  }
  m /= static_cast<double>(pts.size());
  ConstantPoint r{m, 0.0};
  for (const VecD& p : pts) r.spread = std::max(r.spread, (p - m).norm());
  return r;
}

}  // namespace detail

/// Visual contour: sigma constant and nonzero; O = phi + xi / sigma.
inline std::optional<ConstantPoint> visual_contour_test(const DarbouxFrame& f,
                                                        const ToleranceConfig& cfg) {
  double mean = 0.0;
  if (detail::spread_of(f.sigma, &mean) >= cfg.tol_residual || std::abs(mean) < cfg.tol_zero) {
    return std::nullopt;
  }
  return detail::mean_point(f, f.xi, mean);
}

/// mu constant and nonzero; Q = phi + eta / mu.
inline std::optional<ConstantPoint> constant_Q_test(const DarbouxFrame& f,
                                                    const ToleranceConfig& cfg) {
  if (!f.completed) throw Error(ErrorKind::InvalidConfig, "frame has no lambda; call complete_frame");
  double mean = 0.0;
  if (detail::spread_of(f.mu, &mean) >= cfg.tol_residual || std::abs(mean) < cfg.tol_zero) {
    return std::nullopt;
  }
  return detail::mean_point(f, f.eta, mean);
}

struct Flattening {
  std::vector<Zero> zeros;
  bool identically_zero = false;
};

inline Flattening flattening_points(const DarbouxFrame& f, const ToleranceConfig& cfg) {
  Flattening r;
  const auto tau = DarbouxFrame::values(f.tau);
  r.identically_zero = identically_zero(tau, cfg.tol_zero);
  if (r.identically_zero) return r;
  r.zeros = locate_zeros(f.grid, tau, cfg, f.periodic,
                         [&f](double u) { return f.at(f.tau, u).value(); });
  return r;
}

}  // namespace afocal::darboux
