#pragma once

// Reparametrization of a curve source by a new parameter u defined through
// a speed density du/dt. The density is given locally as series, so t(u) is
// obtained with a Taylor (Picard) method and every output sample carries an
// exact local expansion of the curve in u.

#include <cmath>
#include <functional>
#include <memory>
#include <vector>

#include "afocal/numkit/curve_source.hpp"
#include "afocal/numkit/errors.hpp"

namespace afocal {

/// du/dt near a base point t_k, as a function of d = t - t_k:
///   base(d) * exp(-(G_k + integral_0^d rate)).
/// G is carried from sample to sample, which covers densities that are only
/// known up to an accumulated factor (the Darboux gauge).
struct SpeedDensity {
  Series base;
  Series rate;
};

using DensityFn = std::function<SpeedDensity(double t, int order)>;

struct Reparametrization {
  std::vector<double> u;          // uniform grid starting at 0
  std::vector<double> t;          // t(u_k)
  std::vector<double> log_gain;   // G(u_k)
  std::vector<Series> dt;         // t(u_k + e) - t(u_k)
  std::vector<SVec> expansions;   // position in u around u_k
  CurvePtr curve;                 // the same expansions as a source
  double length = 0.0;            // total u over [t0, t1]
  double end_drift = 0.0;         // |t(u_K) - t1|
};

namespace detail {

inline int substeps_for(double h) {
  return std::max(1, static_cast<int>(std::ceil(std::abs(h) / 0.05)));
}

// Local solution of dd/de = exp(g0) * exp(Gl(d)) / base(d), d(0) = 0.
inline Series solve_displacement(const SpeedDensity& dens, double g0) {
  const int n = std::min(dens.base.order(), dens.rate.order() + 1);
  const Series gl = dens.rate.integral(0.0).truncated(n);
  const Series inv = exp(gl) / dens.base.truncated(n);
  const double scale = std::exp(g0);
  Series delta(n + 1);
  if (n + 1 >= 1) delta[1] = scale * inv[0];
  for (int it = 0; it < n; ++it) delta = (scale * inv.compose(delta)).integral(0.0);
  return delta;
}

}  // namespace detail

/// Reparametrizes src on [t0, t1] by the density. The output grid has
/// `intervals` equal steps in u. `order` is the series order of the density;
/// position expansions come out with order + 1.
inline Reparametrization reparametrize(const CurvePtr& src, double t0, double t1, int intervals,
                                       const DensityFn& density, int order) {
  Reparametrization r;
  // Total length by integrating the density series over sub-intervals.
  {
    const double ht = (t1 - t0) / intervals;
    const int m = detail::substeps_for(ht);
    const double h = ht / m;
    double t = t0, g = 0.0, len = 0.0;
    for (int k = 0; k < intervals; ++k) {
      for (int s = 0; s < m; ++s) {
        const SpeedDensity dn = density(t, order);
        const Series gl = dn.rate.integral(0.0);
        const Series speed = dn.base * exp(-gl) * std::exp(-g);
        len += speed.integral(0.0).eval(h);
        g += gl.eval(h);
        t = t0 + ht * k + h * (s + 1);
      }
    }
    r.length = len;
  }
  const double hu = r.length / intervals;
  const int m = detail::substeps_for(hu);
  const double h = hu / m;
  double t = t0, g = 0.0;
  for (int k = 0; k <= intervals; ++k) {
    const SpeedDensity dn = density(t, order);
    const Series delta = detail::solve_displacement(dn, g);
    r.u.push_back(hu * k);
    r.t.push_back(t);
    r.log_gain.push_back(g);
    r.dt.push_back(delta);
    r.expansions.push_back(compose(src->taylor(t, delta.order()), delta));
    if (k == intervals) break;
    for (int s = 0; s < m; ++s) {
      const SpeedDensity ds = s == 0 ? dn : density(t, order);
      const Series dl = s == 0 ? delta : detail::solve_displacement(ds, g);
      const double step = dl.eval(h);
      g += ds.rate.integral(0.0).eval(step);
      t += step;
    }
  }
  r.u.back() = r.length;
  r.end_drift = std::abs(t - t1);
  const int trusted = std::min(order + 1, src->max_order());
  r.curve = std::make_shared<GridSeriesCurve>(r.u, r.expansions, trusted);
  return r;
}

}  // namespace afocal
