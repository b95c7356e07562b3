#pragma once

// Blaschke structure of non-degenerate hypersurfaces f: U -> R^(n+1), n = 1, 2:
// metric h = L / |det L|^(1/(n+2)) with L_ij = [f_1, .., f_n, f_ij], affine
// normal xi = (1/n) Lap_h f, co-normal nu (nu . f_i = 0, nu . xi = 1) and the
// affine mean curvature H = (1/n) tr S, D_i xi = -f_*(S e_i).
//
// Everything is computed on local Taylor expansions, so each sample carries
// series for f, h, xi, nu that downstream code can differentiate again.

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "afocal/curves/planar.hpp"
#include "afocal/numkit.hpp"

namespace afocal::blaschke {

/// Bivariate order of surface patch expansions; nu comes out 3 orders lower.
inline constexpr int kPatchOrder = 9;

inline SVec2 truncated2(const SVec2& s, int order) {
  SVec2 r;
  for (const auto& x : s) r.push_back(x.truncated(order));
  return r;
}

inline int min_order2(const SVec2& s) {
  int m = s.front().order();
  for (const auto& x : s) m = std::min(m, x.order());
  return m;
}

// ---- n = 1 ------------------------------------------------------------------

/// Lap_h F for the metric h dt^2 on a curve: (F'' - (h' / 2h) F') / h.
inline SVec laplacian(const SVec& F, const Series& h) {
  const SVec f1 = d(F), f2 = d(f1);
  const int n = std::min(min_order(f2), h.order() - 1);
  const Series hn = h.truncated(n);
  const Series gam = h.d().truncated(n) / (2.0 * hn);
  SVec r;
  for (size_t i = 0; i < F.size(); ++i) r.push_back((f2[i].truncated(n) - gam * f1[i].truncated(n)) / hn);
  return r;
}

struct Local1 {
  SVec f, xi, nu;
  Series h;   // metric coefficient of dt^2
  Series H;
};

/// Blaschke structure of a planar curve from its expansion in any parameter.
inline Local1 local_apparatus(const SVec& f, double t, const ToleranceConfig& cfg) {
  const SVec f1 = d(f), f2 = d(f1);
  const Series L = det2(truncated(f1, min_order(f2)), f2);
  if (!(std::abs(L.value()) >= cfg.tol_zero)) {
    throw PointError(ErrorKind::DegenerateMetric, t, "[f', f''] vanishes");
  }
  Local1 a;
  a.f = f;
  const double eps = L.value() > 0 ? 1.0 : -1.0;
  a.h = eps * L / pow(abs(L), 1.0 / 3.0);
  a.xi = laplacian(f, a.h);
  const int m = min_order(a.xi);
  // nu = J f' / (J f' . xi) with J f' = (-f'_y, f'_x)
  const SVec jf{-f1[1].truncated(m), f1[0].truncated(m)};
  const Series s = dot(jf, a.xi);
  a.nu = jf / s;
  // xi' = -S f': S = -[xi', J f'] ... solve xi' = c f' by projecting on f'
  const SVec dxi = d(a.xi);
  const int q = min_order(dxi);
  const SVec fq = truncated(f1, q);
  a.H = -dot(dxi, fq) / dot(fq, fq);
  return a;
}

// ---- n = 2 ------------------------------------------------------------------

struct Metric2 {
  Series2 h11, h12, h22;
  Series2 det() const { return h11 * h22 - h12 * h12; }
  int order() const { return std::min({h11.order(), h12.order(), h22.order()}); }
  Series2 get(int i, int j) const { return i == 0 ? (j == 0 ? h11 : h12) : (j == 0 ? h12 : h22); }
};

/// Lap_h F = h^ij (d_i d_j F - Gamma^k_ij d_k F).
inline SVec2 laplacian(const SVec2& F, const Metric2& h) {
  const int n = std::min(min_order2(F) - 2, h.order() - 1);
  if (n < 0) throw Error(ErrorKind::InsufficientJets, "Laplacian needs second-order jets");
  const Series2 det = h.det().truncated(n);
  if (!(det.value() != 0.0)) throw Error(ErrorKind::DegenerateMetric, "metric is singular");
  // inverse metric
  std::array<std::array<Series2, 2>, 2> hi;
  hi[0][0] = h.h22.truncated(n) / det;
  hi[1][1] = h.h11.truncated(n) / det;
  hi[0][1] = hi[1][0] = -h.h12.truncated(n) / det;
  // dh[l][i][j] = d_l h_ij
  std::array<std::array<std::array<Series2, 2>, 2>, 2> dh;
  for (int l = 0; l < 2; ++l)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) dh[l][i][j] = h.get(i, j).d(l).truncated(n);
  // Gamma^k_ij = 1/2 h^kl (d_i h_jl + d_j h_il - d_l h_ij)
  std::array<std::array<std::array<Series2, 2>, 2>, 2> gam;
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        Series2 s(n, 0.0);
        for (int l = 0; l < 2; ++l) s += hi[k][l] * (dh[i][j][l] + dh[j][i][l] - dh[l][i][j]);
        gam[k][i][j] = 0.5 * s;
      }
  SVec2 r;
  for (const Series2& c : F) {
    const Series2 c0 = c.d(0), c1 = c.d(1);
    const std::array<Series2, 2> dc{c0.truncated(n), c1.truncated(n)};
    Series2 acc(n, 0.0);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        Series2 term = (i == 0 ? c0 : c1).d(j).truncated(n);
        for (int k = 0; k < 2; ++k) term -= gam[k][i][j] * dc[k];
        acc += hi[i][j] * term;
      }
    r.push_back(acc);
  }
  return r;
}

struct Local2 {
  SVec2 f, xi, nu;
  Metric2 h;
  Series2 H;
  double S[2][2] = {{0, 0}, {0, 0}};  // shape operator in the coordinate basis
};

/// Coordinates (a, b) of a tangent vector w = a f_u + b f_v.
inline std::array<Series2, 2> tangent_coords(const SVec2& w, const SVec2& fu, const SVec2& fv) {
  const SVec2 N = cross(fu, fv);
  const Series2 den = dot(N, N);
  return {dot(cross(w, fv), N) / den, dot(cross(fu, w), N) / den};
}

inline Local2 local_apparatus(const SVec2& f, double u, double v, const ToleranceConfig& cfg) {
  const SVec2 fu = d(f, 0), fv = d(f, 1);
  const SVec2 fuu = d(fu, 0), fuv = d(fu, 1), fvv = d(fv, 1);
  const int n2 = min_order2(fuu);
  const SVec2 N = cross(truncated2(fu, n2), truncated2(fv, n2));
  Metric2 L{dot(N, fuu), dot(N, fuv), dot(N, fvv)};
  const Series2 dL = L.det();
  if (!(dL.value() >= cfg.tol_zero)) {
    throw PointError(ErrorKind::DegenerateMetric, u,
                     "det L <= 0 at (" + std::to_string(u) + ", " + std::to_string(v) +
                         "): surface not locally strictly convex");
  }
  const double eps = L.h11.value() > 0 ? 1.0 : -1.0;
  const Series2 scale = eps * pow(dL, -0.25);
  Local2 a;
  a.f = f;
  a.h = Metric2{L.h11 * scale, L.h12 * scale, L.h22 * scale};
  a.xi = 0.5 * laplacian(f, a.h);
  const int m = min_order2(a.xi);
  const SVec2 Nm = truncated2(N, m);
  const Series2 s = dot(Nm, a.xi);
  a.nu = Nm / s;
  const SVec2 xu = d(a.xi, 0), xv = d(a.xi, 1);
  const int q = min_order2(xu);
  const SVec2 fuq = truncated2(fu, q), fvq = truncated2(fv, q);
  const auto cu = tangent_coords(xu, fuq, fvq), cv = tangent_coords(xv, fuq, fvq);
  // D_u xi = -(S11 f_u + S21 f_v), D_v xi = -(S12 f_u + S22 f_v)
  a.S[0][0] = -cu[0].value();
  a.S[1][0] = -cu[1].value();
  a.S[0][1] = -cv[0].value();
  a.S[1][1] = -cv[1].value();
  a.H = -0.5 * (cu[0] + cv[1]);
  return a;
}

// ---- hypersurfaces and the apparatus table -------------------------------------

using PatchFn = std::function<SVec2(const Series2& u, const Series2& v)>;

struct Hypersurface {
  int n = 1;
  std::string kind;
  // n = 1
  curves::NamedCurve curve;
  std::optional<JetCurve> samples;  // sampled input instead of an analytic curve
  // n = 2
  PatchFn patch;
  double u0 = 0, u1 = 1, v0 = 0, v1 = 1;
  bool periodic_u = false;

  SVec2 expand(double u, double v, int order) const {
    return patch(Series2::variable(0, u, order), Series2::variable(1, v, order));
  }
};

struct BlaschkeApparatus {
  int n = 1;
  std::vector<std::array<double, 2>> params;  // (u) or (u, v) per sample
  int rows = 0, cols = 1;                     // grid shape (n = 2: rows over u, cols over v)
  std::vector<Local1> local1;
  std::vector<Local2> local2;
  std::vector<VecD> f, xi, nu;
  std::vector<double> H;
  std::vector<MatD> h;
  bool low_confidence = false;
  bool periodic = false;
  double nu_tangent_residual = 0.0;    // max |nu . f_i|
  double nu_xi_residual = 0.0;         // max |nu . xi - 1|
  double nu_laplacian_residual = 0.0;  // max |(1/n) Lap nu + H nu|

  size_t size() const { return params.size(); }
};

/// n = 1: samples in affine arc-length of the planar curve (h = du^2);
/// n = 2: a (nu_int + 1) x (nv_int + 1) grid over the patch domain.
inline BlaschkeApparatus blaschke_apparatus(const Hypersurface& s, int intervals, const ToleranceConfig& cfg,
                                            int v_intervals = -1) {
  cfg.validate();
  BlaschkeApparatus b;
  b.n = s.n;
  if (s.n == 1) {
    JetCurve raw = s.samples ? *s.samples : JetCurve::from_source(s.curve.source, uniform_grid(s.curve.t0, s.curve.t1, intervals), 4);
    curves::PlanarAffineCurve c;
    try {
      c = curves::reparam_affine_planar(raw, cfg);
    } catch (const PointError& e) {
      if (e.kind() == ErrorKind::InflectionPoint) {
        throw PointError(ErrorKind::DegenerateMetric, e.u(), "[f', f''] vanishes");
      }
      throw;
    }
    b.low_confidence = c.low_confidence;
    b.periodic = c.closed;
    b.rows = static_cast<int>(c.size());
    const int order = std::max(2, std::min(kPatchOrder + 3, c.jets.source->max_order()));
    for (size_t k = 0; k < c.size(); ++k) {
      const double u = c.grid()[k];
      SVec e = c.expansion(u, order);
      if (c.reflected) e[1] = -e[1];
      Local1 a = local_apparatus(e, u, cfg);
      b.params.push_back({u, 0.0});
      b.f.push_back(value_of(a.f));
      b.xi.push_back(value_of(a.xi));
      b.nu.push_back(value_of(a.nu));
      b.H.push_back(a.H.value());
      b.h.push_back(MatD::Constant(1, 1, a.h.value()));
      const SVec f1 = d(a.f);
      b.nu_tangent_residual = std::max(b.nu_tangent_residual, std::abs(value_of(a.nu).dot(value_of(f1))));
      b.nu_xi_residual = std::max(b.nu_xi_residual, std::abs(value_of(a.nu).dot(value_of(a.xi)) - 1.0));
      if (min_order(a.nu) >= 2) {
        const VecD lap = value_of(laplacian(a.nu, a.h.truncated(min_order(a.nu))));
        b.nu_laplacian_residual = std::max(b.nu_laplacian_residual, (lap + a.H.value() * value_of(a.nu)).norm());
      }
      b.local1.push_back(std::move(a));
    }
    return b;
  }
  if (s.n != 2) throw Error(ErrorKind::SpecError, "hypersurface dimension must be 1 or 2");
  if (!s.patch) throw Error(ErrorKind::SpecError, "surface patch has no parametrization");
  const int nv = v_intervals > 0 ? v_intervals : intervals;
  const auto us = uniform_grid(s.u0, s.u1, intervals), vs = uniform_grid(s.v0, s.v1, nv);
  b.rows = static_cast<int>(us.size());
  b.cols = static_cast<int>(vs.size());
  b.periodic = s.periodic_u;
  for (double u : us)
    for (double v : vs) b.params.push_back({u, v});
  const size_t n = b.params.size();
  b.local2.resize(n);
  b.f.resize(n);
  b.xi.resize(n);
  b.nu.resize(n);
  b.H.resize(n);
  b.h.resize(n);
  std::vector<std::array<double, 3>> res(n);
  std::vector<std::optional<PointError>> err(n);
  parallel_for(n, [&](size_t k) {
    const auto [u, v] = b.params[k];
    try {
      Local2 a = local_apparatus(s.expand(u, v, kPatchOrder), u, v, cfg);
      b.f[k] = value_of(a.f);
      b.xi[k] = value_of(a.xi);
      b.nu[k] = value_of(a.nu);
      b.H[k] = a.H.value();
      MatD hm(2, 2);
      hm << a.h.h11.value(), a.h.h12.value(), a.h.h12.value(), a.h.h22.value();
      b.h[k] = hm;
      const VecD fu = value_of(d(a.f, 0)), fv = value_of(d(a.f, 1));
      res[k][0] = std::max(std::abs(b.nu[k].dot(fu)), std::abs(b.nu[k].dot(fv)));
      res[k][1] = std::abs(b.nu[k].dot(b.xi[k]) - 1.0);
      const VecD lap = value_of(laplacian(a.nu, a.h));
      res[k][2] = (0.5 * lap + b.H[k] * b.nu[k]).norm();
      b.local2[k] = std::move(a);
    } catch (const PointError& e) {
      err[k] = e;
    }
  });
  for (size_t k = 0; k < n; ++k) {
    if (err[k]) throw *err[k];
    b.nu_tangent_residual = std::max(b.nu_tangent_residual, res[k][0]);
    b.nu_xi_residual = std::max(b.nu_xi_residual, res[k][1]);
    b.nu_laplacian_residual = std::max(b.nu_laplacian_residual, res[k][2]);
  }
  return b;
}

/// Laplacian of a per-sample field given as local series.
inline std::vector<VecD> laplacian_of(const BlaschkeApparatus& b, const std::vector<SVec>& field) {
  std::vector<VecD> out;
  for (size_t k = 0; k < field.size(); ++k) out.push_back(value_of(laplacian(field[k], b.local1.at(k).h)));
  return out;
}
inline std::vector<VecD> laplacian_of(const BlaschkeApparatus& b, const std::vector<SVec2>& field) {
  std::vector<VecD> out;
  for (size_t k = 0; k < field.size(); ++k) out.push_back(value_of(laplacian(field[k], b.local2.at(k).h)));
  return out;
}

struct AffineSphere {
  VecD center;
  double residual = 0.0;  // max distance from the center to the normal lines
};

/// Least-squares concurrency point of the affine normal lines f + t xi; none
/// when the lines are (nearly) parallel or miss a common point.
inline std::optional<AffineSphere> is_proper_affine_sphere(const BlaschkeApparatus& b,
                                                           const ToleranceConfig& cfg) {
  const int d = b.n + 1;
  MatD A = MatD::Zero(d, d);
  VecD rhs = VecD::Zero(d);
  std::vector<MatD> proj;
  for (size_t k = 0; k < b.size(); ++k) {
    const VecD dir = b.xi[k].normalized();
    const MatD P = MatD::Identity(d, d) - dir * dir.transpose();
    A += P;
    rhs += P * b.f[k];
    proj.push_back(P);
  }
  Eigen::SelfAdjointEigenSolver<MatD> es(A);
  if (es.eigenvalues().minCoeff() < 1e-8 * es.eigenvalues().maxCoeff()) return std::nullopt;
  AffineSphere s{A.ldlt().solve(rhs), 0.0};
  for (size_t k = 0; k < b.size(); ++k) s.residual = std::max(s.residual, (proj[k] * (s.center - b.f[k])).norm());
  if (!(s.residual < cfg.tol_residual)) return std::nullopt;
  return s;
}

}  // namespace afocal::blaschke
