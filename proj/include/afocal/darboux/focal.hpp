#pragma once

// The affine focal set of a curve in a surface: the ruled surface of lines
// l(u) = {phi + a xi + b eta : a sigma + b mu = 1}, its edge of regression and
// the classification of its singular points.
//
// With alpha = a + b lambda the line reads {phi + alpha xi + b phi'' :
// alpha sigma + b rho = 1}, which does not involve lambda; lines are stored in
// that form so that they are independent of lambda0.

#include <cmath>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "afocal/darboux/frame.hpp"

namespace afocal::darboux {

enum class SingularityLabel { Smooth, CuspidalEdge, Swallowtail, Degenerate };

inline const char* to_string(SingularityLabel l) {
  switch (l) {
    case SingularityLabel::Smooth: return "Smooth";
    case SingularityLabel::CuspidalEdge: return "CuspidalEdge";
    case SingularityLabel::Swallowtail: return "Swallowtail";
    case SingularityLabel::Degenerate: return "Degenerate";
  }
  return "?";
}

struct Line {
  VecD point;  // phi + alpha0 xi + b0 phi'', the foot of (alpha, b) closest to 0
  VecD dir;    // -rho xi + sigma phi'', scaled by 1 / |(sigma, rho)|

  VecD at(double s) const { return point + s * dir; }
  double distance(const VecD& x) const {
    const VecD r = x - point;
    return (r - (r.dot(dir) / dir.squaredNorm()) * dir).norm();
  }
};

/// Line l(u) at an arbitrary u, from the nearest local expansions.
inline Line line_at(const DarbouxFrame& f, double u, const ToleranceConfig& cfg) {
  const SVec p = f.at(f.phi, u);
  const VecD phi = value_of(p), p2 = derivative_of(p, 2), xi = value_of(f.at(f.xi, u));
  const double s = f.at(f.sigma, u).value(), r = f.at(f.rho, u).value();
  const double nn = s * s + r * r;
  if (std::sqrt(nn) < cfg.tol_zero) throw PointError(ErrorKind::EmptyLocus, u, "sigma = mu = 0");
  const double norm = std::sqrt(nn);
  return {phi + (s / nn) * xi + (r / nn) * p2, (-r * xi + s * p2) / norm};
}

/// (a, b) with x - phi = a xi + b eta; least squares off the plane.
inline std::pair<double, double> line_coords(const DarbouxFrame& f, double u, const VecD& x) {
  if (!f.completed) throw Error(ErrorKind::InvalidConfig, "frame has no lambda; call complete_frame");
  MatD m(3, 2);
  m.col(0) = value_of(f.at(f.xi, u));
  m.col(1) = value_of(f.at(f.eta, u));
  const VecD ab = m.colPivHouseholderQr().solve(x - value_of(f.at(f.phi, u)));
  return {ab[0], ab[1]};
}

struct Classification {
  SingularityLabel label = SingularityLabel::Degenerate;
  double c[4] = {0, 0, 0, 0};  // a sigma^(k) + b mu^(k), k = 0..3
};

/// Label of the point phi(u) + a xi + b eta of l(u) from the jets of
/// a sigma + b mu: the first nonvanishing derivative decides.
inline Classification classify_singularity(const DarbouxFrame& f, double u, double a, double b,
                                           const ToleranceConfig& cfg) {
  if (!f.completed) throw Error(ErrorKind::InvalidConfig, "frame has no lambda; call complete_frame");
  const Series s = f.at(f.sigma, u), m = f.at(f.mu, u);
  if (s.order() < 3 || m.order() < 3) {
    throw PointError(ErrorKind::InsufficientJets, u, "classification needs third-order jets of sigma, mu");
  }
  Classification c;
  for (int k = 0; k <= 3; ++k) c.c[k] = a * s.derivative(k) + b * m.derivative(k);
  if (std::abs(c.c[0] - 1.0) >= cfg.tol_residual) {
    throw PointError(ErrorKind::Containment, u, "point is not on the line a sigma + b mu = 1");
  }
  if (std::abs(c.c[1]) > cfg.tol_zero) c.label = SingularityLabel::Smooth;
  else if (std::abs(c.c[2]) > cfg.tol_zero) c.label = SingularityLabel::CuspidalEdge;
  else if (std::abs(c.c[3]) > cfg.tol_zero) c.label = SingularityLabel::Swallowtail;
  else c.label = SingularityLabel::Degenerate;
  return c;
}

struct SingularPoint {
  double u = 0.0;
  double a = 0.0, b = 0.0;  // coordinates in (xi, eta)
  VecD point;
  SingularityLabel label = SingularityLabel::Degenerate;
};

namespace detail {

/// Point of l(u) where additionally a sigma' + b mu' = 0; nullopt where the
/// 2x2 system is singular.
inline std::optional<SingularPoint> edge_point(const DarbouxFrame& f, double u,
                                               const ToleranceConfig& cfg) {
  const Series s = f.at(f.sigma, u), m = f.at(f.mu, u);
  const double s0 = s.value(), m0 = m.value(), s1 = s.derivative(1), m1 = m.derivative(1);
  const double det = s0 * m1 - m0 * s1;
  const double scale = std::max({std::abs(s0), std::abs(m0), 1.0}) * std::max({std::abs(s1), std::abs(m1), 1.0});
  if (std::abs(det) < cfg.tol_zero * scale) return std::nullopt;
  SingularPoint p;
  p.u = u;
  p.a = m1 / det;
  p.b = -s1 / det;
  p.point = value_of(f.at(f.phi, u)) + p.a * value_of(f.at(f.xi, u)) + p.b * value_of(f.at(f.eta, u));
  p.label = classify_singularity(f, u, p.a, p.b, cfg).label;
  return p;
}

inline double swallowtail_indicator(const DarbouxFrame& f, double u) {
  const Series s = f.at(f.sigma, u), m = f.at(f.mu, u);
  return s.derivative(1) * m.derivative(2) - m.derivative(1) * s.derivative(2);
}

}  // namespace detail

struct FocalSheet {
  std::vector<double> u;
  std::vector<double> s;                  // line parameter samples
  std::vector<Line> lines;
  std::vector<std::optional<VecD>> O_pts, Q_pts;
  std::vector<std::vector<VecD>> mesh;    // mesh[k][j] = lines[k].at(s[j])
  std::vector<SingularPoint> edge;        // edge of regression, one per sample where defined
  std::vector<SingularPoint> swallowtails;
  std::vector<SingularPoint> sample_points;  // per u: edge point, else the line foot
  bool periodic = false;
  bool degenerate = false;                // every line coincides with the first
  double developability_residual = 0.0;  // max normalized |[Q', O', O - Q]|
};

/// Samples the ruled focal surface over `s_samples` values of the line
/// parameter in [s_min, s_max].
inline FocalSheet focal_sheet(const DarbouxFrame& f, double s_min, double s_max, int s_samples,
                              const ToleranceConfig& cfg) {
  if (!f.completed) throw Error(ErrorKind::InvalidConfig, "frame has no lambda; call complete_frame");
  if (s_samples < 2 || !(s_max > s_min)) throw Error(ErrorKind::InvalidConfig, "bad s_range");
  FocalSheet sh;
  sh.u = f.grid;
  sh.periodic = f.periodic;
  sh.s = uniform_grid(s_min, s_max, s_samples - 1);
  const size_t n = f.size();
  sh.lines.resize(n);
  sh.O_pts.resize(n);
  sh.Q_pts.resize(n);
  sh.mesh.resize(n);
  sh.sample_points.resize(n);
  std::vector<std::optional<SingularPoint>> edge(n);
  std::vector<double> dev(n, 0.0);
  for (size_t k = 0; k < n; ++k) {
    const double sg = f.sigma[k].value(), mu = f.mu[k].value();
    if (std::abs(sg) < cfg.tol_zero && std::abs(mu) < cfg.tol_zero) {
      throw PointError(ErrorKind::EmptyLocus, f.grid[k], "sigma = mu = 0");
    }
  }
  parallel_for(n, [&](size_t k) {
    const double u = f.grid[k];
    sh.lines[k] = line_at(f, u, cfg);
    const VecD phi = value_of(f.phi[k]);
    const double sg = f.sigma[k].value(), mu = f.mu[k].value();
    if (std::abs(sg) >= cfg.tol_zero) sh.O_pts[k] = phi + value_of(f.xi[k]) / sg;
    if (std::abs(mu) >= cfg.tol_zero) sh.Q_pts[k] = phi + value_of(f.eta[k]) / mu;
    for (double s : sh.s) sh.mesh[k].push_back(sh.lines[k].at(s));
    edge[k] = detail::edge_point(f, u, cfg);
    if (edge[k]) {
      sh.sample_points[k] = *edge[k];
    } else {
      SingularPoint p;
      p.u = u;
      p.point = sh.lines[k].point;
      std::tie(p.a, p.b) = line_coords(f, u, p.point);
      p.label = classify_singularity(f, u, p.a, p.b, cfg).label;
      sh.sample_points[k] = p;
    }
    // developability, where O and Q move
    const double s1 = f.sigma[k].derivative(1), m1 = f.mu[k].derivative(1);
    if (std::abs(sg) < cfg.tol_zero || std::abs(mu) < cfg.tol_zero || std::abs(s1) < cfg.tol_zero ||
        std::abs(m1) < cfg.tol_zero) {
      return;
    }
    const int q = std::min({min_order(f.xi[k]), min_order(f.eta[k]), f.sigma[k].order(), f.mu[k].order()});
    SVec o, qq;
    for (int i = 0; i < 3; ++i) {
      o.push_back(f.phi[k][i].truncated(q) + f.xi[k][i].truncated(q) / f.sigma[k].truncated(q));
      qq.push_back(f.phi[k][i].truncated(q) + f.eta[k][i].truncated(q) / f.mu[k].truncated(q));
    }
    const VecD dO = derivative_of(o, 1), dQ = derivative_of(qq, 1), oq = value_of(o) - value_of(qq);
    const double den = dQ.norm() * dO.norm() * oq.norm();
    if (den > 0) dev[k] = std::abs(det3(dQ, dO, oq)) / den;
  });
  for (size_t k = 0; k < n; ++k) {
    sh.developability_residual = std::max(sh.developability_residual, dev[k]);
    if (edge[k]) sh.edge.push_back(*edge[k]);
  }
  sh.degenerate = true;
  for (size_t k = 1; k < n && sh.degenerate; ++k) {
    for (double s : {sh.s.front(), sh.s.back()}) {
      if (sh.lines[0].distance(sh.lines[k].at(s)) > 1e-8) sh.degenerate = false;
    }
  }
  // swallowtails: a sigma + b mu = 1 and its first two derivatives vanish
  std::vector<double> ind(n);
  for (size_t k = 0; k < n; ++k) ind[k] = detail::swallowtail_indicator(f, f.grid[k]);
  if (!identically_zero(ind, cfg.tol_zero)) {
    const auto zs = locate_zeros(f.grid, ind, cfg, f.periodic,
                                 [&f](double u) { return detail::swallowtail_indicator(f, u); });
    for (const Zero& z : zs) {
      if (z.tangential) continue;
      if (auto p = detail::edge_point(f, z.u, cfg)) sh.swallowtails.push_back(*p);
    }
  }
  return sh;
}

}  // namespace afocal::darboux
