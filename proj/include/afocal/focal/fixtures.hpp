#pragma once

// Closed-form FrameData families: products of planar curves, sections of
// hyperquadrics and hyperplane sections of cones, plus conversions from the
// Darboux and umbilic pipelines.

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "afocal/blaschke/apparatus.hpp"
#include "afocal/curves/planar.hpp"
#include "afocal/darboux/frame.hpp"
#include "afocal/focal/frame_data.hpp"
#include "afocal/umbilic/construct.hpp"

namespace afocal::focal {

// ---- product of planar curves ---------------------------------------------------

/// phi(u1, u2) = (alpha(u1), beta(u2)) in R^4 with the Darboux field
/// xi = (alpha'', beta'') and eta = -(alpha'', 0). In these coordinates a focal
/// point phi + a xi + b eta equals phi + r xi_1 + s xi_2 with r = a - b, s = a,
/// where xi_1 = (alpha'', 0), xi_2 = (0, beta'').
struct ProductFixture {
  FrameData fd;
  curves::PlanarAffineCurve alpha, beta;
  std::vector<size_t> i1, i2;  // sample k uses alpha sample i1[k], beta sample i2[k]

  /// Hessian entries of the affine distance as printed in the source example:
  /// F_11 = 1 - r k(alpha), F_22 = -1 + s k(beta).
  std::array<double, 2> product_hessian(size_t k, double r, double s) const {
    return {1.0 - r * alpha.rho[i1[k]], -1.0 + s * beta.rho[i2[k]]};
  }
  static std::array<double, 2> rs_of_ab(double a, double b) { return {a - b, a}; }
  static std::array<double, 2> ab_of_rs(double r, double s) { return {s, s - r}; }
  /// x = phi + a xi + b eta in R^4.
  VecD point(size_t k, double a, double b) const {
    const Geometry& g = *fd.samples[k].geometry;
    return g.point + a * g.xi + b * g.eta;
  }
};

namespace detail {

inline curves::PlanarAffineCurve affine_curve(const curves::NamedCurve& c, int intervals, const ToleranceConfig& cfg) {
  const JetCurve raw = JetCurve::from_source(c.source, uniform_grid(c.t0, c.t1, intervals), 4);
  return curves::reparam_affine_planar(raw, cfg);
}

// alpha, alpha', alpha'', alpha''' at sample i in affine arc-length
inline std::array<VecD, 4> planar_jets(const curves::PlanarAffineCurve& c, size_t i) {
  SVec e = c.expansion(c.grid()[i], 4);
  if (c.reflected) e[1] = -1.0 * e[1];
  return {value_of(e), derivative_of(e, 1), derivative_of(e, 2), derivative_of(e, 3)};
}

// h-orthonormal frame of a Blaschke sample: f_* X_i, D_{X_i} f_* X_j (up to
// tangent terms) and D_{X_i} xi, in the coordinates of the hypersurface.
struct BlaschkeFrame {
  std::vector<VecD> df, dxi;
  std::vector<std::vector<VecD>> ddf;
};

inline BlaschkeFrame blaschke_frame(const blaschke::BlaschkeApparatus& b, size_t k) {
  const int n = b.n;
  const MatD x = umbilic::detail::orthonormal_frame(b.h[k]);
  std::vector<VecD> f1, xi1;
  std::vector<std::vector<VecD>> f2(static_cast<size_t>(n), std::vector<VecD>(static_cast<size_t>(n)));
  if (n == 1) {
    const auto& a = b.local1[k];
    f1.push_back(derivative_of(a.f, 1));
    f2[0][0] = derivative_of(a.f, 2);
    xi1.push_back(derivative_of(a.xi, 1));
  } else {
    const auto& a = b.local2[k];
    for (int i = 0; i < 2; ++i) {
      f1.push_back(value_of(d(a.f, i)));
      xi1.push_back(value_of(d(a.xi, i)));
      for (int j = 0; j < 2; ++j) f2[static_cast<size_t>(i)][static_cast<size_t>(j)] = value_of(d(d(a.f, i), j));
    }
  }
  const auto dim = f1.front().size();
  BlaschkeFrame r;
  r.df.assign(static_cast<size_t>(n), VecD::Zero(dim));
  r.dxi.assign(static_cast<size_t>(n), VecD::Zero(dim));
  r.ddf.assign(static_cast<size_t>(n), std::vector<VecD>(static_cast<size_t>(n), VecD::Zero(dim)));
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < n; ++a) {
      r.df[static_cast<size_t>(i)] += x(a, i) * f1[static_cast<size_t>(a)];
      r.dxi[static_cast<size_t>(i)] += x(a, i) * xi1[static_cast<size_t>(a)];
    }
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c)
          r.ddf[static_cast<size_t>(i)][static_cast<size_t>(j)] += x(a, i) * x(c, j) * f2[static_cast<size_t>(a)][static_cast<size_t>(c)];
  }
  return r;
}

inline VecD join(const VecD& x, const VecD& y) {
  VecD r(x.size() + y.size());
  r << x, y;
  return r;
}

}  // namespace detail

inline ProductFixture product_curves_fixture(const curves::NamedCurve& alpha, const curves::NamedCurve& beta,
                                             int intervals1, int intervals2, const ToleranceConfig& cfg = {}) {
  ProductFixture p;
  p.alpha = detail::affine_curve(alpha, intervals1, cfg);
  p.beta = detail::affine_curve(beta, intervals2, cfg);
  p.fd.n = 2;
  p.fd.source = "product_curves";
  const VecD z = VecD::Zero(2);
  for (size_t i = 0; i < p.alpha.size(); ++i) {
    const auto A = detail::planar_jets(p.alpha, i);
    for (size_t j = 0; j < p.beta.size(); ++j) {
      const auto B = detail::planar_jets(p.beta, j);
      MatD X(4, 2);
      X.col(0) = detail::join(A[1], z);
      X.col(1) = detail::join(z, B[1]);
      const VecD xi = detail::join(A[2], B[2]), eta = -detail::join(A[2], z);
      const std::vector<std::vector<VecD>> DX{{detail::join(A[2], z), VecD::Zero(4)},
                                              {VecD::Zero(4), detail::join(z, B[2])}};
      const std::vector<VecD> Dxi{detail::join(A[3], z), detail::join(z, B[3])};
      const std::vector<VecD> Deta{-detail::join(A[3], z), VecD::Zero(4)};
      FrameSample s = frame_sample(detail::join(A[0], B[0]), X, xi, eta, DX, Dxi, Deta);
      s.param = {p.alpha.grid()[i], p.beta.grid()[j]};
      // mu_1 = -k(alpha)
      s.x1_mu1 = -p.alpha.rho_prime[i];
      p.fd.samples.push_back(std::move(s));
      p.i1.push_back(i);
      p.i2.push_back(j);
    }
  }
  return p;
}

// ---- sections of hyperquadrics --------------------------------------------------

/// sum eps_i x_i^2 = 1 with <A, B> = sum eps_i A_i B_i.
struct QuadricSpace {
  VecD eps;

  double form(const VecD& x, const VecD& y) const { return (eps.array() * x.array() * y.array()).sum(); }
  VecD raise(const VecD& l) const { return (eps.array() * l.array()).matrix(); }  // <raise(l), v> = l . v
  int dim() const { return static_cast<int>(eps.size()); }
};

struct QuadricVerdict {
  FrameData fd;
  bool umbilic = false;
  double sigma_spread = 0.0, mu_spread = 0.0;
  double scalar_residual = 0.0;            // max off-scalar part of S1, S2
  double containment_residual = 0.0;       // max |<p, p> - 1|
  std::optional<std::array<VecD, 2>> focal_line;  // point, unit direction
  double focal_line_spread = 0.0;          // max distance of per-sample lines to focal_line
};

namespace detail {

// <,>-orthonormal basis of span(V) (columns) by Gram-Schmidt with signs.
inline MatD form_orthonormal(const QuadricSpace& q, MatD V, double tol) {
  for (Eigen::Index i = 0; i < V.cols(); ++i) {
    VecD v = V.col(i);
    for (Eigen::Index j = 0; j < i; ++j) {
      const VecD w = V.col(j);
      v -= q.form(v, w) / q.form(w, w) * w;
    }
    const double nn = q.form(v, v);
    if (!(std::abs(nn) > tol * v.squaredNorm())) {
      throw Error(ErrorKind::DegenerateTangent, "<v, v> vanishes on a tangent direction");
    }
    V.col(i) = v / std::sqrt(std::abs(nn));
  }
  return V;
}

inline double spread(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

// Umbilic verdict and common focal line from sampled frames.
inline void finish_verdict(QuadricVerdict& r, const ToleranceConfig& cfg) {
  std::vector<double> sig, mu;
  for (const auto& s : r.fd.samples) {
    const double sm = s.sigma.trace() / r.fd.n, mm = s.mu.mean();
    const auto n = s.sigma.rows();
    r.scalar_residual = std::max({r.scalar_residual, (s.sigma - sm * MatD::Identity(n, n)).cwiseAbs().maxCoeff(),
                                  (s.mu.array() - mm).abs().maxCoeff()});
    sig.push_back(sm);
    mu.push_back(mm);
  }
  r.sigma_spread = spread(sig);
  r.mu_spread = spread(mu);
  r.umbilic = r.scalar_residual < 1e-8 && r.sigma_spread < 1e-8 && r.mu_spread < 1e-8;
  if (!r.umbilic) return;
  // 1 - b mu - a sigma = 0 through (a, b) = (sigma, mu) / (sigma^2 + mu^2), direction (-mu, sigma)
  auto line_of = [](const FrameSample& s) -> std::optional<std::array<VecD, 2>> {
    const double a = s.sigma(0, 0), b = s.mu[0], w = a * a + b * b;
    if (w < 1e-24) return std::nullopt;
    const Geometry& g = *s.geometry;
    const VecD p = g.point + (a / w) * g.xi + (b / w) * g.eta;
    const VecD d = (-b * g.xi + a * g.eta).normalized();
    return std::array<VecD, 2>{p, d};
  };
  r.focal_line = line_of(r.fd.samples.front());
  if (!r.focal_line) return;
  const auto& [p0, d0] = *r.focal_line;
  auto dist = [&](const VecD& x) { const VecD w = x - p0; return (w - w.dot(d0) * d0).norm(); };
  for (const auto& s : r.fd.samples) {
    const auto l = line_of(s);
    if (!l) continue;
    r.focal_line_spread = std::max({r.focal_line_spread, dist((*l)[0]), dist((*l)[0] + (*l)[1])});
  }
  (void)cfg;
}

}  // namespace detail

/// N = {<x, x> = 1} cap {l . x = c}: xi the <,>-unit normal of N in M, eta = p.
inline QuadricVerdict quadric_section_fixture(const QuadricSpace& q, const VecD& l, double c, int samples,
                                              const ToleranceConfig& cfg = {}) {
  const int D = q.dim(), n = D - 2;
  if (n < 1 || l.size() != D) throw Error(ErrorKind::DimensionMismatch, "hyperplane and quadric dimensions differ");
  const VecD m = q.raise(l);
  const double mm = q.form(m, m);
  if (std::abs(mm) < cfg.tol_zero) throw Error(ErrorKind::DegenerateTangent, "hyperplane normal is null for the form");
  const VecD p0 = (c / mm) * m;
  // <m - c p, m - c p> = <m, m> - c^2 on the section
  if (std::abs(mm - c * c) < cfg.tol_zero)
    throw Error(ErrorKind::DegenerateTangent, "hyperplane is tangent to the quadric");
  // Euclidean basis of the directions of L
  Eigen::JacobiSVD<MatD> svd(l.transpose(), Eigen::ComputeFullV);
  const MatD E = svd.matrixV().rightCols(D - 1);
  QuadricVerdict r;
  r.fd.n = n;
  r.fd.source = "quadric_section";
  const double rhs = 1.0 - q.form(p0, p0);
  for (int k = 0; k < samples; ++k) {
    // deterministic directions on the unit sphere of L-directions
    VecD w(D - 1);
    const double t = 2.0 * std::numbers::pi * k / samples;
    if (D - 1 == 2) {
      w << std::cos(t), std::sin(t);
    } else {
      const double zc = 1.0 - 2.0 * (k + 0.5) / samples;  // spiral points
      const double rr = std::sqrt(std::max(0.0, 1.0 - zc * zc));
      const double ph = k * std::numbers::pi * (3.0 - std::sqrt(5.0));
      w = VecD::Zero(D - 1);
      w[0] = rr * std::cos(ph);
      w[1] = rr * std::sin(ph);
      w[2] = zc;
      for (Eigen::Index i = 3; i < w.size(); ++i) w[i] = 0.3 * std::sin((i + 1) * ph);
      w.normalize();
    }
    const VecD v = E * w;
    const double vv = q.form(v, v);
    if (!(rhs / vv > 0)) continue;
    const VecD p = p0 + std::sqrt(rhs / vv) * v;
    r.containment_residual = std::max(r.containment_residual, std::abs(q.form(p, p) - 1.0));
    // tangent space of N: l . v = 0 and <p, v> = 0
    MatD C(2, D);
    C.row(0) = l.transpose();
    C.row(1) = q.raise(p).transpose();
    Eigen::FullPivLU<MatD> lu(C);
    const MatD X = detail::form_orthonormal(q, lu.kernel(), cfg.tol_zero);
    VecD xi = m - c * p;  // <m, p> = l . p = c
    const double ss = q.form(xi, xi);
    if (!(std::abs(ss) > cfg.tol_zero)) throw Error(ErrorKind::DegenerateTangent, "Darboux direction is null");
    const double s = std::sqrt(std::abs(ss));
    xi /= s;
    // second fundamental form of N: normal part of D_X Y is -<X, Y>(p + beta xi)
    const double beta = -c / q.form(m, xi);
    std::vector<std::vector<VecD>> DX(static_cast<size_t>(n), std::vector<VecD>(static_cast<size_t>(n)));
    std::vector<VecD> Dxi, Deta;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) DX[static_cast<size_t>(i)][static_cast<size_t>(j)] = -q.form(X.col(i), X.col(j)) * (p + beta * xi);
      // D_X xi = (-<m, X> p - c X) / s with <m, X> = 0
      Dxi.push_back(-(q.form(m, X.col(i)) * p + c * X.col(i)) / s);
      Deta.push_back(X.col(i));
    }
    FrameSample fs = frame_sample(p, X, xi, p, DX, Dxi, Deta);
    fs.param = {static_cast<double>(k), 0.0};
    r.fd.samples.push_back(std::move(fs));
  }
  if (r.fd.samples.empty()) throw Error(ErrorKind::EmptySection, "hyperplane misses the quadric");
  detail::finish_verdict(r, cfg);
  return r;
}

/// A curve on the quadric {<x, x> = 1} in R^3 (need not be planar).
inline QuadricVerdict quadric_curve_fixture(const QuadricSpace& q, const curves::NamedCurve& c, int intervals,
                                            const ToleranceConfig& cfg = {}) {
  if (q.dim() != 3 || c.source->dim() != 3) throw Error(ErrorKind::DimensionMismatch, "curve sections live in R^3");
  QuadricVerdict r;
  r.fd.n = 1;
  r.fd.source = "quadric_curve";
  const auto grid = uniform_grid(c.t0, c.t1, intervals);
  const size_t count = c.periodic ? grid.size() - 1 : grid.size();
  const Eigen::Array3d e = q.eps.array();
  for (size_t k = 0; k < count; ++k) {
    const SVec p = c.source->taylor(grid[k], 4);
    const SVec p1 = d(p);
    // speed w.r.t. the form and the unit tangent as series
    Series ff(p1[0].order(), 0.0);
    for (int i = 0; i < 3; ++i) ff = ff + e[i] * p1[i] * p1[i];
    if (!(std::abs(ff.value()) > cfg.tol_zero)) throw PointError(ErrorKind::DegenerateTangent, grid[k], "<v, v> vanishes");
    const double sg = ff.value() < 0 ? -1.0 : 1.0;
    const Series inv = pow(sg * ff, -0.5);
    SVec X;
    for (int i = 0; i < 3; ++i) X.push_back(p1[i] * inv);
    const SVec pt = truncated(p, min_order(X));
    // xi = E (p x X) normalized for the form
    SVec w{pt[1] * X[2] - pt[2] * X[1], pt[2] * X[0] - pt[0] * X[2], pt[0] * X[1] - pt[1] * X[0]};
    for (int i = 0; i < 3; ++i) w[i] = e[i] * w[i];
    Series ww(w[0].order(), 0.0);
    for (int i = 0; i < 3; ++i) ww = ww + e[i] * w[i] * w[i];
    if (!(std::abs(ww.value()) > cfg.tol_zero)) throw PointError(ErrorKind::DegenerateTangent, grid[k], "Darboux direction is null");
    const Series winv = pow((ww.value() < 0 ? -1.0 : 1.0) * ww, -0.5);
    SVec xi;
    for (int i = 0; i < 3; ++i) xi.push_back(w[i] * winv);
    const double scale = inv.value();  // d/ds = scale d/dt along the curve
    MatD Xm(3, 1);
    Xm.col(0) = value_of(X);
    const VecD pv = value_of(p);
    r.containment_residual = std::max(r.containment_residual, std::abs(q.form(pv, pv) - 1.0));
    FrameSample fs = frame_sample(pv, Xm, value_of(xi), pv, {{scale * derivative_of(X, 1)}},
                                  {scale * derivative_of(xi, 1)}, {value_of(X)});
    fs.param = {grid[k], 0.0};
    r.fd.samples.push_back(std::move(fs));
  }
  if (r.containment_residual > cfg.tol_residual) throw Error(ErrorKind::Containment, "curve leaves the quadric");
  detail::finish_verdict(r, cfg);
  return r;
}

// ---- hyperplane sections of cones -----------------------------------------------

/// An affine hyperplane L = origin + span(E) in R^{n+2}.
struct Hyperplane {
  VecD origin;
  MatD E;  // (n + 2) x (n + 1), columns span L

  VecD normal() const {
    Eigen::JacobiSVD<MatD> svd(E.transpose(), Eigen::ComputeFullV);
    VecD nrm = svd.matrixV().col(E.rows() - 1);
    MatD m(E.rows(), E.rows());
    m << E, nrm;
    return m.determinant() < 0 ? VecD(-nrm) : nrm;
  }
  static Hyperplane coordinate(int dim, double height) {
    Hyperplane h;
    h.origin = VecD::Zero(dim);
    h.origin[dim - 1] = height;
    h.E = MatD::Identity(dim, dim - 1);
    return h;
  }
};

struct HyperplaneVerdict {
  FrameData fd;
  bool umbilic = false;                  // delegated to the affine-sphere test of N in L
  bool frame_umbilic = false;            // S1, S2 scalar at every sample
  double scalar_residual = 0.0;
  std::optional<VecD> sphere_center;     // in L coordinates
  std::optional<std::array<VecD, 2>> focal_line;
  double focal_line_spread = 0.0;
};

/// M the cone over N in L with the given apex; xi = (p - apex) / ((p - apex) . n)
/// and eta the Blaschke normal of N in L.
inline HyperplaneVerdict hyperplane_section_fixture(const Hyperplane& L, const blaschke::Hypersurface& N,
                                                    const VecD& apex, int intervals, const ToleranceConfig& cfg = {}) {
  const int n = N.n, D = n + 2;
  if (L.E.rows() != D || L.E.cols() != n + 1 || apex.size() != D) {
    throw Error(ErrorKind::DimensionMismatch, "hyperplane, hypersurface and apex dimensions differ");
  }
  const VecD nl = L.normal();
  const double k = (L.origin - apex).dot(nl);
  if (std::abs(k) < cfg.tol_zero) throw Error(ErrorKind::ApexOnHyperplane, "apex lies on the hyperplane");
  const blaschke::BlaschkeApparatus b = blaschke::blaschke_apparatus(N, intervals, cfg);
  HyperplaneVerdict r;
  r.fd.n = n;
  r.fd.source = "hyperplane_section";
  const size_t count = b.periodic && n == 1 ? b.size() - 1 : b.size();
  for (size_t s = 0; s < count; ++s) {
    const detail::BlaschkeFrame fr = detail::blaschke_frame(b, s);
    const VecD p = L.origin + L.E * b.f[s];
    MatD X(D, n);
    std::vector<std::vector<VecD>> DX(static_cast<size_t>(n), std::vector<VecD>(static_cast<size_t>(n)));
    std::vector<VecD> Dxi, Deta;
    for (int i = 0; i < n; ++i) {
      X.col(i) = L.E * fr.df[static_cast<size_t>(i)];
      for (int j = 0; j < n; ++j) DX[static_cast<size_t>(i)][static_cast<size_t>(j)] = L.E * fr.ddf[static_cast<size_t>(i)][static_cast<size_t>(j)];
      Dxi.push_back(X.col(i) / k);
      Deta.push_back(L.E * fr.dxi[static_cast<size_t>(i)]);
    }
    FrameSample fs = frame_sample(p, X, (p - apex) / k, L.E * b.xi[s], DX, Dxi, Deta);
    fs.param = b.params[s];
    r.fd.samples.push_back(std::move(fs));
  }
  QuadricVerdict tmp;
  tmp.fd = r.fd;
  detail::finish_verdict(tmp, cfg);
  r.scalar_residual = tmp.scalar_residual;
  r.frame_umbilic = tmp.scalar_residual < cfg.tol_residual && tmp.sigma_spread < cfg.tol_residual &&
                    tmp.mu_spread < cfg.tol_residual;
  const auto sphere = blaschke::is_proper_affine_sphere(b, cfg);
  r.umbilic = sphere.has_value();
  if (sphere) r.sphere_center = sphere->center;
  // focal line through the first sample's umbilic point
  const FrameSample& s0 = r.fd.samples.front();
  const double a = s0.sigma(0, 0), bb = s0.mu[0], w = a * a + bb * bb;
  if (r.umbilic && w > 1e-24) {
    const Geometry& g = *s0.geometry;
    const VecD p = g.point + (a / w) * g.xi + (bb / w) * g.eta;
    const VecD dir = (-bb * g.xi + a * g.eta).normalized();
    r.focal_line = std::array<VecD, 2>{p, dir};
    for (const auto& fs : r.fd.samples) {
      const Geometry& gg = *fs.geometry;
      const double aa = fs.sigma(0, 0), mb = fs.mu[0], ww = aa * aa + mb * mb;
      const VecD x = gg.point + (aa / ww) * gg.xi + (mb / ww) * gg.eta - p;
      r.focal_line_spread = std::max(r.focal_line_spread, (x - x.dot(dir) * dir).norm());
    }
  }
  return r;
}

// ---- conversions ------------------------------------------------------------------

/// n = 1 frame data of a completed Darboux frame; u is the g-arc-length.
inline FrameData frame_data_from_darboux(const darboux::DarbouxFrame& f) {
  if (!f.completed) throw Error(ErrorKind::InvalidConfig, "Darboux frame has no eta");
  FrameData fd;
  fd.n = 1;
  fd.source = "darboux";
  const size_t count = f.periodic ? f.size() - 1 : f.size();
  for (size_t k = 0; k < count; ++k) {
    MatD X(3, 1);
    X.col(0) = derivative_of(f.phi[k], 1);
    FrameSample s = frame_sample(value_of(f.phi[k]), X, value_of(f.xi[k]), value_of(f.eta[k]),
                                 {{derivative_of(f.phi[k], 2)}}, {derivative_of(f.xi[k], 1)},
                                 {derivative_of(f.eta[k], 1)});
    s.param = {f.grid[k], 0.0};
    s.x1_mu1 = f.mu[k].derivative(1);
    fd.samples.push_back(std::move(s));
  }
  return fd;
}

/// Frame data of phi = (nu, z): xi = phi, eta = -Q.
inline FrameData frame_data_from_umbilic(const umbilic::UmbilicImmersion& m) {
  if (!m.source) throw Error(ErrorKind::InvalidConfig, "immersion has no source apparatus");
  const blaschke::BlaschkeApparatus& b = *m.source;
  const int n = m.n, D = n + 2;
  FrameData fd;
  fd.n = n;
  fd.source = "umbilic";
  const size_t count = b.periodic && n == 1 ? m.size() - 1 : m.size();
  for (size_t k = 0; k < count; ++k) {
    const MatD x = umbilic::detail::orthonormal_frame(b.h[k]);
    std::vector<VecD> d1;
    std::vector<std::vector<VecD>> d2(static_cast<size_t>(n), std::vector<VecD>(static_cast<size_t>(n)));
    if (n == 1) {
      d1.push_back(derivative_of(m.phi1[k], 1));
      d2[0][0] = derivative_of(m.phi1[k], 2);
    } else {
      for (int i = 0; i < 2; ++i) {
        d1.push_back(value_of(d(m.phi2[k], i)));
        for (int j = 0; j < 2; ++j) d2[static_cast<size_t>(i)][static_cast<size_t>(j)] = value_of(d(d(m.phi2[k], i), j));
      }
    }
    MatD X = MatD::Zero(D, n);
    std::vector<std::vector<VecD>> DX(static_cast<size_t>(n), std::vector<VecD>(static_cast<size_t>(n), VecD::Zero(D)));
    for (int i = 0; i < n; ++i)
      for (int a = 0; a < n; ++a) X.col(i) += x(a, i) * d1[static_cast<size_t>(a)];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int a = 0; a < n; ++a)
          for (int c = 0; c < n; ++c) DX[static_cast<size_t>(i)][static_cast<size_t>(j)] += x(a, i) * x(c, j) * d2[static_cast<size_t>(a)][static_cast<size_t>(c)];
    std::vector<VecD> Dxi, Deta;
    for (int i = 0; i < n; ++i) {
      Dxi.push_back(X.col(i));
      Deta.push_back(VecD::Zero(D));
    }
    FrameSample s = frame_sample(m.phi[k], X, m.phi[k], -m.Q(), DX, Dxi, Deta);
    s.param = m.params[k];
    fd.samples.push_back(std::move(s));
  }
  return fd;
}

// ---- envelope of tangent spaces --------------------------------------------------

struct Envelope {
  std::vector<VecD> points;     // p + t xi over the t range
  std::vector<VecD> marks;      // p + xi / sigma_k for nonzero eigenvalues of S1
  std::vector<size_t> mark_sample;
};

inline Envelope envelope_tangent_spaces(const FrameData& fd, double t0, double t1, int t_samples,
                                        const ToleranceConfig& cfg = {}) {
  Envelope e;
  for (size_t k = 0; k < fd.size(); ++k) {
    const FrameSample& s = fd.samples[k];
    if (!s.geometry) throw Error(ErrorKind::InvalidConfig, "frame data has no ambient geometry");
    const Geometry& g = *s.geometry;
    for (int i = 0; i < t_samples; ++i) {
      const double t = t_samples == 1 ? t0 : t0 + (t1 - t0) * i / (t_samples - 1);
      e.points.push_back(g.point + t * g.xi);
    }
    Eigen::EigenSolver<MatD> es(s.sigma, false);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      const auto z = es.eigenvalues()[i];
      if (std::abs(z.imag()) > cfg.tol_zero || std::abs(z.real()) < cfg.tol_zero) continue;
      e.marks.push_back(g.point + g.xi / z.real());
      e.mark_sample.push_back(k);
    }
  }
  return e;
}

}  // namespace afocal::focal
