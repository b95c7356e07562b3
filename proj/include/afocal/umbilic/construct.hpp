#pragma once

// Umbilic, normally flat immersions phi = (nu, nu . (f - O)) built from the
// Blaschke co-normal of a hypersurface f, and the converse reconstruction of
// (f, O) from phi = (psi, z).

#include <cmath>
#include <optional>
#include <vector>

#include <Eigen/SVD>

#include "afocal/blaschke/apparatus.hpp"

namespace afocal::umbilic {

using blaschke::BlaschkeApparatus;

struct UmbilicImmersion {
  int n = 1;
  VecD O_used;
  std::vector<std::array<double, 2>> params;
  std::vector<SVec> phi1;        // n = 1: local series in affine arc-length
  std::vector<SVec2> phi2;       // n = 2: local bivariate series
  std::vector<VecD> phi;         // sample values, dimension n + 2
  const BlaschkeApparatus* source = nullptr;
  bool low_confidence = false;
  double frame_det_residual = 0.0;  // max |[phi_* X, phi, Q] + 1|, X h-orthonormal and oriented
  double normal_plane_residual = 0.0;  // D_X phi_* Y off span(phi_* TM, phi, Q)
  double metric_residual = 0.0;     // max |h2 - h| entrywise, h2(X, Y) = -psi_* Y . f_* X

  VecD Q() const {
    VecD q = VecD::Zero(n + 2);
    q[n + 1] = 1.0;
    return q;
  }
  size_t size() const { return phi.size(); }
};

namespace detail {

inline SVec append(const SVec& nu, const Series& z) {
  SVec r = nu;
  r.push_back(z);
  return r;
}

/// h-orthonormal frame (columns, coordinate components).
inline MatD orthonormal_frame(const MatD& h) {
  Eigen::SelfAdjointEigenSolver<MatD> es(h);
  return es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal();
}

// Frame determinant after orienting X_1 so that it is negative.
inline double oriented_det(double det) { return -std::abs(det); }

inline double off_span(const VecD& w, const std::vector<VecD>& span) {
  MatD a(w.size(), static_cast<Eigen::Index>(span.size()));
  for (size_t i = 0; i < span.size(); ++i) a.col(static_cast<Eigen::Index>(i)) = span[i];
  const VecD c = a.colPivHouseholderQr().solve(w);
  return (a * c - w).norm();
}

/// Determinant of the (n+2) x (n+2) matrix with columns v.
inline double det_of(const std::vector<VecD>& v) {
  MatD m(v.front().size(), v.size());
  for (size_t i = 0; i < v.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = v[i];
  return m.determinant();
}

}  // namespace detail

/// phi = (nu, nu . (f - O)).
inline UmbilicImmersion construct_umbilic(const BlaschkeApparatus& b, const VecD& O) {
  if (O.size() != b.n + 1) throw Error(ErrorKind::DimensionMismatch, "origin must have dimension n + 1");
  UmbilicImmersion m;
  m.n = b.n;
  m.O_used = O;
  m.params = b.params;
  m.source = &b;
  m.low_confidence = b.low_confidence;
  for (size_t k = 0; k < b.size(); ++k) {
    std::vector<VecD> dphi;  // phi_* of coordinate vectors
    std::vector<VecD> ddphi;
    MatD h2(b.n, b.n);
    if (b.n == 1) {
      const auto& a = b.local1[k];
      SVec rel = a.f;
      for (int i = 0; i < 2; ++i) rel[i] -= O[i];
      const int q = min_order(a.nu);
      const SVec phi = detail::append(a.nu, dot(a.nu, truncated(rel, q)));
      m.phi1.push_back(phi);
      m.phi.push_back(value_of(phi));
      dphi.push_back(derivative_of(phi, 1));
      ddphi.push_back(derivative_of(phi, 2));
      h2(0, 0) = -derivative_of(a.nu, 1).dot(derivative_of(a.f, 1));
    } else {
      const auto& a = b.local2[k];
      SVec2 rel = a.f;
      for (int i = 0; i < 3; ++i) rel[i] -= O[i];
      const int q = blaschke::min_order2(a.nu);
      SVec2 phi = a.nu;
      phi.push_back(dot(a.nu, blaschke::truncated2(rel, q)));
      m.phi2.push_back(phi);
      m.phi.push_back(value_of(phi));
      for (int i = 0; i < 2; ++i) dphi.push_back(value_of(d(phi, i)));
      for (int i = 0; i < 2; ++i)
        for (int j = i; j < 2; ++j) ddphi.push_back(value_of(d(d(phi, i), j)));
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) h2(i, j) = -value_of(d(a.nu, j)).dot(value_of(d(a.f, i)));
    }
    m.metric_residual = std::max(m.metric_residual, (h2 - b.h[k]).cwiseAbs().maxCoeff());
    const MatD x = detail::orthonormal_frame(b.h[k]);
    std::vector<VecD> cols;
    for (int i = 0; i < b.n; ++i) {
      VecD v = VecD::Zero(b.n + 2);
      for (int j = 0; j < b.n; ++j) v += x(j, i) * dphi[j];
      cols.push_back(v);
    }
    cols.push_back(m.phi.back());
    cols.push_back(m.Q());
    m.frame_det_residual =
        std::max(m.frame_det_residual, std::abs(detail::oriented_det(detail::det_of(cols)) + 1.0));
    std::vector<VecD> span = dphi;
    span.push_back(m.phi.back());
    span.push_back(m.Q());
    for (const VecD& w : ddphi) m.normal_plane_residual = std::max(m.normal_plane_residual, detail::off_span(w, span));
  }
  return m;
}

/// sup |(1/n) Lap_h phi + H phi + Q|.
inline double verify_laplacian_identity(const UmbilicImmersion& m) {
  if (!m.source) throw Error(ErrorKind::InvalidConfig, "immersion has no source apparatus");
  const BlaschkeApparatus& b = *m.source;
  const std::vector<VecD> lap = m.n == 1 ? blaschke::laplacian_of(b, m.phi1) : blaschke::laplacian_of(b, m.phi2);
  double r = 0.0;
  for (size_t k = 0; k < m.size(); ++k) {
    r = std::max(r, (lap[k] / m.n + b.H[k] * m.phi[k] + m.Q()).norm());
  }
  return r;
}

struct Hyperplane {
  VecD normal;   // unit
  double offset;  // normal . x = offset
};

struct HyperplaneFit {
  /// Fit by a hyperplane transversal to Q, z = a . psi + c; this is the
  /// hyperplane for which z becomes constant after moving O.
  std::optional<Hyperplane> hyperplane;
  double residual = 0.0;
  /// Unrestricted total-least-squares fit over all hyperplanes.
  Hyperplane best_any;
  double residual_any = 0.0;
  bool any_contains_Q = false;   // best_any is parallel to Q (improper case)
  double threshold = 0.0;
};

inline double plane_threshold(bool low_confidence) { return low_confidence ? 1e-5 : 1e-8; }

inline HyperplaneFit hyperplanarity_test(const UmbilicImmersion& m) {
  const int d = m.n + 2;
  const auto N = static_cast<Eigen::Index>(m.size());
  HyperplaneFit fit;
  fit.threshold = plane_threshold(m.low_confidence);
  VecD mean = VecD::Zero(d);
  for (const VecD& p : m.phi) mean += p;
  mean /= static_cast<double>(N);
  MatD X(N, d);
  for (Eigen::Index k = 0; k < N; ++k) X.row(k) = (m.phi[static_cast<size_t>(k)] - mean).transpose();
  Eigen::JacobiSVD<MatD> svd(X, Eigen::ComputeThinV);
  const VecD nrm = svd.matrixV().col(d - 1);
  fit.best_any = {nrm, nrm.dot(mean)};
  for (const VecD& p : m.phi) fit.residual_any = std::max(fit.residual_any, std::abs(nrm.dot(p) - fit.best_any.offset));
  fit.any_contains_Q = std::abs(nrm[d - 1]) < 1e-8;
  // z = a . psi + c by least squares
  MatD A(N, d);
  VecD z(N);
  for (Eigen::Index k = 0; k < N; ++k) {
    const VecD& p = m.phi[static_cast<size_t>(k)];
    A.row(k).head(d - 1) = p.head(d - 1).transpose();
    A(k, d - 1) = 1.0;
    z[k] = p[d - 1];
  }
  const VecD coef = A.colPivHouseholderQr().solve(z);
  for (Eigen::Index k = 0; k < N; ++k) fit.residual = std::max(fit.residual, std::abs(A.row(k).dot(coef) - z[k]));
  if (fit.residual < fit.threshold) {
    VecD n(d);
    n.head(d - 1) = -coef.head(d - 1);
    n[d - 1] = 1.0;
    const double s = n.norm();
    fit.hyperplane = Hyperplane{n / s, coef[d - 1] / s};
  }
  return fit;
}

struct Reconstruction {
  int n = 1;
  VecD O;
  std::vector<VecD> f;              // recovered f(u) per sample
  double lambda_residual = 0.0;     // max |lambda - 1| where psi = lambda nu(f)
  double frame_det_residual = 0.0;  // max |[nu_* X, nu] + 1|, X h-orthonormal for f and oriented
};

namespace detail {

// Cramer solve of M x = r for series entries; M given by rows.
template <class S>
std::vector<S> cramer(const std::vector<std::vector<S>>& rows, const std::vector<S>& r) {
  const size_t d = rows.size();
  std::vector<std::vector<S>> cols(d, std::vector<S>(d));
  for (size_t i = 0; i < d; ++i)
    for (size_t j = 0; j < d; ++j) cols[j][i] = rows[i][j];
  const S det = det_cols(cols);
  std::vector<S> x;
  for (size_t j = 0; j < d; ++j) {
    auto c = cols;
    c[j] = r;
    x.push_back(det_cols(c) / det);
  }
  return x;
}

}  // namespace detail

/// n = 1: psi . (f - O) = z, psi' . (f - O) = z' per sample of a curve
/// phi(u) = (psi, z) in R^3.
inline Reconstruction inverse_construction(const CurvePtr& phi, const std::vector<double>& grid,
                                           const VecD& O, const ToleranceConfig& cfg) {
  if (phi->dim() != 3) throw Error(ErrorKind::DimensionMismatch, "phi must have dimension 3 for n = 1");
  if (O.size() != 2) throw Error(ErrorKind::DimensionMismatch, "origin must be planar");
  Reconstruction r;
  r.n = 1;
  r.O = O;
  const int order = std::min(blaschke::kPatchOrder + 3, phi->max_order());
  for (double u : grid) {
    const SVec p = phi->taylor(u, order);
    const SVec dp = d(p);
    const int q = min_order(dp);
    const SVec psi{p[0].truncated(q), p[1].truncated(q)}, dpsi{dp[0], dp[1]};
    const double det = det2(value_of(psi), value_of(dpsi));
    if (!(std::abs(det) >= cfg.tol_zero * std::max(1.0, value_of(psi).squaredNorm()))) {
      throw PointError(ErrorKind::SingularSystem, u, "psi and psi' are dependent");
    }
    SVec f = detail::cramer<Series>({psi, dpsi}, {p[2].truncated(q), dp[2]});
    f[0] += O[0];
    f[1] += O[1];
    r.f.push_back(value_of(f));
    const blaschke::Local1 a = blaschke::local_apparatus(f, u, cfg);
    // psi = lambda nu; nu . xi = 1 gives lambda = psi . xi
    const double lambda = value_of(psi).dot(value_of(a.xi));
    r.lambda_residual = std::max(r.lambda_residual, std::abs(lambda - 1.0));
    const double x = 1.0 / std::sqrt(a.h.value());
    const double dt = det2(x * derivative_of(a.nu, 1), value_of(a.nu));
    r.frame_det_residual = std::max(r.frame_det_residual, std::abs(detail::oriented_det(dt) + 1.0));
  }
  return r;
}

/// n = 2: the 3 x 3 system with rows psi, psi_u, psi_v at each sample of
/// phi = (psi, z) given by local bivariate expansions.
inline Reconstruction inverse_construction(const std::vector<SVec2>& phi,
                                           const std::vector<std::array<double, 2>>& params,
                                           const VecD& O, const ToleranceConfig& cfg) {
  if (O.size() != 3) throw Error(ErrorKind::DimensionMismatch, "origin must have dimension 3");
  Reconstruction r;
  r.n = 2;
  r.O = O;
  for (size_t k = 0; k < phi.size(); ++k) {
    const SVec2& p = phi[k];
    if (p.size() != 4) throw Error(ErrorKind::DimensionMismatch, "phi must have dimension 4 for n = 2");
    const SVec2 pu = d(p, 0), pv = d(p, 1);
    const int q = blaschke::min_order2(pu);
    const SVec2 psi{p[0].truncated(q), p[1].truncated(q), p[2].truncated(q)};
    const SVec2 psu{pu[0], pu[1], pu[2]}, psv{pv[0], pv[1], pv[2]};
    const double det = det3(value_of(psi), value_of(psu), value_of(psv));
    if (!(std::abs(det) >= cfg.tol_zero * std::max(1.0, std::pow(value_of(psi).norm(), 3)))) {
      throw PointError(ErrorKind::SingularSystem, params[k][0], "psi, psi_u, psi_v are dependent");
    }
    SVec2 f = detail::cramer<Series2>({psi, psu, psv}, {p[3].truncated(q), pu[3], pv[3]});
    for (int i = 0; i < 3; ++i) f[i] += O[i];
    r.f.push_back(value_of(f));
    const blaschke::Local2 a = blaschke::local_apparatus(f, params[k][0], params[k][1], cfg);
    const double lambda = value_of(psi).dot(value_of(a.xi));
    r.lambda_residual = std::max(r.lambda_residual, std::abs(lambda - 1.0));
    MatD hm(2, 2);
    hm << a.h.h11.value(), a.h.h12.value(), a.h.h12.value(), a.h.h22.value();
    const MatD x = detail::orthonormal_frame(hm);
    const VecD nu = value_of(a.nu), nu_u = value_of(d(a.nu, 0)), nu_v = value_of(d(a.nu, 1));
    const VecD x1 = x(0, 0) * nu_u + x(1, 0) * nu_v, x2 = x(0, 1) * nu_u + x(1, 1) * nu_v;
    r.frame_det_residual = std::max(r.frame_det_residual, std::abs(detail::oriented_det(det3(x1, x2, nu)) + 1.0));
  }
  return r;
}

/// Convenience: reconstruct from an immersion's own series.
inline Reconstruction inverse_construction(const UmbilicImmersion& m, const VecD& O,
                                           const ToleranceConfig& cfg) {
  if (m.n == 2) return inverse_construction(m.phi2, m.params, O, cfg);
  std::vector<double> grid;
  for (const auto& p : m.params) grid.push_back(p[0]);
  auto src = std::make_shared<GridSeriesCurve>(grid, m.phi1, min_order(m.phi1.front()));
  return inverse_construction(src, grid, O, cfg);
}

}  // namespace afocal::umbilic
