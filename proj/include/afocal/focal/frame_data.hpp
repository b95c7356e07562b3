#pragma once

// Shape-operator data of a codimension-2 immersion N in a hypersurface M,
// sampled over a parameter grid, and the per-sample focal polynomial
// q(a, b) = det(I - b S2 - a S1) for focal points x = phi + a xi + b eta.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "afocal/focal/polynomial.hpp"
#include "afocal/numkit/tolerance.hpp"
#include "afocal/numkit/vec.hpp"

namespace afocal::focal {

/// Ambient frame at a sample: tangent basis columns X, point, normal pair.
struct Geometry {
  VecD point, xi, eta;
  MatD X;  // (n + 2) x n
};

struct FrameSample {
  std::array<double, 2> param{0.0, 0.0};
  MatD h1;          // xi-component of D_{X_i} X_j
  VecD mu;          // eigenvalues of S2, X_k the eigenbasis
  MatD sigma;       // S1 in the same basis
  VecD signature;   // g(X_k, X_k) = +-1
  double orthonormality_residual = 0.0;  // max |g - diag(signature)|
  double frame_det = 1.0;                // [X_1, .., X_n, xi, eta]
  double parallel_residual = 0.0;        // normal parts of D xi, D eta
  std::optional<double> x1_mu1;          // X_1(mu_1) when the fixture knows it
  std::optional<Geometry> geometry;
};

struct FrameData {
  int n = 1;
  std::string source;
  bool eta_parallel = true;
  std::vector<FrameSample> samples;

  size_t size() const { return samples.size(); }
};

/// Assemble a sample from ambient vectors: X (columns), xi, eta, and the
/// derivatives DX[i][j] = D_{X_i} X_j, Dxi[k] = D_{X_k} xi, Deta[k] = D_{X_k} eta.
/// S1, S2 are read from D xi = -S1 X, D eta = -S2 X; g from
/// [X_1, .., X_n, D_{X_i} X_j, xi]. When S2 is not diagonal and g is definite
/// the basis is rotated to its eigenbasis.
inline FrameSample frame_sample(const VecD& point, const MatD& X, const VecD& xi, const VecD& eta,
                                const std::vector<std::vector<VecD>>& DX, const std::vector<VecD>& Dxi,
                                const std::vector<VecD>& Deta) {
  const auto n = X.cols();
  const auto D = X.rows();
  if (D != n + 2) throw Error(ErrorKind::DimensionMismatch, "frame must have n + 2 ambient dimensions");
  MatD B(D, D);
  B.leftCols(n) = X;
  B.col(n) = xi;
  B.col(n + 1) = eta;
  const Eigen::FullPivLU<MatD> lu(B);
  if (!lu.isInvertible()) throw Error(ErrorKind::SingularSystem, "tangent frame, xi, eta are dependent");
  FrameSample s;
  s.frame_det = B.determinant();
  MatD g(n, n), h1(n, n), S1(n, n), S2(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      MatD m(D, D);
      m.leftCols(n) = X;
      m.col(n) = DX[static_cast<size_t>(i)][static_cast<size_t>(j)];
      m.col(n + 1) = xi;
      g(i, j) = m.determinant();
      h1(i, j) = lu.solve(DX[static_cast<size_t>(i)][static_cast<size_t>(j)])[n];
    }
    const VecD cx = lu.solve(Dxi[static_cast<size_t>(i)]), ce = lu.solve(Deta[static_cast<size_t>(i)]);
    // row i of S in the convention S X_i = sum_j S_ij X_j
    for (Eigen::Index j = 0; j < n; ++j) {
      S1(i, j) = -cx[j];
      S2(i, j) = -ce[j];
    }
    s.parallel_residual = std::max({s.parallel_residual, cx.tail(2).norm(), ce.tail(2).norm()});
  }
  s.signature = VecD(n);
  for (Eigen::Index k = 0; k < n; ++k) s.signature[k] = g(k, k) < 0 ? -1.0 : 1.0;
  MatD R = MatD::Identity(n, n);
  const double off = (S2 - MatD(S2.diagonal().asDiagonal())).norm();
  if (off > 1e-12 && (s.signature.array() > 0).all()) {
    Eigen::SelfAdjointEigenSolver<MatD> es(0.5 * (S2 + S2.transpose()));
    R = es.eigenvectors();
  }
  // S1(k, l) is the X_l-coefficient of S1 X_k; for X' = X R with R orthogonal
  // this row form transforms as R^T S R as well
  s.sigma = R.transpose() * S1 * R;
  s.mu = (R.transpose() * S2 * R).diagonal();
  s.h1 = R.transpose() * h1 * R;
  const MatD gr = R.transpose() * g * R;
  s.orthonormality_residual = (gr - MatD(s.signature.asDiagonal())).cwiseAbs().maxCoeff();
  Geometry geo{point, xi, eta, X * R};
  s.geometry = geo;
  return s;
}

struct LineFactor {
  double sigma = 0.0, mu = 0.0;  // 1 - b mu - a sigma
  int multiplicity = 1;
};

struct BifurcationLocus {
  Poly2 q;                         // normalized: q(0, 0) = 1
  int signature_sign = 1;          // det D^2 Delta = signature_sign * q
  std::vector<LineFactor> factors; // when the shape operators commute
  double factor_residual = 0.0;    // coefficientwise |q - prod of lines|
};

namespace detail {

// Common eigenbasis of commuting S1, S2 via a generic combination.
inline std::vector<LineFactor> joint_lines(const MatD& sigma, const VecD& mu, double tol) {
  const auto n = sigma.rows();
  const MatD S2 = mu.asDiagonal();
  const MatD M = sigma + 0.7548776662466927 * S2;
  Eigen::EigenSolver<MatD> es(M);
  std::vector<LineFactor> out;
  for (Eigen::Index k = 0; k < n; ++k) {
    const VecD v = es.eigenvectors().col(k).real();
    const double vv = v.squaredNorm();
    LineFactor f{v.dot(sigma * v) / vv, v.dot(S2 * v) / vv, 1};
    bool merged = false;
    for (auto& o : out) {
      if (std::abs(o.sigma - f.sigma) < tol && std::abs(o.mu - f.mu) < tol) {
        ++o.multiplicity;
        merged = true;
        break;
      }
    }
    if (!merged) out.push_back(f);
  }
  return out;
}

inline Poly2 line_poly(const LineFactor& f) {
  return Poly2(1) - to_rational(f.mu) * Poly2::b() - to_rational(f.sigma) * Poly2::a();
}

}  // namespace detail

inline double commutator_norm(const FrameSample& s) {
  const MatD S2 = s.mu.asDiagonal();
  return (s.sigma * S2 - S2 * s.sigma).norm();
}

/// q(a, b) with diagonal 1 - b mu_k - a sigma_kk and off-diagonal -a sigma_kl,
/// exact over rationals rounded from the sample values.
inline BifurcationLocus bifurcation_polynomial(const FrameData& fd, size_t k, const ToleranceConfig& cfg = {}) {
  const FrameSample& s = fd.samples.at(k);
  const auto n = static_cast<size_t>(fd.n);
  std::vector<std::vector<Poly2>> m(n, std::vector<Poly2>(n));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
      m[i][j] = -(to_rational(s.sigma(ii, jj)) * Poly2::a());
      if (i == j) m[i][j] += Poly2(1) - to_rational(s.mu[ii]) * Poly2::b();
    }
  }
  BifurcationLocus loc;
  loc.q = determinant(m);
  for (Eigen::Index i = 0; i < s.signature.size(); ++i)
    if (s.signature[i] < 0) loc.signature_sign = -loc.signature_sign;
  if (commutator_norm(s) < cfg.tol_residual) {
    loc.factors = detail::joint_lines(s.sigma, s.mu, cfg.tol_zero);
    Poly2 prod(1);
    for (const auto& f : loc.factors)
      for (int r = 0; r < f.multiplicity; ++r) prod = prod * detail::line_poly(f);
    const Poly2 diff = loc.q - prod;
    for (const auto& [key, v] : diff.coeffs()) loc.factor_residual = std::max(loc.factor_residual, std::abs(v.get_d()));
  }
  return loc;
}

struct CommuteReport {
  bool commute = false;
  bool semiumbilic = false;
  double commutator = 0.0;
  double semiumbilic_det = 0.0;
  std::vector<LineFactor> lines;  // n lines with multiplicity when commuting
};

inline CommuteReport commuting_and_semiumbilic(const FrameData& fd, size_t k, const ToleranceConfig& cfg = {}) {
  const FrameSample& s = fd.samples.at(k);
  CommuteReport r;
  r.commutator = commutator_norm(s);
  r.commute = r.commutator < cfg.tol_residual;
  if (fd.n == 2) {
    // det [[s22 - s11, s12], [m22 - m11, m12]] with S2 diagonal in this basis
    r.semiumbilic_det = -s.sigma(0, 1) * (s.mu[1] - s.mu[0]);
    r.semiumbilic = std::abs(r.semiumbilic_det) < cfg.tol_residual;
  } else {
    r.semiumbilic = r.commute;
  }
  if (r.commute) r.lines = detail::joint_lines(s.sigma, s.mu, cfg.tol_zero);
  return r;
}

struct RegularityReport {
  bool smooth = false;
  double x1_mu1 = 0.0;
  std::array<double, 2> focal_point{0.0, 0.0};  // (a, b) = (0, 1/mu_1)
  std::array<double, 2> zeta{0.0, 0.0};         // mu_1 xi - sigma_11 eta
  double zeta_tangent_residual = 0.0;           // |grad q . zeta| / (|grad q| |zeta|)
  std::vector<std::string> tangent_space;       // X_2..X_n, xi, eta
};

inline constexpr double kEigenGap = 1e-6;

/// Smoothness of the focal set at phi + eta / mu_1 from X_1(mu_1).
inline RegularityReport regularity_probe(const FrameData& fd, size_t k, bool eta_parallel,
                                         std::optional<double> x1_mu1, const ToleranceConfig& cfg = {}) {
  if (!eta_parallel) throw Error(ErrorKind::InvalidConfig, "regularity probe requires a parallel eta");
  const FrameSample& s = fd.samples.at(k);
  const double mu1 = s.mu[0];
  for (Eigen::Index j = 1; j < s.mu.size(); ++j) {
    if (std::abs(s.mu[j] - mu1) < kEigenGap) throw PointError(ErrorKind::NonSimpleEigenvalue, s.param[0], "mu_1 is not simple");
  }
  if (std::abs(mu1) < cfg.tol_zero) throw PointError(ErrorKind::NonSimpleEigenvalue, s.param[0], "mu_1 vanishes");
  const std::optional<double> d = x1_mu1 ? x1_mu1 : s.x1_mu1;
  if (!d) throw Error(ErrorKind::InsufficientJets, "X_1(mu_1) unavailable");
  RegularityReport r;
  r.x1_mu1 = *d;
  r.smooth = std::abs(*d) > cfg.tol_zero;
  r.focal_point = {0.0, 1.0 / mu1};
  r.zeta = {mu1, -s.sigma(0, 0)};
  const Poly2 q = bifurcation_polynomial(fd, k, cfg).q;
  const double h = 1e-6;
  const double qa = (q.eval(h, 1.0 / mu1) - q.eval(-h, 1.0 / mu1)) / (2 * h);
  const double qb = (q.eval(0.0, 1.0 / mu1 + h) - q.eval(0.0, 1.0 / mu1 - h)) / (2 * h);
  const double gn = std::hypot(qa, qb), zn = std::hypot(r.zeta[0], r.zeta[1]);
  r.zeta_tangent_residual = gn > 0 && zn > 0 ? std::abs(qa * r.zeta[0] + qb * r.zeta[1]) / (gn * zn) : 0.0;
  for (int j = 2; j <= fd.n; ++j) r.tangent_space.push_back("X" + std::to_string(j));
  r.tangent_space.push_back("xi");
  r.tangent_space.push_back("eta");
  return r;
}

namespace detail {

// Real roots of sum c_i x^i (ascending) via the companion matrix.
inline std::vector<double> real_roots(std::vector<double> c, double scale_tol = 1e-12) {
  double mx = 0.0;
  for (double v : c) mx = std::max(mx, std::abs(v));
  while (c.size() > 1 && std::abs(c.back()) <= scale_tol * mx) c.pop_back();
  const auto deg = static_cast<Eigen::Index>(c.size()) - 1;
  if (deg < 1) return {};
  MatD comp = MatD::Zero(deg, deg);
  for (Eigen::Index i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < deg; ++i) comp(i, deg - 1) = -c[static_cast<size_t>(i)] / c.back();
  Eigen::EigenSolver<MatD> es(comp, false);
  std::vector<double> r;
  for (Eigen::Index i = 0; i < deg; ++i) {
    const auto z = es.eigenvalues()[i];
    if (std::abs(z.imag()) < 1e-7 * std::max(1.0, std::abs(z.real()))) r.push_back(z.real());
  }
  return r;
}

}  // namespace detail

/// Points of {q = 0} inside [-R, R]^2: roots in a on horizontal lines and
/// roots in b on vertical lines.
inline std::vector<std::array<double, 2>> sample_locus(const Poly2& q, double R, int lines) {
  std::vector<std::array<double, 2>> pts;
  for (int i = 0; i < lines; ++i) {
    const double t = -R + 2.0 * R * (i + 0.5) / lines;
    for (double a : detail::real_roots(q.in_a(t)))
      if (std::abs(a) <= R) pts.push_back({a, t});
    for (double b : detail::real_roots(q.in_b(t)))
      if (std::abs(b) <= R) pts.push_back({t, b});
  }
  return pts;
}

}  // namespace afocal::focal
