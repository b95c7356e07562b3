#include <gtest/gtest.h>

#include <cmath>

#include "afocal/blaschke.hpp"
#include "afocal/darboux.hpp"
#include "afocal/focal.hpp"
#include "afocal/umbilic.hpp"
#include "test_support.hpp"

using namespace afocal;
using namespace afocal::focal;

namespace {

const ToleranceConfig kCfg;

FrameData single(const MatD& sigma, const VecD& mu) {
  FrameData fd;
  fd.n = static_cast<int>(mu.size());
  FrameSample s;
  s.sigma = sigma;
  s.mu = mu;
  s.signature = VecD::Ones(mu.size());
  fd.samples.push_back(s);
  return fd;
}

MatD random_symmetric(int n) {
  MatD m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = afocal::testing::uniform(-2.0, 2.0);
  return m;
}

// Affine evolute of a planar curve computed directly in its own parameter:
// d/ds = w^(-1/3) d/dt with w = [G_t, G_tt], E = G + G'' / [G'', G'''].
VecD oracle_evolute(const CurvePtr& g, double t) {
  const SVec p = g->taylor(t, 8);
  const Series w = det2(d(p), d(d(p)));
  const Series s = pow(w, -1.0 / 3.0);
  auto D = [&](const SVec& v) {
    SVec r;
    for (const auto& c : v) r.push_back(s.truncated(c.order() - 1) * c.d());
    return r;
  };
  const SVec g2 = D(D(p)), g3 = D(g2);
  const double rho = det2(value_of(g2), value_of(g3));
  return value_of(p) + value_of(g2) / rho;
}

double distance_to_evolute(const CurvePtr& g, double t_hint, double h, const VecD& x) {
  // golden-section on |E(t) - x| around the hint; the evolute escapes to
  // infinity where the curvature changes sign, so keep the hint itself too
  double lo = t_hint - h, hi = t_hint + h;
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  auto f = [&](double t) { return (oracle_evolute(g, t) - x).norm(); };
  double c = hi - phi * (hi - lo), e = lo + phi * (hi - lo);
  double fc = f(c), fe = f(e);
  for (int i = 0; i < 80; ++i) {
    if (fc < fe) {
      hi = e;
      e = c;
      fe = fc;
      c = hi - phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = e;
      fc = fe;
      e = lo + phi * (hi - lo);
      fe = f(e);
    }
  }
  return std::min({fc, fe, f(t_hint)});
}

}  // namespace

TEST(Rational, ContinuedFractions) {
  EXPECT_EQ(to_rational(0.5), mpq_class(1, 2));
  EXPECT_EQ(to_rational(1.0 / 3.0), mpq_class(1, 3));
  EXPECT_EQ(to_rational(-2.75), mpq_class(-11, 4));
  const mpq_class p = to_rational(M_PI);
  EXPECT_LE(p.get_den(), 1e12);
  EXPECT_NEAR(p.get_d(), M_PI, 1e-20 + 1e-12);
}

TEST(Bifurcation, OneDimensional) {
  MatD s(1, 1);
  s << 0.25;
  const auto q = bifurcation_polynomial(single(s, VecD::Constant(1, 0.5)), 0).q;
  EXPECT_EQ(q, Poly2(1) - mpq_class(1, 2) * Poly2::b() - mpq_class(1, 4) * Poly2::a());
}

TEST(Bifurcation, UmbilicSquare) {
  const auto loc = bifurcation_polynomial(single(0.5 * MatD::Identity(2, 2), VecD::Constant(2, 2.0)), 0, kCfg);
  const Poly2 line = Poly2(1) - mpq_class(2) * Poly2::b() - mpq_class(1, 2) * Poly2::a();
  EXPECT_EQ(loc.q, line * line);
  ASSERT_EQ(loc.factors.size(), 1u);
  EXPECT_EQ(loc.factors[0].multiplicity, 2);
}

TEST(Bifurcation, DegreeBoundAndNormalization) {
  for (int t = 0; t < 100; ++t) {
    const int n = 1 + t % 4;
    VecD mu(n);
    for (int i = 0; i < n; ++i) mu[i] = afocal::testing::uniform(-2.0, 2.0);
    const auto q = bifurcation_polynomial(single(random_symmetric(n), mu), 0, kCfg).q;
    EXPECT_LE(q.degree(), n);
    EXPECT_EQ(q.coeff(0, 0), 1);
  }
}

TEST(Bifurcation, CommutingFactorsMatchDeterminant) {
  for (int t = 0; t < 50; ++t) {
    const int n = 2 + t % 3;
    VecD mu(n), sg(n);
    for (int i = 0; i < n; ++i) {
      mu[i] = afocal::testing::uniform(-2.0, 2.0);
      sg[i] = afocal::testing::uniform(-2.0, 2.0);
    }
    const auto loc = bifurcation_polynomial(single(sg.asDiagonal(), mu), 0, kCfg);
    EXPECT_EQ(static_cast<int>(loc.factors.size()), n);
    EXPECT_LT(loc.factor_residual, 1e-12);
  }
}

TEST(Commute, RandomSymmetricPairs) {
  int checked = 0;
  for (int t = 0; t < 20; ++t) {
    const MatD A = random_symmetric(2), B = random_symmetric(2);
    if ((A * B - B * A).norm() < 0.1) continue;
    // express A in the eigenbasis of B
    Eigen::SelfAdjointEigenSolver<MatD> es(B);
    const MatD R = es.eigenvectors();
    const auto rep = commuting_and_semiumbilic(single(R.transpose() * A * R, es.eigenvalues()), 0, kCfg);
    EXPECT_FALSE(rep.commute);
    EXPECT_FALSE(rep.semiumbilic);
    EXPECT_GT(rep.commutator, 0.1);
    ++checked;
  }
  EXPECT_GT(checked, 5);
}

TEST(Commute, UmbilicAndProduct) {
  const auto u = commuting_and_semiumbilic(single(0.3 * MatD::Identity(2, 2), VecD::Constant(2, -1.0)), 0, kCfg);
  EXPECT_TRUE(u.commute);
  EXPECT_TRUE(u.semiumbilic);
  ASSERT_EQ(u.lines.size(), 1u);
  EXPECT_EQ(u.lines[0].multiplicity, 2);
  const auto p = product_curves_fixture(curves::support_oval({1, 0, 0, 0, 0, 0.1}), curves::circle(), 24, 20, kCfg);
  for (size_t k = 0; k < p.fd.size(); k += 7) {
    const auto r = commuting_and_semiumbilic(p.fd, k, kCfg);
    EXPECT_TRUE(r.commute);
    EXPECT_TRUE(r.semiumbilic);
    EXPECT_EQ(r.lines.size(), 2u);
  }
}

TEST(Product, CircleTimesCircleExact) {
  const auto p = product_curves_fixture(curves::circle(), curves::circle(), 32, 16, kCfg);
  const Poly2 r = Poly2::a(), s = Poly2::b();  // read (a, b) slots as (r, s)
  // F_11 F_22 = (1 - r)(-1 + s), normalized by its value at 0
  const Poly2 hess = (Poly2(1) - r) * (Poly2(-1) + s);
  const Poly2 expected = mpq_class(-1) * hess;
  for (size_t k = 0; k < p.fd.size(); ++k) {
    const auto loc = bifurcation_polynomial(p.fd, k, kCfg);
    // a = s, b = s - r
    EXPECT_EQ(loc.q.substitute(s, s - r), expected) << loc.q.str();
    const auto h = p.product_hessian(k, 0.0, 0.0);
    EXPECT_EQ(loc.signature_sign * (h[0] * h[1] < 0 ? -1 : 1), loc.signature_sign * -1);
    EXPECT_LT(p.fd.samples[k].orthonormality_residual, 1e-9);
    EXPECT_NEAR(std::abs(p.fd.samples[k].frame_det), 1.0, 1e-9);
    EXPECT_LT(p.fd.samples[k].parallel_residual, 1e-9);
  }
}

TEST(Product, ProductHessianMatchesPolynomial) {
  const auto p = product_curves_fixture(curves::support_oval({1, 0, 0, 0, 0, 0.1}), curves::ellipse(1.5, 0.5), 24, 20, kCfg);
  for (size_t k = 0; k < p.fd.size(); k += 5) {
    const auto q = bifurcation_polynomial(p.fd, k, kCfg).q;
    for (int t = 0; t < 4; ++t) {
      const double a = afocal::testing::uniform(-2, 2), b = afocal::testing::uniform(-2, 2);
      const auto [r, s] = ProductFixture::rs_of_ab(a, b);
      const auto h = p.product_hessian(k, r, s);
      EXPECT_NEAR(q.eval(a, b), -h[0] * h[1], 1e-8);
    }
  }
}

TEST(Product, OvalTimesCircleMatchesEvoluteProduct) {
  const auto oval = curves::support_oval({1, 0, 0, 0, 0, 0.1});
  const auto p = product_curves_fixture(oval, curves::circle(), 48, 16, kCfg);
  const double h = 2.0 * (p.alpha.t_of_u[1] - p.alpha.t_of_u[0]);
  size_t count = 0;
  double hausdorff = 0.0;
  for (size_t k = 0; k < p.fd.size(); ++k) {
    const auto q = bifurcation_polynomial(p.fd, k, kCfg).q;
    const double t = p.alpha.t_of_u[p.i1[k]];
    for (const auto& ab : sample_locus(q, 3.0, 1)) {
      const VecD x = p.point(k, ab[0], ab[1]);
      // distance to E(oval) x R^2 union R^2 x {0}
      const double d1 = distance_to_evolute(oval.source, t, h, x.head(2));
      const double d2 = x.tail(2).norm();
      hausdorff = std::max(hausdorff, std::min(d1, d2));
      // reverse: the advertised point with the same free coordinates is on the locus
      VecD y = x;
      if (d1 < d2) y.head(2) = oracle_evolute(oval.source, t);
      else y.tail(2).setZero();
      hausdorff = std::max(hausdorff, (y - x).norm());
      ++count;
    }
  }
  EXPECT_GE(count, 1000u);
  EXPECT_LT(hausdorff, 1e-6);
}

TEST(Regularity, ProductProbe) {
  const auto p = product_curves_fixture(curves::support_oval({1, 0, 0, 0, 0, 0.1}), curves::circle(), 32, 20, kCfg);
  int smooth = 0;
  for (size_t k = 0; k < p.fd.size(); ++k) {
    if (std::abs(*p.fd.samples[k].x1_mu1) < 1e-2) continue;
    const auto r = regularity_probe(p.fd, k, true, std::nullopt, kCfg);
    EXPECT_TRUE(r.smooth);
    EXPECT_LT(r.zeta_tangent_residual, 1e-8);
    EXPECT_EQ(r.tangent_space.size(), 3u);
    ++smooth;
  }
  EXPECT_GT(smooth, 0);
  const auto c = product_curves_fixture(curves::circle(), curves::ellipse(2.0, 0.5), 20, 20, kCfg);
  EXPECT_FALSE(regularity_probe(c.fd, 3, true, std::nullopt, kCfg).smooth);
}

TEST(Regularity, UmbilicIsNonSimple) {
  try {
    regularity_probe(single(MatD::Identity(2, 2), VecD::Constant(2, 1.0)), 0, true, 0.5, kCfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonSimpleEigenvalue);
  }
}

TEST(QuadricSection, SphereLatitude) {
  VecD l(3);
  l << 0, 0, 1;
  const auto v = quadric_section_fixture({VecD::Ones(3)}, l, 0.6, 64, kCfg);
  EXPECT_TRUE(v.umbilic);
  EXPECT_LT(v.sigma_spread, 1e-8);
  EXPECT_LT(v.mu_spread, 1e-8);
  ASSERT_TRUE(v.focal_line);
  const auto& [p, d] = *v.focal_line;
  EXPECT_LT(std::hypot(p[0], p[1]), 1e-12);
  EXPECT_NEAR(std::abs(d[2]), 1.0, 1e-12);
  EXPECT_LT(v.focal_line_spread, 1e-12);
  for (const auto& s : v.fd.samples) {
    EXPECT_LT(s.orthonormality_residual, 1e-12);
    EXPECT_NEAR(std::abs(s.frame_det), 1.0, 1e-12);
    EXPECT_LT(s.parallel_residual, 1e-12);
  }
}

TEST(QuadricSection, TiltedPlaneIsRotatedAxis) {
  // rotate the latitude case by an orthogonal map, an isometry of the form
  const Eigen::Matrix3d R = (Eigen::AngleAxisd(0.7, Eigen::Vector3d(1, 2, 0.5).normalized())).toRotationMatrix();
  const VecD l = R * Eigen::Vector3d(0, 0, 1);
  const auto v = quadric_section_fixture({VecD::Ones(3)}, l, 0.6, 64, kCfg);
  EXPECT_TRUE(v.umbilic);
  ASSERT_TRUE(v.focal_line);
  const auto& [p, d] = *v.focal_line;
  EXPECT_NEAR(std::abs(d.dot(l)), 1.0, 1e-12);
  EXPECT_LT((p - p.dot(l) * l).norm(), 1e-12);  // passes through the circle centre 0.6 l
}

TEST(QuadricSection, ThreeSphereAndHyperboloid) {
  VecD l(4);
  l << 0.3, 0.2, 0.1, 1.0;
  const auto v = quadric_section_fixture({VecD::Ones(4)}, l, 0.5, 64, kCfg);
  EXPECT_EQ(v.fd.n, 2);
  EXPECT_TRUE(v.umbilic);
  for (size_t k = 0; k < v.fd.size(); ++k) {
    const auto loc = bifurcation_polynomial(v.fd, k, kCfg);
    ASSERT_EQ(loc.factors.size(), 1u);
    EXPECT_EQ(loc.factors[0].multiplicity, 2);
  }
  VecD eps(3), lz(3);
  eps << 1, 1, -1;
  lz << 0, 0, 1;
  const auto hyp = quadric_section_fixture({eps}, lz, 0.5, 32, kCfg);
  EXPECT_TRUE(hyp.umbilic);
  EXPECT_LT(hyp.containment_residual, 1e-12);
}

TEST(QuadricSection, Errors) {
  VecD lz(3);
  lz << 0, 0, 1;
  try {
    quadric_section_fixture({VecD::Ones(3)}, lz, 2.0, 16, kCfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptySection);
  }
  VecD eps(3), lx(3);
  eps << 1, 1, -1;
  lx << 1, 0, 0;  // x = 1 cuts x^2 + y^2 - z^2 = 1 in two null lines
  try {
    quadric_section_fixture({eps}, lx, 1.0, 16, kCfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateTangent);
  }
}

TEST(QuadricSection, NonPlanarSphericalCurve) {
  const auto dir = curves::NamedCurve{std::make_shared<AnalyticCurve>(3, [](const Series& t) {
                                        return SVec{0.8 * cos(t), 0.8 * sin(t), 0.6 + 0.1 * sin(3.0 * t)};
                                      }),
                                      0.0, curves::kTwoPi, true};
  const auto c = darboux::radial_projection(darboux::sphere(), dir);
  const auto v = quadric_curve_fixture({VecD::Ones(3)}, c, 128, kCfg);
  EXPECT_FALSE(v.umbilic);
  EXPECT_GT(v.sigma_spread, 1e-3);
  // sigma is the geodesic curvature [p, p', p''] / |p'|^3 up to orientation
  for (size_t k = 0; k < v.fd.size(); k += 9) {
    const SVec p = c.source->taylor(v.fd.samples[k].param[0], 3);
    const Eigen::Vector3d p0 = value_of(p), p1 = derivative_of(p, 1), p2 = derivative_of(p, 2);
    const double kg = p0.dot(p1.cross(p2)) / std::pow(p1.norm(), 3);
    EXPECT_NEAR(std::abs(v.fd.samples[k].sigma(0, 0)), std::abs(kg), 1e-9);
  }
  // the Darboux pipeline with eta = phi'' + lambda xi sees mu vary as well
  const auto f = darboux::complete_frame(
      darboux::darboux_field(darboux::reparam_darboux(darboux::wavy_latitude(kCfg), 256, kCfg, 1.0), kCfg), 0.0);
  const auto mu = darboux::DarbouxFrame::values(f.mu);
  EXPECT_GT(*std::max_element(mu.begin(), mu.end()) - *std::min_element(mu.begin(), mu.end()), 1e-3);
}

TEST(HyperplaneSection, CircleEllipseOval) {
  const auto L = Hyperplane::coordinate(3, 1.0);
  const auto c = hyperplane_section_fixture(L, blaschke::unit_circle(), VecD::Zero(3), 64, kCfg);
  EXPECT_TRUE(c.umbilic);
  EXPECT_TRUE(c.frame_umbilic);
  ASSERT_TRUE(c.focal_line);
  EXPECT_LT(std::hypot((*c.focal_line)[0][0], (*c.focal_line)[0][1]), 1e-9);
  EXPECT_NEAR(std::abs((*c.focal_line)[1][2]), 1.0, 1e-9);
  EXPECT_LT(c.focal_line_spread, 1e-9);
  const auto e = hyperplane_section_fixture(L, blaschke::planar_curve(curves::ellipse(2.0, 0.5)), VecD::Zero(3), 64, kCfg);
  EXPECT_TRUE(e.umbilic);
  EXPECT_TRUE(e.frame_umbilic);
  ASSERT_TRUE(e.focal_line);
  EXPECT_NEAR(std::abs((*e.focal_line)[1][2]), 1.0, 1e-9);
  const auto o = hyperplane_section_fixture(L, blaschke::planar_curve(curves::support_oval({1, 0, 0, 0, 0, 0.1})),
                                            VecD::Zero(3), 64, kCfg);
  EXPECT_FALSE(o.umbilic);
  EXPECT_FALSE(o.frame_umbilic);
}

TEST(HyperplaneSection, AgreesWithCircleOnCone) {
  const auto c = hyperplane_section_fixture(Hyperplane::coordinate(3, 1.0), blaschke::unit_circle(), VecD::Zero(3), 64, kCfg);
  const auto f = darboux::complete_frame(
      darboux::darboux_field(darboux::reparam_darboux(darboux::circle_on_cone(), 128, kCfg, 1.0), kCfg), 0.0);
  const auto O = darboux::visual_contour_test(f, kCfg);
  ASSERT_TRUE(O);
  const auto& [p, dir] = *c.focal_line;
  const VecD w = O->point - p;
  EXPECT_LT((w - w.dot(dir) * dir).norm(), 1e-8);
}

TEST(HyperplaneSection, ApexOnHyperplane) {
  VecD apex(3);
  apex << 0.2, 0.1, 1.0;
  try {
    hyperplane_section_fixture(Hyperplane::coordinate(3, 1.0), blaschke::unit_circle(), apex, 16, kCfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ApexOnHyperplane);
  }
}

TEST(Envelope, ConeLatitudeUmbilic) {
  auto frame = [](const darboux::CurveOnSurface& c) {
    return frame_data_from_darboux(
        darboux::complete_frame(darboux::darboux_field(darboux::reparam_darboux(c, 128, kCfg, 1.0), kCfg), 0.0));
  };
  const auto cone = envelope_tangent_spaces(frame(darboux::circle_on_cone()), -1.0, 1.0, 5, kCfg);
  ASSERT_FALSE(cone.marks.empty());
  for (const VecD& m : cone.marks) EXPECT_LT(m.norm(), 1e-8);
  const double h = 0.6;
  const auto lat = envelope_tangent_spaces(frame(darboux::latitude_on_sphere(h, kCfg)), -1.0, 1.0, 5, kCfg);
  ASSERT_FALSE(lat.marks.empty());
  for (const VecD& m : lat.marks) EXPECT_LT((m - Eigen::Vector3d(0, 0, 1 / h)).norm(), 1e-8);
  const auto b = blaschke::blaschke_apparatus(blaschke::sphere_patch(), 6, kCfg);
  const auto fd = frame_data_from_umbilic(umbilic::construct_umbilic(b, VecD::Zero(3)));
  const auto um = envelope_tangent_spaces(fd, -1.0, 1.0, 3, kCfg);
  EXPECT_EQ(um.marks.size(), 2 * fd.size());
  for (const VecD& m : um.marks) EXPECT_LT(m.norm(), 1e-8);
  for (size_t k = 0; k < fd.size(); ++k) {
    const auto loc = bifurcation_polynomial(fd, k, kCfg);
    ASSERT_EQ(loc.factors.size(), 1u);
    EXPECT_EQ(loc.factors[0].multiplicity, 2);
  }
}

TEST(CrossPipeline, DarboxLineMatchesFocalSheet) {
  for (const auto& c : {darboux::generic_on_ellipsoid(kCfg), darboux::ellipse_on_cubic_graph(kCfg)}) {
    const auto f = darboux::complete_frame(darboux::darboux_field(darboux::reparam_darboux(c, 256, kCfg, 1.0), kCfg), 0.2);
    const auto fd = frame_data_from_darboux(f);
    for (size_t k = 0; k < fd.size(); k += 11) {
      const auto& s = fd.samples[k];
      const auto& g = *s.geometry;
      const double a = s.sigma(0, 0), b = s.mu[0], w = a * a + b * b;
      const VecD p = g.point + (a / w) * g.xi + (b / w) * g.eta;
      const VecD q = p + (-b * g.xi + a * g.eta);
      const auto line = darboux::line_at(f, f.grid[k], kCfg);
      EXPECT_LT(line.distance(p), 1e-8);
      EXPECT_LT(line.distance(q), 1e-8 * (1 + (q - p).norm()));
      EXPECT_NEAR(s.sigma(0, 0), f.sigma[k].value(), 1e-9);
      EXPECT_NEAR(s.mu[0], f.mu[k].value(), 1e-9);
    }
  }
}
