#include <gtest/gtest.h>

#include <cmath>

#include "afocal/umbilic.hpp"
#include "test_support.hpp"

using namespace afocal;
using namespace afocal::blaschke;
using namespace afocal::umbilic;

namespace {

const ToleranceConfig kCfg;

struct Case {
  const char* name;
  Hypersurface s;
  int intervals;
  bool sphere;
};

std::vector<Case> cases() {
  return {{"circle", unit_circle(), 64, true},
          {"ellipse", planar_curve(curves::ellipse(2.0, 0.5)), 64, true},
          {"parabola", parabola(), 64, false},
          {"sphere", sphere_patch(), 16, true},
          {"ellipsoid", ellipsoid_patch(1.0, 1.5, 0.7), 16, true},
          {"paraboloid", paraboloid(), 8, false},
          {"convex_graph", convex_graph(0.1), 8, false}};
}

VecD origin(int n, double c = 0.0) { return VecD::Constant(n + 1, c); }

}  // namespace

TEST(ConstructUmbilic, CircleLiesInPlane) {
  const auto b = blaschke_apparatus(unit_circle(), 64, kCfg);
  const auto m = construct_umbilic(b, origin(1));
  for (size_t k = 0; k < m.size(); ++k) {
    EXPECT_NEAR((m.phi[k].head(2) + b.f[k]).norm(), 0.0, 1e-9);
    EXPECT_NEAR(m.phi[k][2], -1.0, 1e-9);
  }
  const auto fit = hyperplanarity_test(m);
  ASSERT_TRUE(fit.hyperplane);
  EXPECT_NEAR(std::abs(fit.hyperplane->normal[2]), 1.0, 1e-9);
  EXPECT_NEAR(fit.hyperplane->offset / fit.hyperplane->normal[2], -1.0, 1e-9);
}

TEST(ConstructUmbilic, SphereLiesInPlane) {
  const auto b = blaschke_apparatus(sphere_patch(), 16, kCfg);
  const auto m = construct_umbilic(b, origin(2));
  for (size_t k = 0; k < m.size(); ++k) {
    EXPECT_NEAR((m.phi[k].head(3) + b.f[k]).norm(), 0.0, 1e-9);
    EXPECT_NEAR(m.phi[k][3], -1.0, 1e-9);
  }
}

TEST(ConstructUmbilic, ZIsConormalDistance) {
  const VecD O = origin(2, 0.2);
  const auto b = blaschke_apparatus(convex_graph(0.1), 8, kCfg);
  const auto m = construct_umbilic(b, O);
  for (size_t k = 0; k < m.size(); ++k) EXPECT_NEAR(m.phi[k][3], b.nu[k].dot(b.f[k] - O), kCfg.tol_residual);
}

TEST(ConstructUmbilic, StructureInvariants) {
  for (const auto& c : cases()) {
    SCOPED_TRACE(c.name);
    const auto b = blaschke_apparatus(c.s, c.intervals, kCfg);
    const auto m = construct_umbilic(b, origin(c.s.n, 0.1));
    EXPECT_LT(m.frame_det_residual, 1e-6);
    EXPECT_LT(m.metric_residual, 1e-6);
    EXPECT_LT(m.normal_plane_residual, kCfg.tol_residual);
    EXPECT_LT(verify_laplacian_identity(m), 1e-6);
  }
}

TEST(ConstructUmbilic, VisualContour) {
  // tangent space of the cone {t phi} at phi contains the origin: phi lies in span(phi_*TM, phi)
  const auto b = blaschke_apparatus(convex_graph(0.1), 8, kCfg);
  const auto m = construct_umbilic(b, origin(2, 0.3));
  for (int i = 0; i < 10; ++i) {
    const auto k = static_cast<size_t>(afocal::testing::uniform(0.0, static_cast<double>(m.size()) - 1e-9));
    MatD t(4, 3);
    t.col(0) = value_of(d(m.phi2[k], 0));
    t.col(1) = value_of(d(m.phi2[k], 1));
    t.col(2) = m.phi[k];
    Eigen::JacobiSVD<MatD> svd(t, Eigen::ComputeFullU);
    const VecD nrm = svd.matrixU().col(3);
    EXPECT_LT(std::abs(nrm.dot(m.phi[k])), 1e-8);
  }
}

TEST(LaplacianIdentity, ParaboloidFlat) {
  const auto b = blaschke_apparatus(paraboloid(), 8, kCfg);
  const auto m = construct_umbilic(b, origin(2));
  const auto lap = laplacian_of(b, m.phi2);
  for (size_t k = 0; k < m.size(); ++k) EXPECT_LT((0.5 * lap[k] + m.Q()).norm(), 1e-6);
}

TEST(Hyperplanarity, AgreesWithAffineSphere) {
  for (const auto& c : cases()) {
    SCOPED_TRACE(c.name);
    const auto b = blaschke_apparatus(c.s, c.intervals, kCfg);
    for (double o : {0.0, 0.25}) {
      const auto fit = hyperplanarity_test(construct_umbilic(b, origin(c.s.n, o)));
      EXPECT_EQ(fit.hyperplane.has_value(), c.sphere);
      EXPECT_EQ(is_proper_affine_sphere(b, kCfg).has_value(), c.sphere);
      if (c.sphere) EXPECT_LT(fit.residual, 1e-8);
    }
  }
}

TEST(Hyperplanarity, ImproperCaseLiesInHyperplaneThroughQ) {
  // nu of the paraboloid is (-x, -y, 1): phi sits in {x_3 = 1}, a hyperplane parallel to Q
  const auto b = blaschke_apparatus(paraboloid(), 8, kCfg);
  const auto fit = hyperplanarity_test(construct_umbilic(b, origin(2)));
  EXPECT_FALSE(fit.hyperplane);
  EXPECT_GT(fit.residual, 0.1);
  EXPECT_LT(fit.residual_any, 1e-12);
  EXPECT_TRUE(fit.any_contains_Q);
  const auto g = hyperplanarity_test(construct_umbilic(blaschke_apparatus(convex_graph(0.1), 8, kCfg), origin(2)));
  EXPECT_GT(g.residual_any, 1e-3);
}

TEST(InverseConstruction, CircleFromPhi) {
  auto phi = std::make_shared<AnalyticCurve>(3, [](const Series& u) {
    return SVec{-1.0 * cos(u), -1.0 * sin(u), Series(u.order(), -1.0)};
  });
  const auto r = inverse_construction(phi, uniform_grid(0.0, 6.0, 24), VecD::Zero(2), kCfg);
  for (size_t k = 0; k < r.f.size(); ++k) {
    const double u = 6.0 * static_cast<double>(k) / 24.0;
    EXPECT_NEAR(r.f[k][0], std::cos(u), 1e-12);
    EXPECT_NEAR(r.f[k][1], std::sin(u), 1e-12);
  }
  EXPECT_LT(r.lambda_residual, 1e-9);
  EXPECT_LT(r.frame_det_residual, 1e-9);
}

TEST(InverseConstruction, RoundTrip) {
  for (const auto& c : cases()) {
    SCOPED_TRACE(c.name);
    const auto b = blaschke_apparatus(c.s, c.intervals, kCfg);
    const VecD O = origin(c.s.n, 0.15);
    const auto r = inverse_construction(construct_umbilic(b, O), O, kCfg);
    double err = 0.0;
    for (size_t k = 0; k < r.f.size(); ++k) err = std::max(err, (r.f[k] - b.f[k]).norm());
    EXPECT_LT(err, 1e-6);
    EXPECT_LT(r.lambda_residual, 1e-6);
    EXPECT_LT(r.frame_det_residual, 1e-6);
  }
}

TEST(InverseConstruction, OriginShiftsReconstruction) {
  const auto b = blaschke_apparatus(unit_circle(), 32, kCfg);
  const auto m = construct_umbilic(b, origin(1));
  VecD O(2);
  O << 0.5, -0.25;
  const auto r = inverse_construction(m, O, kCfg);
  for (size_t k = 0; k < r.f.size(); ++k) EXPECT_LT((r.f[k] - b.f[k] - O).norm(), 1e-9);
}

TEST(InverseConstruction, ConstantPsiIsSingular) {
  auto phi = std::make_shared<AnalyticCurve>(3, [](const Series& u) {
    return SVec{Series(u.order(), 1.0), Series(u.order(), 0.0), u};
  });
  try {
    inverse_construction(phi, uniform_grid(0.0, 1.0, 4), VecD::Zero(2), kCfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingularSystem);
  }
}
