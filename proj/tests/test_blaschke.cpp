#include <gtest/gtest.h>

#include <cmath>

#include "afocal/blaschke.hpp"
#include "test_support.hpp"

using namespace afocal;
using namespace afocal::blaschke;

namespace {

const ToleranceConfig kCfg;

MatD random_unimodular(int d) {
  MatD a(d, d);
  do {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) a(i, j) = afocal::testing::uniform(-1.0, 1.0);
  } while (std::abs(a.determinant()) < 0.3);
  if (a.determinant() < 0) a.col(0) = -a.col(0);
  return a / std::cbrt(a.determinant());
}

Hypersurface transformed(const Hypersurface& s, const MatD& a) {
  Hypersurface t = s;
  const PatchFn p = s.patch;
  t.patch = [p, a](const Series2& u, const Series2& v) {
    const SVec2 f = p(u, v);
    SVec2 r;
    for (int i = 0; i < 3; ++i) r.push_back(a(i, 0) * f[0] + a(i, 1) * f[1] + a(i, 2) * f[2]);
    return r;
  };
  return t;
}

}  // namespace

TEST(Blaschke, CircleConormal) {
  const auto b = blaschke_apparatus(unit_circle(), 64, kCfg);
  for (size_t k = 0; k < b.size(); ++k) {
    EXPECT_NEAR((b.nu[k] + b.f[k]).norm(), 0.0, 1e-9);
    EXPECT_NEAR(b.H[k], 1.0, 1e-9);
    EXPECT_NEAR(b.f[k].norm(), 1.0, 1e-9);
  }
  EXPECT_LT(b.nu_tangent_residual, kCfg.tol_residual);
  EXPECT_LT(b.nu_xi_residual, kCfg.tol_residual);
  EXPECT_LT(b.nu_laplacian_residual, kCfg.tol_residual);
}

TEST(Blaschke, ParaboloidIsImproper) {
  const auto b = blaschke_apparatus(paraboloid(), 8, kCfg);
  for (size_t k = 0; k < b.size(); ++k) {
    EXPECT_NEAR((b.xi[k] - VecD::Unit(3, 2)).norm(), 0.0, 1e-9);
    EXPECT_NEAR(b.H[k], 0.0, 1e-9);
    EXPECT_NEAR((b.h[k] - MatD::Identity(2, 2)).norm(), 0.0, 1e-9);
  }
  EXPECT_FALSE(is_proper_affine_sphere(b, kCfg));
}

TEST(Blaschke, SphereConormal) {
  const auto b = blaschke_apparatus(sphere_patch(), 16, kCfg);
  for (size_t k = 0; k < b.size(); ++k) {
    EXPECT_NEAR((b.nu[k] + b.f[k]).norm(), 0.0, 1e-9);
    EXPECT_NEAR((b.xi[k] + b.f[k]).norm(), 0.0, 1e-9);
    EXPECT_NEAR(b.H[k], 1.0, 1e-9);
  }
  EXPECT_LT(b.nu_tangent_residual, kCfg.tol_residual);
  EXPECT_LT(b.nu_xi_residual, kCfg.tol_residual);
  EXPECT_LT(b.nu_laplacian_residual, kCfg.tol_residual);
}

TEST(Blaschke, EllipsoidMeanCurvature) {
  // affine image of the unit sphere with det = abc, so H = (abc)^(-1/2)
  const auto b = blaschke_apparatus(ellipsoid_patch(1.0, 1.5, 0.7), 16, kCfg);
  for (double h : b.H) EXPECT_NEAR(h, 1.0 / std::sqrt(1.05), 1e-9);
}

TEST(AffineSphere, Detection) {
  const auto s = is_proper_affine_sphere(blaschke_apparatus(sphere_patch(), 16, kCfg), kCfg);
  ASSERT_TRUE(s);
  EXPECT_LT(s->center.norm(), 1e-9);
  EXPECT_LT(s->residual, 1e-9);
  const auto e = is_proper_affine_sphere(blaschke_apparatus(ellipsoid_patch(1.0, 1.5, 0.7), 16, kCfg), kCfg);
  ASSERT_TRUE(e);
  EXPECT_LT(e->center.norm(), 1e-8);
  const auto c = is_proper_affine_sphere(blaschke_apparatus(planar_curve(curves::ellipse(2.0, 0.5)), 64, kCfg), kCfg);
  ASSERT_TRUE(c);
  EXPECT_LT(c->center.norm(), 1e-8);
  EXPECT_FALSE(is_proper_affine_sphere(blaschke_apparatus(convex_graph(0.1), 8, kCfg), kCfg));
  EXPECT_FALSE(is_proper_affine_sphere(blaschke_apparatus(parabola(), 64, kCfg), kCfg));
}

TEST(AffineSphere, ParaboloidNormalsParallel) {
  const auto b = blaschke_apparatus(paraboloid(), 8, kCfg);
  for (size_t k = 1; k < b.size(); ++k) EXPECT_LT(Eigen::Vector3d(b.xi[k].normalized()).cross(Eigen::Vector3d(b.xi[0].normalized())).norm(), 1e-8);
}

TEST(Laplacian, CircleAndFlat) {
  const Series u = Series::variable(0.7, 8);
  const SVec F{cos(u), sin(u)};
  const VecD lap = value_of(laplacian(F, Series(8, 1.0)));
  EXPECT_NEAR(lap[0], -std::cos(0.7), 1e-12);
  EXPECT_NEAR(lap[1], -std::sin(0.7), 1e-12);
  // linear coordinate functions on the paraboloid, where h is flat
  const auto b = blaschke_apparatus(paraboloid(), 4, kCfg);
  std::vector<SVec2> lin;
  for (const auto& a : b.local2) lin.push_back({a.f[0], a.f[1]});
  for (const VecD& v : laplacian_of(b, lin)) EXPECT_LT(v.norm(), 1e-12);
}

TEST(Laplacian, SphereConormal) {
  const auto b = blaschke_apparatus(sphere_patch(), 12, kCfg);
  std::vector<SVec2> nu;
  for (const auto& a : b.local2) nu.push_back(a.nu);
  const auto lap = laplacian_of(b, nu);
  for (size_t k = 0; k < b.size(); ++k) EXPECT_LT((0.5 * lap[k] + b.nu[k]).norm(), 1e-6);
}

TEST(Blaschke, UnimodularInvariance) {
  const MatD a = random_unimodular(3);
  ASSERT_NEAR(a.determinant(), 1.0, 1e-12);
  for (const Hypersurface& s : {ellipsoid_patch(1.0, 1.5, 0.7), convex_graph(0.1)}) {
    const auto b0 = blaschke_apparatus(s, 8, kCfg), b1 = blaschke_apparatus(transformed(s, a), 8, kCfg);
    for (size_t k = 0; k < b0.size(); ++k) {
      EXPECT_LT((b0.h[k] - b1.h[k]).cwiseAbs().maxCoeff(), 1e-8);
      EXPECT_NEAR(b0.H[k], b1.H[k], 1e-8);
      EXPECT_LT((a * b0.xi[k] - b1.xi[k]).norm(), 1e-8);
    }
  }
}

TEST(Blaschke, DegenerateMetric) {
  Hypersurface saddle = convex_graph();
  saddle.patch = [](const Series2& x, const Series2& y) { return SVec2{x, y, x * y}; };
  try {
    blaschke_apparatus(saddle, 4, kCfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateMetric);
  }
  try {
    blaschke_apparatus(planar_curve(curves::parametric_poly({0, 1}, {0, 0, 0, 1})), 32, kCfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateMetric);
  }
}

TEST(Blaschke, ParabolaAffineArcLength) {
  // y = x^2/2 has [f', f''] = 1, so arc-length is x and xi = (0, 1)
  const auto b = blaschke_apparatus(parabola(), 32, kCfg);
  for (size_t k = 0; k < b.size(); ++k) {
    EXPECT_NEAR(b.H[k], 0.0, 1e-9);
    EXPECT_NEAR(std::abs(b.xi[k][1]), 1.0, 1e-9);
    EXPECT_NEAR(b.xi[k][0], 0.0, 1e-9);
  }
}
