#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "afocal/numkit.hpp"
#include "test_support.hpp"

using namespace afocal;
using afocal::testing::uniform;

namespace {

VecD random_vec(int d) {
  VecD v(d);
  for (int i = 0; i < d; ++i) v[i] = uniform(-1, 1);
  return v;
}

}  // namespace

TEST(VolumeForm, IdentityAndSwap) {
  EXPECT_DOUBLE_EQ(volume_form({vec({1, 0, 0}), vec({0, 1, 0}), vec({0, 0, 1})}), 1.0);
  EXPECT_DOUBLE_EQ(volume_form({vec({0, 1, 0}), vec({1, 0, 0}), vec({0, 0, 1})}), -1.0);
}

TEST(VolumeForm, HandExpansion) {
  // upper-triangular column matrix with unit diagonal
  EXPECT_NEAR(volume_form({vec({1, 0, 0}), vec({1, 1, 0}), vec({1, 1, 1})}), 1.0, 1e-15);
}

TEST(VolumeForm, DimensionMismatch) {
  try {
    volume_form({vec({1, 0}), vec({0, 1, 0}), vec({0, 0, 1})});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
  }
}

TEST(VolumeForm, MultilinearAndShearInvariant) {
  for (int d = 2; d <= 4; ++d) {
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<VecD> v;
      for (int i = 0; i < d; ++i) v.push_back(random_vec(d));
      const double base = volume_form(std::span<const VecD>(v));
      const double c = uniform(-3, 3);
      const int j = trial % d;
      auto scaled = v;
      scaled[j] *= c;
      EXPECT_NEAR(volume_form(std::span<const VecD>(scaled)), c * base,
                  1e-12 * std::max(1.0, std::abs(c * base)));
      auto sheared = v;
      sheared[j] += uniform(-2, 2) * v[(j + 1) % d];
      EXPECT_NEAR(volume_form(std::span<const VecD>(sheared)), base,
                  1e-12 * std::max(1.0, std::abs(base)));
    }
  }
}

TEST(Series, ElementaryFunctionsMatchClosedForms) {
  const double x0 = 0.7;
  const Series x = Series::variable(x0, 8);
  const Series s = sin(x), c = cos(x), e = exp(x), p = pow(x, 1.0 / 3.0);
  for (int k = 0; k <= 8; ++k) {
    const double cyc[4] = {std::sin(x0), std::cos(x0), -std::sin(x0), -std::cos(x0)};
    EXPECT_NEAR(s.derivative(k), cyc[k % 4], 1e-12);
    EXPECT_NEAR(e.derivative(k), std::exp(x0), 1e-12 * std::exp(x0) * (k + 1));
  }
  EXPECT_NEAR(c.derivative(2), -std::cos(x0), 1e-13);
  // d/dx x^{1/3} = x^{-2/3} / 3
  EXPECT_NEAR(p.derivative(1), std::pow(x0, -2.0 / 3.0) / 3.0, 1e-13);
  EXPECT_NEAR((x / x).derivative(3), 0.0, 1e-13);
  EXPECT_NEAR(log(e).derivative(1), 1.0, 1e-13);
}

TEST(Series, ShiftAndCompose) {
  const Series x = Series::variable(0.2, 12);
  const Series s = sin(x);
  const Series moved = s.shifted(0.05);
  const Series direct = sin(Series::variable(0.25, 12));
  for (int k = 0; k <= 6; ++k) EXPECT_NEAR(moved[k], direct[k], 1e-12);
  // exp(sin(e)) via composition equals direct evaluation
  const Series inner = sin(Series::variable(0.0, 10));
  const Series outer = exp(Series::variable(0.0, 10));
  const Series comp = outer.compose(inner);
  const Series ref = exp(inner);
  for (int k = 0; k <= 10; ++k) EXPECT_NEAR(comp[k], ref[k], 1e-13);
}

TEST(Series2, MixedPartials) {
  const Series2 x = Series2::variable(0, 0.3, 6), y = Series2::variable(1, -0.4, 6);
  const Series2 f = sin(x) * exp(y) / (1.0 + x * x);
  // f_xy = cos(x) e^y / (1 + x^2) - 2x sin(x) e^y / (1 + x^2)^2
  const double x0 = 0.3, y0 = -0.4;
  const double fxy = std::cos(x0) * std::exp(y0) / (1 + x0 * x0) -
                     2 * x0 * std::sin(x0) * std::exp(y0) / std::pow(1 + x0 * x0, 2);
  EXPECT_NEAR(f.partial(1, 1), fxy, 1e-13);
  EXPECT_NEAR(f.partial(0, 3), f.value(), 1e-13);
  EXPECT_NEAR(pow(exp(y), 0.5).partial(0, 2), 0.25 * std::exp(y0 / 2), 1e-13);
}

TEST(DeriveJets, CircleSecondJet) {
  const double h = 1e-2;
  const int n = 629;
  std::vector<double> grid = uniform_grid(0, (n - 1) * h, n - 1);
  std::vector<VecD> samples;
  for (double u : grid) samples.push_back(vec({std::cos(u), std::sin(u)}));
  const JetCurve c = derive_jets(grid, samples, 2);
  double err = 0;
  for (size_t k = 0; k < grid.size(); ++k) {
    err = std::max(err, (c.jet(k, 2) - vec({-std::cos(grid[k]), -std::sin(grid[k])})).norm());
  }
  EXPECT_LT(err, 1e-6);
  EXPECT_TRUE(c.low_confidence.front());
  EXPECT_TRUE(c.low_confidence.back());
  EXPECT_FALSE(c.low_confidence[n / 2]);
}

TEST(DeriveJets, CubicThirdJetExact) {
  std::vector<double> grid = uniform_grid(-1, 1, 40);
  std::vector<VecD> samples;
  for (double u : grid) samples.push_back(vec({u * u * u - u, 2 * u * u * u + u * u}));
  const JetCurve c = derive_jets(grid, samples, 3);
  for (size_t k = 0; k < grid.size(); ++k) {
    EXPECT_NEAR(c.jet(k, 3)[0], 6.0, 1e-7);
    EXPECT_NEAR(c.jet(k, 3)[1], 12.0, 1e-7);
  }
}

TEST(DeriveJets, ParabolaFourthJetVanishes) {
  std::vector<double> grid = uniform_grid(-1, 1, 40);
  std::vector<VecD> samples;
  for (double u : grid) samples.push_back(vec({u, u * u / 2}));
  const JetCurve c = derive_jets(grid, samples, 4);
  for (size_t k = 0; k < grid.size(); ++k) EXPECT_NEAR(c.jet(k, 4).norm(), 0.0, 1e-6);
}

TEST(DeriveJets, Errors) {
  std::vector<double> grid = uniform_grid(0, 1, 10);
  std::vector<VecD> samples(grid.size(), vec({0, 0}));
  EXPECT_THROW(derive_jets(grid, samples, 2), Error);  // 11 < 13 samples
  grid = uniform_grid(0, 1, 30);
  grid[7] += 1e-6;
  samples.assign(grid.size(), vec({0, 0}));
  try {
    derive_jets(grid, samples, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonUniformGrid);
  }
}

TEST(DeriveJets, ConvergesAtFourthOrder) {
  auto max_err = [](double h) {
    std::vector<double> grid = uniform_grid(0, 200 * h, 200);
    std::vector<VecD> samples;
    for (double u : grid) samples.push_back(vec({std::cos(3 * u), std::sin(2 * u)}));
    const JetCurve c = derive_jets(grid, samples, 2);
    double err = 0;
    for (size_t k = 10; k + 10 < grid.size(); ++k) {
      const double u = grid[k];
      err = std::max(err, (c.jet(k, 2) - vec({-9 * std::cos(3 * u), -4 * std::sin(2 * u)})).norm());
    }
    return err;
  };
  EXPECT_GE(max_err(0.02) / max_err(0.01), 8.0);
}

TEST(ScalarOde, ClosedForms) {
  const auto grid = uniform_grid(0, 1, 1000);
  const auto zero = integrate_scalar_ode([](double, double) { return 0.0; }, 1.0, grid);
  for (double v : zero) EXPECT_EQ(v, 1.0);
  const auto expo = integrate_scalar_ode([](double, double y) { return y; }, 1.0, grid);
  EXPECT_NEAR(expo.back(), std::exp(1.0), 1e-8);
  const auto grid2 = uniform_grid(0, 6, 6000);
  const auto cosm1 = integrate_scalar_ode([](double u, double) { return -std::sin(u); }, 0.0, grid2);
  for (size_t k = 0; k < grid2.size(); ++k) EXPECT_NEAR(cosm1[k], std::cos(grid2[k]) - 1, 1e-8);
}

TEST(ScalarOde, FourthOrderConvergence) {
  auto err = [](int n) {
    const auto g = uniform_grid(0, 1, n);
    return std::abs(integrate_scalar_ode([](double, double y) { return y; }, 1.0, g).back() -
                    std::exp(1.0));
  };
  EXPECT_GE(err(20) / err(40), 12.0);
}

TEST(ScalarOde, Divergence) {
  const auto grid = uniform_grid(0, 2, 200);
  try {
    integrate_scalar_ode([](double, double y) { return y * y; }, 1.0, grid);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DivergentODE);
  }
}

TEST(LocateZeros, SineRoot) {
  const auto grid = uniform_grid(0.1, 6.2, 1000);
  std::vector<double> v;
  for (double u : grid) v.push_back(std::sin(u));
  const auto zs = locate_zeros(grid, v, ToleranceConfig{});
  ASSERT_EQ(zs.size(), 1u);
  EXPECT_FALSE(zs[0].tangential);
  EXPECT_NEAR(zs[0].u, std::numbers::pi, 1e-9);
}

TEST(LocateZeros, ConstantAndTangential) {
  const auto grid = uniform_grid(-1, 1, 200);
  std::vector<double> ones(grid.size(), 1.0), sq;
  EXPECT_TRUE(locate_zeros(grid, ones, ToleranceConfig{}).empty());
  for (double u : grid) sq.push_back(u * u);
  const auto zs = locate_zeros(grid, sq, ToleranceConfig{});
  ASSERT_EQ(zs.size(), 1u);
  EXPECT_TRUE(zs[0].tangential);
  EXPECT_NEAR(zs[0].u, 0.0, 1e-12);
}

TEST(LocateZeros, PeriodicCountsEachRootOnce) {
  const double two_pi = 2 * std::numbers::pi;
  const auto grid = uniform_grid(0, two_pi, 256);
  std::vector<double> v;
  for (double u : grid) v.push_back(std::sin(3 * u));  // zero exactly at both ends
  const auto zs = locate_zeros(grid, v, ToleranceConfig{}, true);
  int crossings = 0;
  for (const auto& z : zs) crossings += z.tangential ? 0 : 1;
  EXPECT_EQ(crossings, 6);
}

TEST(Tolerance, Validation) {
  ToleranceConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.refine_depth = 10;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = ToleranceConfig{};
  cfg.tol_zero = 0;
  EXPECT_THROW(cfg.validate(), Error);
}

TEST(GridSeriesCurve, ReExpandsBetweenSamples) {
  auto src = std::make_shared<AnalyticCurve>(2, [](const Series& t) {
    return SVec{cos(t), sin(2.0 * t)};
  });
  const auto grid = uniform_grid(0, 1, 20);
  std::vector<SVec> exps;
  for (double t : grid) exps.push_back(src->taylor(t, 16));
  GridSeriesCurve g(grid, exps, 16);
  const SVec a = g.taylor(0.4321, 6), b = src->taylor(0.4321, 6);
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k <= 6; ++k) EXPECT_NEAR(a[i][k], b[i][k], 1e-12);
}
