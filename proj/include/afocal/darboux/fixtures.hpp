#pragma once

// Curves on surfaces with known Darboux invariants, shared by the tests, the
// acceptance suite and `afocal fixtures list`.

#include <cmath>
#include <string>
#include <vector>

#include "afocal/darboux/surface.hpp"

namespace afocal::darboux {

/// Circle z = h on the unit sphere, angular parameter.
inline CurveOnSurface latitude_on_sphere(double h = 0.6, const ToleranceConfig& cfg = {}) {
  if (!(std::abs(h) < 1.0)) throw Error(ErrorKind::SpecError, "latitude height must lie in (-1, 1)");
  const double r = std::sqrt(1.0 - h * h);
  curves::NamedCurve c{std::make_shared<AnalyticCurve>(3, [r, h](const Series& t) {
    return SVec{r * cos(t), r * sin(t), Series(t.order(), h)};
  })};
  return on_implicit(sphere(), c, 256, cfg, "sphere");
}

/// (cos t, sin t, 1) on the cone over the unit circle with apex 0.
inline CurveOnSurface circle_on_cone() {
  const ConeSurface cone = cone_over(curves::circle(), VecD::Zero(3));
  return on_cone(cone, [](const Series& t) { return t; },
                 [](const Series& t) { return Series(t.order(), 1.0); }, 0.0, curves::kTwoPi, true);
}

/// Radial projection of (cos t, sin t, c + a sin(k t)) onto the ellipsoid.
inline CurveOnSurface wavy_on_ellipsoid(double ax, double by, double cz, double height, double amp,
                                        int k, const ToleranceConfig& cfg = {}) {
  const ImplicitPoly e = ellipsoid(ax, by, cz);
  curves::NamedCurve dir{std::make_shared<AnalyticCurve>(3, [height, amp, k](const Series& t) {
    return SVec{cos(t), sin(t), height + amp * sin(static_cast<double>(k) * t)};
  })};
  return on_implicit(e, radial_projection(e, dir), 256, cfg, ax == by && by == cz ? "sphere" : "ellipsoid");
}

/// Latitude z = 0.6 perturbed to 0.6 + 0.1 sin 3t and projected back to the
/// unit sphere; a non-planar spherical curve.
inline CurveOnSurface wavy_latitude(const ToleranceConfig& cfg = {}) {
  const ImplicitPoly s = sphere();
  curves::NamedCurve dir{std::make_shared<AnalyticCurve>(3, [](const Series& t) {
    return SVec{0.8 * cos(t), 0.8 * sin(t), 0.6 + 0.1 * sin(3.0 * t)};
  })};
  return on_implicit(s, radial_projection(s, dir), 256, cfg, "sphere");
}

/// Generic closed curve on the ellipsoid (1, 1.3, 0.8).
inline CurveOnSurface generic_on_ellipsoid(const ToleranceConfig& cfg = {}) {
  return wavy_on_ellipsoid(1.0, 1.3, 0.8, 0.3, 0.25, 2, cfg);
}

/// Curve s = 1 + 0.2 sin t on the cone over the unit circle, apex 0.
inline CurveOnSurface helical_on_cone() {
  const ConeSurface cone = cone_over(curves::circle(), VecD::Zero(3));
  return on_cone(cone, [](const Series& t) { return t; },
                 [](const Series& t) { return 1.0 + 0.2 * sin(t); }, 0.0, curves::kTwoPi, true);
}

/// Ellipse (0.8 cos t, 0.6 sin t) lifted to the convex cubic graph
/// z = (x^2 + 2 y^2) / 2 + 0.1 x^3 + 0.2 x y^2. Neither a quadric nor a cone, so
/// its focal lines have a genuine edge of regression.
inline CurveOnSurface ellipse_on_cubic_graph(const ToleranceConfig& cfg = {}) {
  const ImplicitPoly g({{0.5, 2, 0, 0}, {1.0, 0, 2, 0}, {0.1, 3, 0, 0}, {0.2, 1, 2, 0}, {-1.0, 0, 0, 1}});
  curves::NamedCurve c{std::make_shared<AnalyticCurve>(3, [](const Series& t) {
    const Series x = 0.8 * cos(t), y = 0.6 * sin(t);
    return SVec{x, y, 0.5 * x * x + y * y + 0.1 * x * x * x + 0.2 * x * y * y};
  })};
  return on_implicit(g, c, 256, cfg, "implicit_poly");
}

/// phi = (G', [G - O, G']) in affine arc-length of the planar oval G, on the
/// cone over phi with apex 0. Here sigma is constant and tau is proportional
/// to rho'(G), so flattening points are vertices of G. Written in the
/// original parameter: G' = G_t / w^(1/3), w = [G_t, G_tt].
inline CurveOnSurface flattening_curve(const curves::NamedCurve& oval, const VecD& origin) {
  const CurvePtr g = oval.source;
  const VecD o = origin;
  auto phi = std::make_shared<AnalyticCurve>(3, [g, o](const Series& t) {
    const SVec p = g->taylor(t.value(), t.order() + 2);
    const SVec p1 = d(p);
    const Series w = det2(p1, d(p1));
    const Series s = pow(w, -1.0 / 3.0);
    const SVec q = compose(truncated(p, t.order()), t);
    const SVec q1 = compose(truncated(p1, t.order()), t);
    const Series ss = s.compose(t);
    const SVec rel{q[0] - o[0], q[1] - o[1]};
    return SVec{q1[0] * ss, q1[1] * ss, det2(rel, q1) * ss};
  });
  const ConeSurface cone{VecD::Zero(3), phi};
  return on_cone(cone, [](const Series& t) { return t; },
                 [](const Series& t) { return Series(t.order(), 1.0); }, oval.t0, oval.t1,
                 oval.periodic);
}

struct FixtureInfo {
  std::string name;
  std::string description;
};

inline std::vector<FixtureInfo> fixture_catalog() {
  return {
      {"latitude_on_sphere", "circle z = 0.6 on the unit sphere; O = (0,0,1/0.6), sheet is the polar axis"},
      {"circle_on_cone", "(cos t, sin t, 1) on the cone x^2 + y^2 = z^2; O = 0, Q = (0,0,1)"},
      {"wavy_latitude", "z = 0.6 + 0.1 sin 3t projected to the unit sphere; mu not constant"},
      {"generic_on_ellipsoid", "non-planar closed curve on the ellipsoid (1, 1.3, 0.8)"},
      {"ellipse_on_cubic_graph", "ellipse lifted to z = (x^2 + 2y^2)/2 + 0.1x^3 + 0.2xy^2; cuspidal edges and swallowtails"},
      {"helical_on_cone", "s = 1 + 0.2 sin t on the cone over the unit circle; mu not constant"},
      {"flattening_curve", "(G', z) over the oval with support 1 + 0.1 cos 3t; at least six zeros of tau"},
  };
}

inline CurveOnSurface fixture_by_name(const std::string& name, const ToleranceConfig& cfg = {}) {
  if (name == "latitude_on_sphere") return latitude_on_sphere(0.6, cfg);
  if (name == "circle_on_cone") return circle_on_cone();
  if (name == "wavy_latitude") return wavy_latitude(cfg);
  if (name == "generic_on_ellipsoid") return generic_on_ellipsoid(cfg);
  if (name == "ellipse_on_cubic_graph") return ellipse_on_cubic_graph(cfg);
  if (name == "helical_on_cone") return helical_on_cone();
  if (name == "flattening_curve") {
    return flattening_curve(curves::support_oval({1, 0, 0, 0, 0, 0.1}), VecD::Zero(2));
  }
  throw Error(ErrorKind::SpecError, "unknown fixture '" + name + "'");
}

}  // namespace afocal::darboux
