#pragma once

#include <cmath>
#include <numbers>

#include "afocal/blaschke/apparatus.hpp"

namespace afocal::blaschke {

inline Hypersurface planar_curve(const curves::NamedCurve& c, std::string kind = "curve") {
  Hypersurface s;
  s.n = 1;
  s.kind = std::move(kind);
  s.curve = c;
  return s;
}

inline Hypersurface unit_circle() { return planar_curve(curves::circle(1.0), "circle"); }

/// y = x^2 / 2 on [-1, 1]: an improper affine circle.
inline Hypersurface parabola() {
  return planar_curve(curves::parametric_poly({0, 1}, {0, 0, 0.5}), "parabola");
}

/// (a cos u cos v, b sin u cos v, c sin v), v in [-vmax, vmax].
inline Hypersurface ellipsoid_patch(double a, double b, double c, double vmax = 1.2) {
  if (!(a > 0 && b > 0 && c > 0)) throw Error(ErrorKind::SpecError, "ellipsoid axes must be positive");
  Hypersurface s;
  s.n = 2;
  s.kind = a == b && b == c ? "sphere" : "ellipsoid";
  s.patch = [a, b, c](const Series2& u, const Series2& v) {
    const Series2 cv = cos(v);
    return SVec2{a * cos(u) * cv, b * sin(u) * cv, c * sin(v)};
  };
  s.u0 = 0.0;
  s.u1 = 2.0 * std::numbers::pi;
  s.v0 = -vmax;
  s.v1 = vmax;
  s.periodic_u = true;
  return s;
}

inline Hypersurface sphere_patch(double r = 1.0) { return ellipsoid_patch(r, r, r); }

/// Graph z = (x^2 + y^2) / 2 + c3 x^3 over [-w, w]^2.
inline Hypersurface convex_graph(double c3 = 0.0, double w = 1.0) {
  Hypersurface s;
  s.n = 2;
  s.kind = c3 == 0.0 ? "paraboloid" : "convex_graph";
  s.patch = [c3](const Series2& x, const Series2& y) {
    return SVec2{x, y, 0.5 * (x * x + y * y) + c3 * x * x * x};
  };
  s.u0 = s.v0 = -w;
  s.u1 = s.v1 = w;
  return s;
}

inline Hypersurface paraboloid() { return convex_graph(0.0); }

}  // namespace afocal::blaschke
