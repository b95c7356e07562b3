#pragma once

// Closed-form curve sources used by fixtures, tests and the CLI.

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "afocal/numkit/curve_source.hpp"
#include "afocal/numkit/errors.hpp"

namespace afocal::curves {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// A source together with its natural parameter interval.
struct NamedCurve {
  CurvePtr source;
  double t0 = 0.0;
  double t1 = kTwoPi;
  bool periodic = true;
};

/// c[0] + sum_k c[2k-1] cos(k t) + c[2k] sin(k t)
inline Series trig_poly(const std::vector<double>& c, const Series& t) {
  Series r(t.order(), c.empty() ? 0.0 : c[0]);
  for (size_t i = 1; i < c.size(); i += 2) {
    const double k = static_cast<double>((i + 1) / 2);
    Series s, co;
    sincos(k * t, s, co);
    r += c[i] * co;
    if (i + 1 < c.size()) r += c[i + 1] * s;
  }
  return r;
}

inline Series poly(const std::vector<double>& c, const Series& t) {
  Series r(t.order(), 0.0);
  for (size_t i = c.size(); i-- > 0;) r = r * t + c[i];
  return r;
}

inline NamedCurve circle(double radius = 1.0) {
  return {std::make_shared<AnalyticCurve>(2, [radius](const Series& t) {
            return SVec{radius * cos(t), radius * sin(t)};
          })};
}

inline NamedCurve ellipse(double a, double b) {
  if (!(a > 0 && b > 0)) throw Error(ErrorKind::SpecError, "ellipse semi-axes must be positive");
  return {std::make_shared<AnalyticCurve>(2, [a, b](const Series& t) {
            return SVec{a * cos(t), b * sin(t)};
          })};
}

/// Star-shaped oval r(t) (cos t, sin t) with r a trigonometric polynomial.
inline NamedCurve fourier_oval(std::vector<double> radial) {
  if (radial.empty() || !(radial[0] > 0)) {
    throw Error(ErrorKind::SpecError, "radial_coeffs must start with a positive mean radius");
  }
  return {std::make_shared<AnalyticCurve>(2, [radial](const Series& t) {
            const Series r = trig_poly(radial, t);
            Series s, c;
            sincos(t, s, c);
            return SVec{r * c, r * s};
          })};
}

/// Convex oval with Euclidean support function h(t) (a trigonometric
/// polynomial): G = h (cos t, sin t) + h' (-sin t, cos t). Strictly convex
/// when h + h'' > 0.
inline NamedCurve support_oval(std::vector<double> support) {
  if (support.empty() || !(support[0] > 0)) {
    throw Error(ErrorKind::SpecError, "support_coeffs must start with a positive mean width");
  }
  return {std::make_shared<AnalyticCurve>(2, [support](const Series& t) {
            // one extra order because h' is needed to the full order of t
            const Series te = Series::variable(t.value(), t.order() + 1);
            const Series h = trig_poly(support, te);
            const Series hp = h.d();
            Series s, c;
            sincos(t, s, c);
            const Series h0 = h.truncated(t.order());
            return SVec{h0 * c - hp * s, h0 * s + hp * c};
          })};
}

inline NamedCurve parametric_poly(std::vector<double> x, std::vector<double> y, double t0 = -1.0,
                                  double t1 = 1.0) {
  return {std::make_shared<AnalyticCurve>(
              2, [x, y](const Series& t) { return SVec{poly(x, t), poly(y, t)}; }),
          t0, t1, false};
}

inline NamedCurve helix(double radius = 1.0, double pitch = 1.0, double t0 = 0.0,
                        double t1 = kTwoPi) {
  return {std::make_shared<AnalyticCurve>(3,
                                          [radius, pitch](const Series& t) {
                                            return SVec{radius * cos(t), radius * sin(t),
                                                        pitch * t};
                                          }),
          t0, t1, false};
}

/// Spatial curve with trigonometric-polynomial coordinates plus optional
/// linear drift per coordinate.
inline NamedCurve trig3(std::vector<double> x, std::vector<double> y, std::vector<double> z,
                        std::vector<double> drift = {0, 0, 0}, double t0 = 0.0,
                        double t1 = kTwoPi) {
  const bool periodic = drift[0] == 0 && drift[1] == 0 && drift[2] == 0;
  return {std::make_shared<AnalyticCurve>(3,
                                          [x, y, z, drift](const Series& t) {
                                            return SVec{trig_poly(x, t) + drift[0] * t,
                                                        trig_poly(y, t) + drift[1] * t,
                                                        trig_poly(z, t) + drift[2] * t};
                                          }),
          t0, t1, periodic};
}

inline NamedCurve poly3(std::vector<double> x, std::vector<double> y, std::vector<double> z,
                        double t0 = -1.0, double t1 = 1.0) {
  return {std::make_shared<AnalyticCurve>(
              3, [x, y, z](const Series& t) { return SVec{poly(x, t), poly(y, t), poly(z, t)}; }),
          t0, t1, false};
}

}  // namespace afocal::curves
