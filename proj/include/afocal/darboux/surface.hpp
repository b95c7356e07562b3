#pragma once

// Surfaces of R^3 and curves lying in them. A curve on a surface is carried as
// two curve sources over the same parameter: the position phi(t) and a
// (not necessarily unit) normal n(t) of the surface along it.

#include <array>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "afocal/curves/library.hpp"
#include "afocal/numkit.hpp"

namespace afocal::darboux {

/// Polynomial F(x, y, z) = sum c x^i y^j z^k; the surface is F = 0.
class ImplicitPoly {
 public:
  struct Term {
    double c;
    int i, j, k;
  };

  ImplicitPoly() = default;
  explicit ImplicitPoly(std::vector<Term> terms) : terms_(std::move(terms)) {}

  const std::vector<Term>& terms() const { return terms_; }

  template <class S>
  S eval(const std::vector<S>& p) const {
    S r = p[0] * 0.0;
    for (const Term& t : terms_) r += t.c * mono(p, t.i, t.j, t.k);
    return r;
  }

  template <class S>
  std::vector<S> gradient(const std::vector<S>& p) const {
    std::vector<S> g(3, p[0] * 0.0);
    for (const Term& t : terms_) {
      if (t.i > 0) g[0] += (t.c * t.i) * mono(p, t.i - 1, t.j, t.k);
      if (t.j > 0) g[1] += (t.c * t.j) * mono(p, t.i, t.j - 1, t.k);
      if (t.k > 0) g[2] += (t.c * t.k) * mono(p, t.i, t.j, t.k - 1);
    }
    return g;
  }

  double eval(const VecD& p) const {
    return eval(std::vector<double>{p[0], p[1], p[2]});
  }
  VecD gradient(const VecD& p) const {
    const auto g = gradient(std::vector<double>{p[0], p[1], p[2]});
    return vec({g[0], g[1], g[2]});
  }

  /// Surface of the form sum_i x_i^2 / a_i^2 = 1 (sphere, ellipsoid), which
  /// allows radial projection of direction curves.
  bool is_central_quadric() const { return !semi_axes_.empty(); }
  const std::vector<double>& semi_axes() const { return semi_axes_; }
  void set_semi_axes(std::vector<double> a) { semi_axes_ = std::move(a); }

 private:
  template <class S>
  static S mono(const std::vector<S>& p, int i, int j, int k) {
    S r = p[0] * 0.0 + 1.0;
    for (int n = 0; n < i; ++n) r = r * p[0];
    for (int n = 0; n < j; ++n) r = r * p[1];
    for (int n = 0; n < k; ++n) r = r * p[2];
    return r;
  }

  std::vector<Term> terms_;
  std::vector<double> semi_axes_;
};

inline ImplicitPoly ellipsoid(double a, double b, double c) {
  if (!(a > 0 && b > 0 && c > 0)) throw Error(ErrorKind::SpecError, "ellipsoid axes must be positive");
  ImplicitPoly f({{1 / (a * a), 2, 0, 0}, {1 / (b * b), 0, 2, 0}, {1 / (c * c), 0, 0, 2}, {-1, 0, 0, 0}});
  f.set_semi_axes({a, b, c});
  return f;
}

inline ImplicitPoly sphere(double r = 1.0) { return ellipsoid(r, r, r); }

/// Cone apex + s (B(theta) - apex) over a base curve B.
struct ConeSurface {
  VecD apex;
  CurvePtr base;

  /// Point and normal expansions along surface coordinates (theta(t), s(t)).
  SVec point(const Series& theta, const Series& s) const {
    const SVec b = compose_at(theta);
    SVec p;
    for (int i = 0; i < 3; ++i) p.push_back(apex[i] + s * (b[i] - apex[i]));
    return p;
  }
  /// Normal along theta(t); one order lower than theta.
  SVec normal(const Series& theta) const {
    const SVec b = compose_at(theta);
    SVec rel;
    for (int i = 0; i < 3; ++i) rel.push_back(b[i] - apex[i]);
    return cross(truncated(rel, theta.order() - 1), d(b));
  }

 private:
  SVec compose_at(const Series& theta) const {
    return compose(base->taylor(theta.value(), theta.order()), theta);
  }
};

/// Planar base curves c are placed at height one above the apex: B = apex + (c, 1).
inline ConeSurface cone_over(const curves::NamedCurve& base, const VecD& apex) {
  if (base.source->dim() == 3) return {apex, base.source};
  const VecD ap = apex;
  auto lifted = std::make_shared<DerivedCurve>(base.source, 3, 0, [ap](const SVec& c, double) {
    return SVec{c[0] + ap[0], c[1] + ap[1], Series(c[0].order(), ap[2] + 1.0)};
  });
  return {apex, lifted};
}

struct CurveOnSurface {
  CurvePtr curve;
  CurvePtr normal;
  double t0 = 0.0;
  double t1 = curves::kTwoPi;
  bool periodic = true;
  double containment_residual = 0.0;
  std::string surface_kind;
};

/// Curve given in R^3 on an implicit surface; the containment residual is
/// max |F| / |grad F| over the sample grid.
inline CurveOnSurface on_implicit(const ImplicitPoly& f, const curves::NamedCurve& c, int samples,
                                  const ToleranceConfig& cfg, std::string kind = "implicit_poly") {
  CurveOnSurface out;
  out.curve = c.source;
  out.t0 = c.t0;
  out.t1 = c.t1;
  out.periodic = c.periodic;
  out.surface_kind = std::move(kind);
  const ImplicitPoly fc = f;
  const CurvePtr src = c.source;
  out.normal = std::make_shared<DerivedCurve>(src, 3, 0, [fc](const SVec& p, double) {
    return fc.gradient(p);
  });
  for (double t : uniform_grid(c.t0, c.t1, samples)) {
    const VecD p = src->position(t);
    const double g = fc.gradient(p).norm();
    if (!(g > 0)) throw PointError(ErrorKind::DegeneratePoint, t, "surface gradient vanishes");
    out.containment_residual = std::max(out.containment_residual, std::abs(fc.eval(p)) / g);
  }
  if (!(out.containment_residual < cfg.tol_residual)) {
    throw Error(ErrorKind::Containment, "curve leaves the surface: residual " +
                                            std::to_string(out.containment_residual));
  }
  return out;
}

/// Radial projection s(t) d(t) of a direction curve onto F = 0: closed form
/// on sum x_i^2 / a_i^2 = 1, otherwise Newton's method on the series s (the
/// surface must be star-shaped about 0 along d, with the root near s = 1).
inline curves::NamedCurve radial_projection(const ImplicitPoly& f, const curves::NamedCurve& dir) {
  if (!f.is_central_quadric()) {
    auto src = std::make_shared<DerivedCurve>(dir.source, 3, 0, [f](const SVec& p, double t) {
      auto along = [&](const Series& s) {
        const SVec q{s * p[0], s * p[1], s * p[2]};
        const auto g = f.gradient(q);
        return std::pair{f.eval(q), g[0] * p[0] + g[1] * p[1] + g[2] * p[2]};
      };
      const int order = p[0].order();
      Series s(order, 1.0);
      for (int it = 0; it < 60; ++it) {
        const auto [v, dv] = along(Series(0, s.value()));
        if (!(std::abs(dv.value()) > 0)) break;
        const double step = v.value() / dv.value();
        s[0] -= step;
        if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(s.value()))) break;
      }
      if (!(s.value() > 0) || std::abs(f.eval(std::vector<double>{s.value() * p[0].value(), s.value() * p[1].value(),
                                                                   s.value() * p[2].value()})) > 1e-10) {
        throw PointError(ErrorKind::Containment, t, "radial projection found no root on the ray");
      }
      // each step doubles the number of correct coefficients
      for (int k = 1; k <= 2 * (order + 1); k *= 2) {
        const auto [v, dv] = along(s);
        s = s - v / dv;
      }
      return SVec{s * p[0], s * p[1], s * p[2]};
    });
    return {src, dir.t0, dir.t1, dir.periodic};
  }
  const auto a = f.semi_axes();
  auto src = std::make_shared<DerivedCurve>(dir.source, 3, 0, [a](const SVec& p, double) {
    Series q(p[0].order(), 0.0);
    for (int i = 0; i < 3; ++i) q += (p[i] * p[i]) / (a[i] * a[i]);
    const Series s = pow(q, -0.5);
    return SVec{p[0] * s, p[1] * s, p[2] * s};
  });
  return {src, dir.t0, dir.t1, dir.periodic};
}

/// Curve on a cone through surface coordinates theta(t), s(t).
inline CurveOnSurface on_cone(const ConeSurface& cone, std::function<Series(const Series&)> theta,
                              std::function<Series(const Series&)> s, double t0, double t1,
                              bool periodic) {
  CurveOnSurface out;
  out.t0 = t0;
  out.t1 = t1;
  out.periodic = periodic;
  out.surface_kind = "cone";
  out.curve = std::make_shared<AnalyticCurve>(3, [cone, theta, s](const Series& t) {
    return cone.point(theta(t), s(t));
  });
  out.normal = std::make_shared<AnalyticCurve>(3, [cone, theta](const Series& t) {
    return cone.normal(theta(Series::variable(t.value(), t.order() + 1)));
  });
  return out;
}

/// (A phi + b, A^-T n): the same configuration after an affine map.
inline CurveOnSurface transform(const CurveOnSurface& c, const MatD& a, const VecD& b) {
  CurveOnSurface out = c;
  out.curve = affine_image(c.curve, a, b);
  out.normal = affine_image(c.normal, a.inverse().transpose(), VecD::Zero(3));
  return out;
}

}  // namespace afocal::darboux
