#pragma once

// Truncated bivariate power series sum c_ij x^i y^j, i + j <= N, used for the
// Blaschke apparatus of surfaces where the co-normal and its Laplacian need
// mixed partials up to fifth order.

#include <algorithm>
#include <cmath>
#include <vector>

namespace afocal {

class Series2 {
 public:
  Series2() : n_(0), c_(1, 0.0) {}
  explicit Series2(int order, double c0 = 0.0)
      : n_(order), c_(static_cast<size_t>(order + 1) * (order + 1), 0.0) {
    c_[0] = c0;
  }

  /// x0 + dx (var == 0) or y0 + dy (var == 1).
  static Series2 variable(int var, double x0, int order) {
    Series2 s(order, x0);
    if (order >= 1) s.at(var == 0 ? 1 : 0, var == 0 ? 0 : 1) = 1.0;
    return s;
  }

  int order() const { return n_; }
  double value() const { return c_[0]; }
  double coeff(int i, int j) const { return (i + j <= n_ && i >= 0 && j >= 0) ? c_[idx(i, j)] : 0.0; }
  double& at(int i, int j) { return c_[idx(i, j)]; }

  /// Mixed partial d^{i+j} / dx^i dy^j at the base point.
  double partial(int i, int j) const {
    double f = 1.0;
    for (int k = 2; k <= i; ++k) f *= k;
    for (int k = 2; k <= j; ++k) f *= k;
    return coeff(i, j) * f;
  }

  Series2 truncated(int order) const {
    Series2 s(order);
    for (int i = 0; i <= order; ++i)
      for (int j = 0; i + j <= order; ++j) s.at(i, j) = coeff(i, j);
    return s;
  }

  /// Partial derivative with respect to variable var, one order lower.
  Series2 d(int var) const {
    Series2 s(n_ > 0 ? n_ - 1 : 0);
    if (n_ == 0) return s;
    for (int i = 0; i <= n_ - 1; ++i) {
      for (int j = 0; i + j <= n_ - 1; ++j) {
        s.at(i, j) = var == 0 ? (i + 1) * coeff(i + 1, j) : (j + 1) * coeff(i, j + 1);
      }
    }
    return s;
  }

  double eval(double dx, double dy) const {
    double v = 0.0;
    double px = 1.0;
    for (int i = 0; i <= n_; ++i) {
      double py = 1.0;
      for (int j = 0; i + j <= n_; ++j) {
        v += coeff(i, j) * px * py;
        py *= dy;
      }
      px *= dx;
    }
    return v;
  }

  Series2 operator-() const {
    Series2 s = *this;
    for (double& v : s.c_) v = -v;
    return s;
  }

  Series2& operator+=(const Series2& o) { return combine(o, 1.0); }
  Series2& operator-=(const Series2& o) { return combine(o, -1.0); }
  Series2& operator+=(double v) {
    c_[0] += v;
    return *this;
  }
  Series2& operator-=(double v) {
    c_[0] -= v;
    return *this;
  }
  Series2& operator*=(double v) {
    for (double& x : c_) x *= v;
    return *this;
  }
  Series2& operator/=(double v) {
    for (double& x : c_) x /= v;
    return *this;
  }

  friend Series2 operator*(const Series2& a, const Series2& b) {
    const int n = std::min(a.n_, b.n_);
    Series2 r(n);
    for (int i1 = 0; i1 <= n; ++i1) {
      for (int j1 = 0; i1 + j1 <= n; ++j1) {
        const double av = a.coeff(i1, j1);
        if (av == 0.0) continue;
        for (int i2 = 0; i1 + j1 + i2 <= n; ++i2) {
          for (int j2 = 0; i1 + j1 + i2 + j2 <= n; ++j2) {
            r.at(i1 + i2, j1 + j2) += av * b.coeff(i2, j2);
          }
        }
      }
    }
    return r;
  }

  friend Series2 operator/(const Series2& a, const Series2& b) { return a * reciprocal(b); }

  friend Series2 operator+(Series2 a, const Series2& b) { return a += b; }
  friend Series2 operator-(Series2 a, const Series2& b) { return a -= b; }
  friend Series2 operator+(Series2 a, double v) { return a += v; }
  friend Series2 operator+(double v, Series2 a) { return a += v; }
  friend Series2 operator-(Series2 a, double v) { return a -= v; }
  friend Series2 operator-(double v, const Series2& a) { return (-a) += v; }
  friend Series2 operator*(Series2 a, double v) { return a *= v; }
  friend Series2 operator*(double v, Series2 a) { return a *= v; }
  friend Series2 operator/(Series2 a, double v) { return a /= v; }
  friend Series2 operator/(double v, const Series2& a) { return reciprocal(a) * v; }

  /// f(a) for a scalar function given its derivatives f^(k)(a0), k = 0..N.
  /// Exact because the non-constant part is nilpotent of degree N + 1.
  static Series2 apply(const Series2& a, const std::vector<double>& derivs) {
    const int n = a.n_;
    Series2 t = a;
    t.c_[0] = 0.0;
    Series2 result(n, derivs[0]);
    Series2 power(n, 1.0);
    double fact = 1.0;
    for (int k = 1; k <= n; ++k) {
      power = power * t;
      fact *= k;
      Series2 term = power;
      term *= derivs[k] / fact;
      result += term;
    }
    return result;
  }

  static Series2 reciprocal(const Series2& a) {
    std::vector<double> d(a.n_ + 1);
    double v = 1.0 / a.c_[0];
    for (int k = 0; k <= a.n_; ++k) {
      d[k] = v;
      v *= -(k + 1) / a.c_[0];
    }
    return apply(a, d);
  }

 private:
  size_t idx(int i, int j) const { return static_cast<size_t>(i) * (n_ + 1) + j; }

  Series2& combine(const Series2& o, double sign) {
    if (o.n_ < n_) *this = truncated(o.n_);
    for (int i = 0; i <= n_; ++i)
      for (int j = 0; i + j <= n_; ++j) at(i, j) += sign * o.coeff(i, j);
    return *this;
  }

  int n_;
  std::vector<double> c_;
};

inline Series2 exp(const Series2& a) {
  std::vector<double> d(a.order() + 1, std::exp(a.value()));
  return Series2::apply(a, d);
}

inline Series2 sin(const Series2& a) {
  std::vector<double> d(a.order() + 1);
  const double s = std::sin(a.value()), c = std::cos(a.value());
  const double cyc[4] = {s, c, -s, -c};
  for (int k = 0; k <= a.order(); ++k) d[k] = cyc[k % 4];
  return Series2::apply(a, d);
}

inline Series2 cos(const Series2& a) {
  std::vector<double> d(a.order() + 1);
  const double s = std::sin(a.value()), c = std::cos(a.value());
  const double cyc[4] = {c, -s, -c, s};
  for (int k = 0; k <= a.order(); ++k) d[k] = cyc[k % 4];
  return Series2::apply(a, d);
}

/// a^p for a[0] > 0.
inline Series2 pow(const Series2& a, double p) {
  std::vector<double> d(a.order() + 1);
  double coef = 1.0;
  for (int k = 0; k <= a.order(); ++k) {
    d[k] = coef * std::pow(a.value(), p - k);
    coef *= (p - k);
  }
  return Series2::apply(a, d);
}

inline Series2 sqrt(const Series2& a) { return pow(a, 0.5); }

inline Series2 abs(const Series2& a) { return a.value() < 0 ? -a : a; }

}  // namespace afocal
