#pragma once

// Truncated univariate power series  c0 + c1 e + ... + cN e^N  around a base
// point. Arithmetic on these carries exact derivative jets through every
// formula, which is how the pipelines obtain third derivatives of invariants
// (seventh derivatives of position) without finite differences.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <vector>

namespace afocal {

class Series {
 public:
  Series() : c_(1, 0.0) {}
  explicit Series(int order, double c0 = 0.0) : c_(static_cast<size_t>(order) + 1, 0.0) {
    c_[0] = c0;
  }

  /// The independent variable x0 + e.
  static Series variable(double x0, int order) {
    Series s(order, x0);
    if (order >= 1) s.c_[1] = 1.0;
    return s;
  }

  static Series from_coeffs(std::vector<double> c) {
    Series s;
    s.c_ = std::move(c);
    if (s.c_.empty()) s.c_.push_back(0.0);
    return s;
  }

  int order() const { return static_cast<int>(c_.size()) - 1; }
  double operator[](int k) const { return k < static_cast<int>(c_.size()) ? c_[k] : 0.0; }
  double& operator[](int k) { return c_[k]; }
  double value() const { return c_[0]; }
  const std::vector<double>& coeffs() const { return c_; }

  /// k-th derivative at the base point.
  double derivative(int k) const {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return (*this)[k] * f;
  }

  Series truncated(int order) const {
    Series s(order);
    for (int k = 0; k <= order && k < static_cast<int>(c_.size()); ++k) s.c_[k] = c_[k];
    return s;
  }

  /// d/de, one order lower.
  Series d() const {
    if (order() == 0) return Series(0);
    Series s(order() - 1);
    for (int k = 1; k <= order(); ++k) s.c_[k - 1] = k * c_[k];
    return s;
  }

  /// Antiderivative with constant term c0, one order higher.
  Series integral(double c0 = 0.0) const {
    Series s(order() + 1, c0);
    for (int k = 0; k <= order(); ++k) s.c_[k + 1] = c_[k] / (k + 1);
    return s;
  }

  double eval(double e) const {
    double v = 0.0;
    for (int k = order(); k >= 0; --k) v = v * e + c_[k];
    return v;
  }

  /// Re-expansion around base + e. Coefficients above order - margin lose
  /// accuracy through truncation, so callers keep a margin.
  Series shifted(double e) const {
    const int n = order();
    Series s(n);
    if (e == 0.0) return *this;
    // Repeated synthetic division (Taylor shift).
    std::vector<double> a = c_;
    for (int j = 0; j <= n; ++j) {
      for (int k = n - 1; k >= j; --k) a[k] += e * a[k + 1];
    }
    s.c_ = std::move(a);
    return s;
  }

  /// this(inner), where this is an expansion in a variable d and inner(e) is
  /// the displacement d(e) with inner[0] == 0 assumed (the constant is ignored).
  Series compose(const Series& inner) const {
    const int n = std::min(order(), inner.order());
    Series d = inner.truncated(n);
    d.c_[0] = 0.0;
    Series r(n, c_[order()]);
    for (int k = order() - 1; k >= 0; --k) {
      r = r * d;
      r.c_[0] += c_[k];
    }
    return r;
  }

  Series operator-() const {
    Series s = *this;
    for (double& v : s.c_) v = -v;
    return s;
  }

  Series& operator+=(const Series& o) {
    resize_min(o);
    for (size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
    return *this;
  }
  Series& operator-=(const Series& o) {
    resize_min(o);
    for (size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
    return *this;
  }
  Series& operator+=(double v) {
    c_[0] += v;
    return *this;
  }
  Series& operator-=(double v) {
    c_[0] -= v;
    return *this;
  }
  Series& operator*=(double v) {
    for (double& x : c_) x *= v;
    return *this;
  }
  Series& operator/=(double v) {
    for (double& x : c_) x /= v;
    return *this;
  }

  friend Series operator*(const Series& a, const Series& b) {
    const int n = std::min(a.order(), b.order());
    Series r(n);
    for (int i = 0; i <= n; ++i) {
      const double ai = a.c_[i];
      if (ai == 0.0) continue;
      for (int j = 0; i + j <= n; ++j) r.c_[i + j] += ai * b.c_[j];
    }
    return r;
  }

  friend Series operator/(const Series& a, const Series& b) {
    const int n = std::min(a.order(), b.order());
    Series r(n);
    const double b0 = b.c_[0];
    for (int k = 0; k <= n; ++k) {
      double s = a.c_[k];
      for (int j = 1; j <= k; ++j) s -= b.c_[j] * r.c_[k - j];
      r.c_[k] = s / b0;
    }
    return r;
  }

  friend Series operator+(Series a, const Series& b) { return a += b; }
  friend Series operator-(Series a, const Series& b) { return a -= b; }
  friend Series operator+(Series a, double v) { return a += v; }
  friend Series operator+(double v, Series a) { return a += v; }
  friend Series operator-(Series a, double v) { return a -= v; }
  friend Series operator-(double v, const Series& a) { return (-a) += v; }
  friend Series operator*(Series a, double v) { return a *= v; }
  friend Series operator*(double v, Series a) { return a *= v; }
  friend Series operator/(Series a, double v) { return a /= v; }
  friend Series operator/(double v, const Series& a) { return Series(a.order(), v) / a; }

 private:
  void resize_min(const Series& o) {
    if (o.c_.size() < c_.size()) c_.resize(o.c_.size());
  }

  std::vector<double> c_;
};

inline Series exp(const Series& a) {
  const int n = a.order();
  Series r(n, std::exp(a[0]));
  for (int k = 1; k <= n; ++k) {
    double s = 0.0;
    for (int j = 1; j <= k; ++j) s += j * a[j] * r[k - j];
    r[k] = s / k;
  }
  return r;
}

inline Series log(const Series& a) {
  const int n = a.order();
  Series r(n, std::log(a[0]));
  for (int k = 1; k <= n; ++k) {
    double s = k * a[k];
    for (int j = 1; j < k; ++j) s -= j * r[j] * a[k - j];
    r[k] = s / (k * a[0]);
  }
  return r;
}

inline void sincos(const Series& a, Series& s, Series& c) {
  const int n = a.order();
  s = Series(n, std::sin(a[0]));
  c = Series(n, std::cos(a[0]));
  for (int k = 1; k <= n; ++k) {
    double ss = 0.0, cc = 0.0;
    for (int j = 1; j <= k; ++j) {
      ss += j * a[j] * c[k - j];
      cc -= j * a[j] * s[k - j];
    }
    s[k] = ss / k;
    c[k] = cc / k;
  }
}

inline Series sin(const Series& a) {
  Series s, c;
  sincos(a, s, c);
  return s;
}

inline Series cos(const Series& a) {
  Series s, c;
  sincos(a, s, c);
  return c;
}

/// a^p for a[0] > 0.
inline Series pow(const Series& a, double p) {
  const int n = a.order();
  Series r(n, std::pow(a[0], p));
  for (int k = 1; k <= n; ++k) {
    double s = 0.0;
    for (int j = 1; j <= k; ++j) s += (p * j - (k - j)) * a[j] * r[k - j];
    r[k] = s / (k * a[0]);
  }
  return r;
}

inline Series sqrt(const Series& a) { return pow(a, 0.5); }

/// |a| as a series; valid away from a[0] == 0.
inline Series abs(const Series& a) { return a[0] < 0 ? -a : a; }

/// sign(a) |a|^p, the odd extension used for signed cube roots.
inline Series signed_pow(const Series& a, double p) {
  return a[0] < 0 ? -pow(-a, p) : pow(a, p);
}

inline Series hypot_series(const Series& a, const Series& b) { return sqrt(a * a + b * b); }

}  // namespace afocal
