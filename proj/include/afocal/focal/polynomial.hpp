#pragma once

// Bivariate polynomials in (a, b) with exact rational coefficients.

#include <gmpxx.h>

#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "afocal/numkit/errors.hpp"

namespace afocal::focal {

inline constexpr double kDenominatorCap = 1e12;

/// Best rational approximation of x with denominator <= cap (continued fractions).
inline mpq_class to_rational(double x, double cap = kDenominatorCap) {
  if (!std::isfinite(x)) throw Error(ErrorKind::InvalidConfig, "non-finite polynomial entry");
  const mpq_class exact(x);
  if (exact.get_den() <= cap) return exact;
  const mpz_class maxden(static_cast<unsigned long>(cap));
  mpz_class p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  mpz_class n = exact.get_num(), d = exact.get_den();
  while (true) {
    mpz_class a;
    mpz_fdiv_q(a.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    const mpz_class q2 = q0 + a * q1;
    if (q2 > maxden) break;
    const mpz_class p2 = p0 + a * p1;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    const mpz_class r = n - a * d;
    n = d;
    d = r;
    if (d == 0) break;
  }
  // semiconvergent check
  const mpz_class k = (maxden - q0) / q1;
  const mpq_class c1(p1, q1), c2(p0 + k * p1, q0 + k * q1);
  mpq_class r1 = c1, r2 = c2;
  r1.canonicalize();
  r2.canonicalize();
  return abs(r2 - exact) < abs(r1 - exact) ? r2 : r1;
}

/// Sum of c_ij a^i b^j; zero coefficients are not stored.
class Poly2 {
 public:
  using Key = std::pair<int, int>;

  Poly2() = default;
  explicit Poly2(const mpq_class& c) { add({0, 0}, c); }
  static Poly2 a() { return term(1, 0); }
  static Poly2 b() { return term(0, 1); }
  static Poly2 term(int i, int j, const mpq_class& c = 1) {
    Poly2 p;
    p.add({i, j}, c);
    return p;
  }

  const std::map<Key, mpq_class>& coeffs() const { return c_; }
  mpq_class coeff(int i, int j) const {
    const auto it = c_.find({i, j});
    return it == c_.end() ? mpq_class(0) : it->second;
  }
  bool is_zero() const { return c_.empty(); }
  int degree() const {
    int d = -1;
    for (const auto& [k, v] : c_) d = std::max(d, k.first + k.second);
    return d;
  }

  Poly2& operator+=(const Poly2& o) {
    for (const auto& [k, v] : o.c_) add(k, v);
    return *this;
  }
  Poly2& operator-=(const Poly2& o) {
    for (const auto& [k, v] : o.c_) add(k, -v);
    return *this;
  }
  friend Poly2 operator+(Poly2 x, const Poly2& y) { return x += y; }
  friend Poly2 operator-(Poly2 x, const Poly2& y) { return x -= y; }
  friend Poly2 operator-(const Poly2& x) { return Poly2() - x; }
  friend Poly2 operator*(const Poly2& x, const Poly2& y) {
    Poly2 r;
    for (const auto& [kx, vx] : x.c_)
      for (const auto& [ky, vy] : y.c_) r.add({kx.first + ky.first, kx.second + ky.second}, vx * vy);
    return r;
  }
  friend Poly2 operator*(const mpq_class& s, const Poly2& x) { return Poly2(s) * x; }
  friend bool operator==(const Poly2& x, const Poly2& y) { return x.c_ == y.c_; }

  double eval(double av, double bv) const {
    double s = 0.0;
    for (const auto& [k, v] : c_) s += v.get_d() * std::pow(av, k.first) * std::pow(bv, k.second);
    return s;
  }

  /// p(x(a, b), y(a, b)), exact.
  Poly2 substitute(const Poly2& x, const Poly2& y) const {
    Poly2 r;
    for (const auto& [k, v] : c_) {
      Poly2 t(v);
      for (int i = 0; i < k.first; ++i) t = t * x;
      for (int j = 0; j < k.second; ++j) t = t * y;
      r += t;
    }
    return r;
  }

  /// Coefficients of p(a, b0) in a, ascending.
  std::vector<double> in_a(double b0) const {
    std::vector<double> r(static_cast<size_t>(std::max(degree(), 0)) + 1, 0.0);
    for (const auto& [k, v] : c_) r[static_cast<size_t>(k.first)] += v.get_d() * std::pow(b0, k.second);
    return r;
  }
  std::vector<double> in_b(double a0) const {
    std::vector<double> r(static_cast<size_t>(std::max(degree(), 0)) + 1, 0.0);
    for (const auto& [k, v] : c_) r[static_cast<size_t>(k.second)] += v.get_d() * std::pow(a0, k.first);
    return r;
  }

  std::string str(const std::string& x = "a", const std::string& y = "b") const {
    if (c_.empty()) return "0";
    std::string s;
    for (const auto& [k, v] : c_) {
      s += s.empty() ? (v < 0 ? "-" : "") : (v < 0 ? " - " : " + ");
      const mpq_class m = abs(v);
      std::string mono;
      if (k.first) mono += k.first > 1 ? x + "^" + std::to_string(k.first) : x;
      if (k.second) mono += std::string(mono.empty() ? "" : "*") + (k.second > 1 ? y + "^" + std::to_string(k.second) : y);
      if (mono.empty()) s += m.get_str();
      else s += m == 1 ? mono : m.get_str() + "*" + mono;
    }
    return s;
  }

 private:
  void add(const Key& k, const mpq_class& v) {
    if (v == 0) return;
    auto [it, fresh] = c_.try_emplace(k, v);
    if (!fresh) {
      it->second += v;
      if (it->second == 0) c_.erase(it);
    }
  }

  std::map<Key, mpq_class> c_;
};

/// Determinant by cofactor expansion (n is small).
inline Poly2 determinant(const std::vector<std::vector<Poly2>>& m) {
  const size_t n = m.size();
  if (n == 0) return Poly2(1);
  if (n == 1) return m[0][0];
  Poly2 r;
  for (size_t j = 0; j < n; ++j) {
    if (m[0][j].is_zero()) continue;
    std::vector<std::vector<Poly2>> minor;
    for (size_t i = 1; i < n; ++i) {
      std::vector<Poly2> row;
      for (size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(m[i][k]);
      minor.push_back(std::move(row));
    }
    const Poly2 t = m[0][j] * determinant(minor);
    if (j % 2) r -= t;
    else r += t;
  }
  return r;
}

}  // namespace afocal::focal
