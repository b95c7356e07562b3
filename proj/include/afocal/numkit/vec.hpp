#pragma once

#include <Eigen/Dense>
#include <span>
#include <type_traits>
#include <vector>

#include "afocal/numkit/errors.hpp"
#include "afocal/numkit/series.hpp"
#include "afocal/numkit/series2.hpp"

namespace afocal {

/// Point or vector of the ambient affine space; dimension fixed at construction.
using VecD = Eigen::VectorXd;
using MatD = Eigen::MatrixXd;

/// Vector-valued local expansion: one series per coordinate.
using SVec = std::vector<Series>;
using SVec2 = std::vector<Series2>;

/// Canonical volume form [v1, ..., vd]: determinant of the column matrix.
inline double volume_form(std::span<const VecD> vectors) {
  const auto d = static_cast<Eigen::Index>(vectors.size());
  MatD m(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    if (vectors[j].size() != d) {
      throw Error(ErrorKind::DimensionMismatch, "volume_form needs d vectors of dimension d");
    }
    m.col(j) = vectors[j];
  }
  if (d == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  if (d == 3) return m.col(0).dot(Eigen::Vector3d(m.col(1)).cross(Eigen::Vector3d(m.col(2))));
  return m.determinant();
}

inline double volume_form(std::initializer_list<VecD> vectors) {
  std::vector<VecD> v(vectors);
  return volume_form(std::span<const VecD>(v));
}

inline VecD vec(std::initializer_list<double> xs) {
  VecD v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

// ---- generic helpers over double / Series / Series2 -------------------------

template <class S>
S dot(const std::vector<S>& a, const std::vector<S>& b) {
  S r = a[0] * b[0];
  for (size_t i = 1; i < a.size(); ++i) r += a[i] * b[i];
  return r;
}

template <class S>
std::vector<S> cross(const std::vector<S>& a, const std::vector<S>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

template <class S>
std::vector<S> operator+(const std::vector<S>& a, const std::vector<S>& b) {
  std::vector<S> r = a;
  for (size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

template <class S>
std::vector<S> operator-(const std::vector<S>& a, const std::vector<S>& b) {
  std::vector<S> r = a;
  for (size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

template <class S, class T>
  requires(std::is_same_v<S, T> || std::is_arithmetic_v<T>)
std::vector<S> operator*(const T& s, const std::vector<S>& a) {
  std::vector<S> r = a;
  for (auto& x : r) x = s * x;
  return r;
}

template <class S>
  requires(!std::is_arithmetic_v<S>)
std::vector<S> operator/(const std::vector<S>& a, const S& s) {
  std::vector<S> r = a;
  for (auto& x : r) x = x / s;
  return r;
}

template <class S>
std::vector<S> operator/(const std::vector<S>& a, double s) {
  std::vector<S> r = a;
  for (auto& x : r) x /= s;
  return r;
}

/// Determinant of the matrix whose columns are cols (Laplace expansion; small d).
template <class S>
S det_cols(const std::vector<std::vector<S>>& cols) {
  const size_t d = cols.size();
  if (d == 1) return cols[0][0];
  if (d == 2) return cols[0][0] * cols[1][1] - cols[1][0] * cols[0][1];
  if (d == 3) return dot(cols[0], cross(cols[1], cols[2]));
  // expand along the first row
  S total = cols[0][0] * 0.0;
  for (size_t j = 0; j < d; ++j) {
    std::vector<std::vector<S>> minor;
    minor.reserve(d - 1);
    for (size_t k = 0; k < d; ++k) {
      if (k == j) continue;
      std::vector<S> c(cols[k].begin() + 1, cols[k].end());
      minor.push_back(std::move(c));
    }
    S term = cols[j][0] * det_cols(minor);
    if (j % 2 == 0) total += term; else total -= term;
  }
  return total;
}

template <class S>
S det2(const std::vector<S>& a, const std::vector<S>& b) {
  return a[0] * b[1] - a[1] * b[0];
}

template <class S>
S det3(const std::vector<S>& a, const std::vector<S>& b, const std::vector<S>& c) {
  return dot(a, cross(b, c));
}

inline double det2(const VecD& a, const VecD& b) { return a[0] * b[1] - a[1] * b[0]; }

inline double det3(const VecD& a, const VecD& b, const VecD& c) {
  return a.dot(b.head<3>().cross(c.head<3>()));
}

// ---- vector series ---------------------------------------------------------

inline SVec constant_svec(const VecD& v, int order) {
  SVec r;
  r.reserve(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) r.emplace_back(order, v[i]);
  return r;
}

inline VecD value_of(const SVec& s) {
  VecD v(static_cast<Eigen::Index>(s.size()));
  for (size_t i = 0; i < s.size(); ++i) v[static_cast<Eigen::Index>(i)] = s[i].value();
  return v;
}

inline VecD value_of(const SVec2& s) {
  VecD v(static_cast<Eigen::Index>(s.size()));
  for (size_t i = 0; i < s.size(); ++i) v[static_cast<Eigen::Index>(i)] = s[i].value();
  return v;
}

/// k-th derivative vector at the base point.
inline VecD derivative_of(const SVec& s, int k) {
  VecD v(static_cast<Eigen::Index>(s.size()));
  for (size_t i = 0; i < s.size(); ++i) v[static_cast<Eigen::Index>(i)] = s[i].derivative(k);
  return v;
}

inline SVec d(const SVec& s) {
  SVec r;
  r.reserve(s.size());
  for (const auto& x : s) r.push_back(x.d());
  return r;
}

inline SVec2 d(const SVec2& s, int var) {
  SVec2 r;
  r.reserve(s.size());
  for (const auto& x : s) r.push_back(x.d(var));
  return r;
}

inline SVec shifted(const SVec& s, double e) {
  SVec r;
  r.reserve(s.size());
  for (const auto& x : s) r.push_back(x.shifted(e));
  return r;
}

inline SVec truncated(const SVec& s, int order) {
  SVec r;
  r.reserve(s.size());
  for (const auto& x : s) r.push_back(x.truncated(order));
  return r;
}

inline SVec compose(const SVec& s, const Series& inner) {
  SVec r;
  r.reserve(s.size());
  for (const auto& x : s) r.push_back(x.compose(inner));
  return r;
}

inline SVec apply_matrix(const MatD& a, const SVec& s) {
  SVec r;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    Series acc(s[0].order());
    for (Eigen::Index j = 0; j < a.cols(); ++j) acc += a(i, j) * s[static_cast<size_t>(j)];
    r.push_back(acc);
  }
  return r;
}

inline int min_order(const SVec& s) {
  int o = s[0].order();
  for (const auto& x : s) o = std::min(o, x.order());
  return o;
}

}  // namespace afocal
