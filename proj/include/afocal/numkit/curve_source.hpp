#pragma once

#include <algorithm>
#include <functional>
#include <memory>
#include <vector>

#include "afocal/numkit/vec.hpp"

namespace afocal {

/// Order reported by sources whose expansions are exact at any order.
inline constexpr int kUnlimitedOrder = 64;

/// A parametrized curve that can be expanded locally to any requested order.
/// Analytic callbacks give exact jets; tabulated sources (finite-difference
/// jets, grids of local expansions) report how far their coefficients can be
/// trusted through max_order().
class CurveSource {
 public:
  virtual ~CurveSource() = default;
  virtual int dim() const = 0;
  /// Expansion of position around parameter t up to e^order.
  virtual SVec taylor(double t, int order) const = 0;
  virtual int max_order() const { return kUnlimitedOrder; }

  VecD position(double t) const { return value_of(taylor(t, 0)); }
  VecD derivative(double t, int k) const { return derivative_of(taylor(t, k), k); }
};

using CurvePtr = std::shared_ptr<const CurveSource>;

/// Curve given by a formula evaluated on series arithmetic.
class AnalyticCurve final : public CurveSource {
 public:
  using Fn = std::function<SVec(const Series&)>;
  AnalyticCurve(int dim, Fn fn) : dim_(dim), fn_(std::move(fn)) {}

  int dim() const override { return dim_; }
  SVec taylor(double t, int order) const override { return fn_(Series::variable(t, order)); }

 private:
  int dim_;
  Fn fn_;
};

/// Local expansions stored on a grid; evaluation elsewhere re-expands the
/// nearest stored expansion.
class GridSeriesCurve final : public CurveSource {
 public:
  GridSeriesCurve(std::vector<double> grid, std::vector<SVec> expansions, int trusted_order)
      : grid_(std::move(grid)), exp_(std::move(expansions)), trusted_(trusted_order) {}

  int dim() const override { return static_cast<int>(exp_.front().size()); }
  int max_order() const override { return trusted_; }

  SVec taylor(double t, int order) const override {
    const size_t k = nearest(t);
    SVec s = exp_[k];
    const double e = t - grid_[k];
    if (e != 0.0) s = shifted(s, e);
    return truncated(s, order);
  }

  const std::vector<double>& grid() const { return grid_; }
  const SVec& expansion(size_t k) const { return exp_[k]; }

 private:
  size_t nearest(double t) const {
    auto it = std::lower_bound(grid_.begin(), grid_.end(), t);
    if (it == grid_.begin()) return 0;
    if (it == grid_.end()) return grid_.size() - 1;
    const size_t hi = static_cast<size_t>(it - grid_.begin());
    return (t - grid_[hi - 1] <= grid_[hi] - t) ? hi - 1 : hi;
  }

  std::vector<double> grid_;
  std::vector<SVec> exp_;
  int trusted_;
};

/// Pointwise transformation of another source's expansion. `order_loss` is
/// how many orders the transformation consumes (1 for a derivative).
class DerivedCurve final : public CurveSource {
 public:
  using Fn = std::function<SVec(const SVec&, double t)>;
  DerivedCurve(CurvePtr base, int dim, int order_loss, Fn fn)
      : base_(std::move(base)), dim_(dim), loss_(order_loss), fn_(std::move(fn)) {}

  int dim() const override { return dim_; }
  int max_order() const override { return std::max(0, base_->max_order() - loss_); }
  SVec taylor(double t, int order) const override {
    return truncated(fn_(base_->taylor(t, order + loss_), t), order);
  }

 private:
  CurvePtr base_;
  int dim_;
  int loss_;
  Fn fn_;
};

/// x -> A x + b applied to a source.
inline CurvePtr affine_image(CurvePtr base, const MatD& a, const VecD& b) {
  const int dim = static_cast<int>(a.rows());
  return std::make_shared<DerivedCurve>(base, dim, 0, [a, b](const SVec& s, double) {
    SVec r = apply_matrix(a, s);
    for (size_t i = 0; i < r.size(); ++i) r[i] += b[static_cast<Eigen::Index>(i)];
    return r;
  });
}

/// Parameter derivative of a source as a new source.
inline CurvePtr derivative_curve(CurvePtr base) {
  return std::make_shared<DerivedCurve>(base, base->dim(), 1,
                                        [](const SVec& s, double) { return d(s); });
}

}  // namespace afocal
