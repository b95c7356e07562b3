#pragma once

#include "afocal/numkit/errors.hpp"

namespace afocal {

struct ToleranceConfig {
  double tol_det = 1e-8;       // relative determinant tolerance
  double tol_zero = 1e-6;      // absolute zero detection
  double tol_residual = 1e-6;  // frame-equation residual bound
  int refine_depth = 60;       // bisection depth

  void validate() const {
    if (!(tol_det > 0) || !(tol_zero > 0) || !(tol_residual > 0)) {
      throw Error(ErrorKind::InvalidConfig, "tolerances must be strictly positive");
    }
    if (refine_depth < 20) {
      throw Error(ErrorKind::InvalidConfig, "refine_depth must be at least 20");
    }
  }
};

}  // namespace afocal
