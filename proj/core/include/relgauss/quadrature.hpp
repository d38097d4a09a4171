#pragma once

#include <functional>

#include "relgauss/linalg.hpp"

namespace relgauss {

struct QuadratureResult {
  cplx value;
  double error_estimate = 0.0;
};

/// Adaptive Gauss-Kronrod integral of a complex integrand over a finite
/// interval, real and imaginary parts integrated separately.
QuadratureResult integrate(const std::function<cplx(double)>& f, double lo, double hi,
                           double abs_tol = 1e-10);

}  // namespace relgauss
