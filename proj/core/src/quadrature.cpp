#include "relgauss/quadrature.hpp"

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "relgauss/errors.hpp"

namespace relgauss {

namespace {

constexpr unsigned kMaxDepth = 20;

double integrate_part(const std::function<double(double)>& f, double lo, double hi,
                      double abs_tol, double& error) {
  double l1 = 0.0;
  double err = 0.0;
  // gauss_kronrod stops on a relative criterion; the integrands here are
  // O(1) at most, so a relative target two decades under abs_tol suffices.
  const double value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      f, lo, hi, kMaxDepth, abs_tol * 1e-2, &err, &l1);
  if (!std::isfinite(value)) throw NumericError("integrate: non-finite result");
  error += err;
  return value;
}

}  // namespace

QuadratureResult integrate(const std::function<cplx(double)>& f, double lo, double hi,
                           double abs_tol) {
  if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw ValidationError("integrate: interval must be finite and ordered");
  }
  QuadratureResult out{cplx{0.0, 0.0}, 0.0};
  if (lo == hi) return out;
  const double re = integrate_part([&f](double x) { return f(x).real(); }, lo, hi, abs_tol,
                                   out.error_estimate);
  const double im = integrate_part([&f](double x) { return f(x).imag(); }, lo, hi, abs_tol,
                                   out.error_estimate);
  out.value = cplx{re, im};
  if (out.error_estimate > abs_tol) {
    throw NumericError("integrate: error estimate " + std::to_string(out.error_estimate) +
                       " exceeds tolerance");
  }
  return out;
}

}  // namespace relgauss
