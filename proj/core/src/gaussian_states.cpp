#include "relgauss/gaussian_states.hpp"

#include <cmath>
#include <numbers>
#include <tuple>

#include "relgauss/errors.hpp"

namespace relgauss {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ValidationError(std::string(what) + " must be positive and finite");
  }
}

bool same_width(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(a, b); }

// Canonical ordering so that swapping arguments yields an exact conjugate.
bool ordered(const Wavepacket& a, const Wavepacket& b) {
  return std::make_tuple(a.center(), a.kick(), a.position_width()) <=
         std::make_tuple(b.center(), b.kick(), b.position_width());
}

struct GaussianProduct {
  cplx integral;  // <a|b>
  cplx mean;      // complex center of conj(psi_a) psi_b
};

GaussianProduct gaussian_product(const Wavepacket& a, const Wavepacket& b) {
  const double sa = a.position_width();
  const double sb = b.position_width();
  const double aa = 1.0 / (2.0 * sa * sa);
  const double ab = 1.0 / (2.0 * sb * sb);
  // exp(-aa (x - xa)^2 - ab (x - xb)^2 + i kappa x)
  //   = exp(-A (x - m)^2 - alpha d^2 + i kappa x), written in the separation
  // d so that distant centers do not cancel catastrophically.
  const double big_a = aa + ab;
  const double d = b.center() - a.center();
  const double alpha = aa * ab / big_a;
  const double m = a.center() + ab * d / big_a;
  const double kappa = b.kick() - a.kick();
  const double norm = std::pow(kPi * sa * sa, -0.25) * std::pow(kPi * sb * sb, -0.25);
  const cplx value = norm * std::sqrt(kPi / big_a) *
                     std::exp(cplx{-alpha * d * d - kappa * kappa / (4.0 * big_a), kappa * m});
  return {value, cplx{m, kappa / (2.0 * big_a)}};
}

void check_widths(const Wavepacket& a, const Wavepacket& b, const OverlapOptions& opts) {
  if (!opts.allow_unequal_widths && !same_width(a.position_width(), b.position_width())) {
    throw ValidationError(
        "overlap: packets have different widths; set allow_unequal_widths to use the general "
        "Gaussian integral");
  }
}

double raw_factor(const Wavepacket& a, const Wavepacket& b) {
  return 1.0 / std::sqrt(kPi * a.position_width() * b.position_width());
}

}  // namespace

Wavepacket Wavepacket::with_width(double center, double kick, double b, Localization kind) {
  require_positive(b, "Wavepacket width");
  if (!std::isfinite(center) || !std::isfinite(kick)) {
    throw ValidationError("Wavepacket: center and kick must be finite");
  }
  // position: b^2 = 1/(2 omega); momentum: b^2 = omega/2.
  const double omega = kind == Localization::position ? 1.0 / (2.0 * b * b) : 2.0 * b * b;
  return Wavepacket(center, kick, b, omega, kind);
}

Wavepacket Wavepacket::shifted(double dx, double dp) const {
  return Wavepacket(center_ + dx, kick_ + dp, b_, omega_, kind_);
}

double position_width_for(double omega) {
  require_positive(omega, "omega");
  return std::sqrt(1.0 / (2.0 * omega));
}

Wavepacket position_wavepacket(double x, double omega) {
  return Wavepacket::with_width(x, 0.0, position_width_for(omega), Localization::position);
}

Wavepacket momentum_wavepacket(double p, double omega) {
  require_positive(omega, "omega");
  return Wavepacket::with_width(0.0, p, std::sqrt(omega / 2.0), Localization::momentum);
}

cplx overlap(const Wavepacket& a, const Wavepacket& b, OverlapOptions opts) {
  check_widths(a, b, opts);
  const cplx value = ordered(a, b) ? gaussian_product(a, b).integral
                                   : std::conj(gaussian_product(b, a).integral);
  return opts.raw ? value * raw_factor(a, b) : value;
}

cplx position_matrix_element(const Wavepacket& a, const Wavepacket& b, OverlapOptions opts) {
  check_widths(a, b, opts);
  cplx value;
  if (ordered(a, b)) {
    const auto prod = gaussian_product(a, b);
    value = prod.integral * prod.mean;
  } else {
    const auto prod = gaussian_product(b, a);
    value = std::conj(prod.integral * prod.mean);
  }
  return opts.raw ? value * raw_factor(a, b) : value;
}

cplx position_profile(const Wavepacket& w, double x) {
  const double s = w.position_width();
  const double d = x - w.center();
  return std::pow(kPi * s * s, -0.25) * std::exp(cplx{-d * d / (2.0 * s * s), w.kick() * x});
}

cplx momentum_profile(const Wavepacket& w, double p) {
  const double s = w.position_width();
  const double d = p - w.kick();
  return std::pow(s * s / kPi, 0.25) * std::exp(cplx{-s * s * d * d / 2.0, -d * w.center()});
}

FockVector fock_representation(const Wavepacket& w, Eigen::Index dim, double reference_omega) {
  if (dim < 8) throw ValidationError("fock_representation: truncation must be >= 8");
  const double wref = reference_omega > 0.0 ? reference_omega : w.omega();
  const double s = w.position_width();
  // Trapezoid rule on a window where the packet envelope is below e^-98;
  // the integrand is entire and Gaussian-damped, so the rule converges
  // spectrally once the Hermite oscillations are resolved.
  const double half = 14.0 * s;
  const double hermite_scale = 1.0 / std::sqrt(wref * (2.0 * static_cast<double>(dim) + 1.0));
  const double kick_scale = kPi / (std::abs(w.kick()) + 1.0);
  const double dx = std::min({s, hermite_scale, kick_scale}) / 16.0;
  const auto steps = static_cast<long>(std::ceil(2.0 * half / dx));
  const double h = 2.0 * half / static_cast<double>(steps);

  CVector amp = CVector::Zero(dim);
  RVector herm(dim);
  const double root_w = std::sqrt(wref);
  const double h0_norm = std::pow(wref / kPi, 0.25);
  for (long i = 0; i <= steps; ++i) {
    const double x = w.center() - half + h * static_cast<double>(i);
    const double weight = (i == 0 || i == steps) ? 0.5 * h : h;
    herm(0) = h0_norm * std::exp(-wref * x * x / 2.0);
    if (dim > 1) herm(1) = std::sqrt(2.0) * root_w * x * herm(0);
    for (Eigen::Index n = 1; n + 1 < dim; ++n) {
      const double nd = static_cast<double>(n);
      herm(n + 1) = std::sqrt(2.0 / (nd + 1.0)) * root_w * x * herm(n) -
                    std::sqrt(nd / (nd + 1.0)) * herm(n - 1);
    }
    const cplx psi = position_profile(w, x) * weight;
    amp += herm.cast<cplx>() * psi;
  }
  const double leak = truncation_leakage(amp) + std::max(0.0, 1.0 - amp.squaredNorm());
  if (leak > kLeakageThreshold) {
    throw NumericError("fock_representation: truncation dimension " + std::to_string(dim) +
                       " too small (leaked probability " + std::to_string(leak) + ")");
  }
  return FockVector(amp / std::max(1.0, amp.norm()), Statistics::boson);
}

namespace {

FockVector apply_checked(const CMatrix& u, const FockVector& state, const char* what) {
  CVector out = u * state.amplitudes();
  const double leak = truncation_leakage(out);
  if (state.statistics() == Statistics::boson && leak > kLeakageThreshold) {
    throw NumericError(std::string(what) + ": truncation dimension " +
                       std::to_string(state.dim()) + " too small (leaked probability " +
                       std::to_string(leak) + ")");
  }
  const double n0 = state.norm();
  const double n1 = out.norm();
  if (n1 > 0.0) out *= n0 / n1;
  return FockVector(std::move(out), state.statistics());
}

}  // namespace

FockVector squeeze(const FockVector& state, double r) {
  const CMatrix a = annihilation(state.dim());
  const CMatrix ad = a.adjoint();
  const CMatrix gen = r * (a * a - ad * ad);
  return apply_checked(expm_antihermitian(gen), state, "squeeze");
}

FockVector displace(const FockVector& state, cplx gamma) {
  if (state.statistics() == Statistics::fermion) {
    throw ValidationError("displace: fermionic displacement needs Grassmann parameters");
  }
  const CMatrix a = annihilation(state.dim());
  const CMatrix gen = gamma * a.adjoint() - std::conj(gamma) * a;
  return apply_checked(expm_antihermitian(gen), state, "displace");
}

}  // namespace relgauss
