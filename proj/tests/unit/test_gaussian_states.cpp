#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/sinh_sinh.hpp>

#include "relgauss/errors.hpp"
#include "relgauss/gaussian_states.hpp"

using namespace relgauss;

namespace {

constexpr double kPi = std::numbers::pi;

// Independent position-space wavefunction of a unit packet.
cplx psi(double x0, double k, double s, double x) {
  return std::pow(kPi * s * s, -0.25) *
         std::exp(cplx(-(x - x0) * (x - x0) / (2.0 * s * s), k * x));
}

cplx position_quadrature(double xa, double ka, double sa, double xb, double kb, double sb) {
  using boost::math::quadrature::gauss_kronrod;
  const double lo = std::min(xa - 14 * sa, xb - 14 * sb);
  const double hi = std::max(xa + 14 * sa, xb + 14 * sb);
  const auto f = [&](double x) { return std::conj(psi(xa, ka, sa, x)) * psi(xb, kb, sb, x); };
  const double re = gauss_kronrod<double, 61>::integrate([&](double x) { return f(x).real(); }, lo, hi, 20, 1e-13);
  const double im = gauss_kronrod<double, 61>::integrate([&](double x) { return f(x).imag(); }, lo, hi, 20, 1e-13);
  return {re, im};
}

// Unit overlap from the momentum-representation integral
//   int dp e^{-i (x' - x) p} |<p|psi>|^2,  <p|psi> ~ exp(-p^2 / 4 omega),
// normalized at coincident points.
double momentum_integral_overlap(double x, double xp, double omega) {
  boost::math::quadrature::sinh_sinh<double> integrator;
  const double d = xp - x;
  const auto weight = [omega](double p) { return std::exp(-p * p / (2.0 * omega)); };
  const double num = integrator.integrate([&](double p) { return std::cos(d * p) * weight(p); });
  const double den = integrator.integrate(weight);
  return num / den;
}

}  // namespace

TEST_CASE("position wavepacket widths") {
  CHECK(position_wavepacket(0.0, 0.5).width() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(position_wavepacket(3.0, 50.0).width() == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(position_width_for(2.0) == doctest::Approx(0.5));
}

TEST_CASE("self overlap, unit and raw") {
  for (double w : {0.5, 1.0, 50.0, 2000.0}) {
    const Wavepacket a = position_wavepacket(0.3, w);
    CHECK(std::abs(overlap(a, a) - 1.0) <= 1e-12);
    const double b = a.width();
    CHECK(std::abs(overlap(a, a, {.raw = true}) - 1.0 / (b * std::sqrt(kPi))) <= 1e-12 / b);
  }
}

TEST_CASE("overlap decays as exp(-(x - x')^2 / (2b)^2)") {
  const double w = 50.0;
  const double b = position_width_for(w);
  const cplx s = overlap(position_wavepacket(0.0, w), position_wavepacket(10 * b, w));
  CHECK(s.real() == doctest::Approx(std::exp(-25.0)).epsilon(1e-12));
  CHECK(std::abs(s.imag()) == 0.0);
}

TEST_CASE("overlap matches the momentum-integral oracle") {
  for (double w : {0.5, 1.0, 10.0}) {
    const double b = position_width_for(w);
    for (double d = -5.0; d <= 5.0; d += 0.5) {
      const double x = 0.37;
      const cplx s = overlap(position_wavepacket(x, w), position_wavepacket(x + d * b, w));
      CHECK(std::abs(s - momentum_integral_overlap(x, x + d * b, w)) <= 1e-8);
    }
  }
}

TEST_CASE("overlap matches position-space quadrature with kicks and unequal widths") {
  const struct {
    double xa, ka, sa, xb, kb, sb;
  } cases[] = {{0.0, 0.0, 0.1, 0.05, 0.0, 0.1},
               {0.2, 3.0, 0.3, -0.1, -1.0, 0.3},
               {0.0, 1.5, 0.2, 0.4, 0.0, 0.5},
               {-1.0, 0.0, 1.0, 0.5, 2.0, 0.25}};
  for (const auto& c : cases) {
    const Wavepacket a = Wavepacket::with_width(c.xa, c.ka, c.sa);
    const Wavepacket b = Wavepacket::with_width(c.xb, c.kb, c.sb);
    const cplx s = overlap(a, b, {.allow_unequal_widths = true});
    CHECK(std::abs(s - position_quadrature(c.xa, c.ka, c.sa, c.xb, c.kb, c.sb)) <= 1e-10);
    CHECK(s == std::conj(overlap(b, a, {.allow_unequal_widths = true})));
  }
}

TEST_CASE("unequal widths need the explicit flag") {
  const Wavepacket a = Wavepacket::with_width(0.0, 0.0, 0.1);
  const Wavepacket b = Wavepacket::with_width(0.0, 0.0, 0.2);
  CHECK_THROWS_AS(overlap(a, b), ValidationError);
  CHECK_NOTHROW(overlap(a, b, {.allow_unequal_widths = true}));
}

TEST_CASE("overlap is exactly Hermitian") {
  const Wavepacket a = Wavepacket::with_width(0.1, 0.7, 0.2);
  const Wavepacket b = Wavepacket::with_width(0.35, -1.3, 0.2);
  CHECK(overlap(a, b) == std::conj(overlap(b, a)));
  CHECK(position_matrix_element(a, b) == std::conj(position_matrix_element(b, a)));
}

TEST_CASE("position matrix element") {
  const Wavepacket a = position_wavepacket(0.3, 10.0);
  CHECK(std::abs(position_matrix_element(a, a) - 0.3) <= 1e-15);
  // <a|x|b> = <a|b> (x_a + x_b)/2 for equal-width, kick-free packets.
  const Wavepacket b = position_wavepacket(0.5, 10.0);
  CHECK(std::abs(position_matrix_element(a, b) - overlap(a, b) * 0.4) <= 1e-15);
}

TEST_CASE("narrowing packets approach an indicator of coincidence") {
  double previous = 1.0;
  for (double b : {0.1, 0.03, 0.01}) {
    const Wavepacket x = Wavepacket::with_width(0.0, 0.0, b);
    const Wavepacket y = Wavepacket::with_width(0.1, 0.0, b);
    const double s = std::abs(overlap(x, y));
    CHECK(s < previous);
    previous = s;
    CHECK(std::abs(overlap(x, x) - 1.0) <= 1e-12);
  }
  CHECK(previous < 1e-10);
}

TEST_CASE("momentum profile is the Fourier transform of the position profile") {
  using boost::math::quadrature::gauss_kronrod;
  for (const Wavepacket& w : {momentum_wavepacket(2.0, 1.0), position_wavepacket(0.4, 3.0),
                              Wavepacket::with_width(0.2, 1.1, 0.6)}) {
    const double s = w.position_width();
    for (double p : {-1.0, 0.0, 0.5, 2.0, 3.5}) {
      const auto f = [&](double x) {
        return position_profile(w, x) * std::exp(cplx(0.0, -p * x)) / std::sqrt(2.0 * kPi);
      };
      const double lo = w.center() - 14 * s;
      const double hi = w.center() + 14 * s;
      const double re = gauss_kronrod<double, 61>::integrate([&](double x) { return f(x).real(); }, lo, hi, 20, 1e-13);
      const double im = gauss_kronrod<double, 61>::integrate([&](double x) { return f(x).imag(); }, lo, hi, 20, 1e-13);
      CHECK(std::abs(cplx(re, im) - momentum_profile(w, p)) <= 1e-8);
    }
  }
}

TEST_CASE("momentum packet mirrors the position packet under omega -> 1/omega") {
  for (double w : {1.0, 4.0, 0.2}) {
    const Wavepacket p = momentum_wavepacket(0.0, w);
    const Wavepacket x = position_wavepacket(0.0, 1.0 / w);
    CHECK(p.position_width() == doctest::Approx(1.0 / x.width()));
    for (double k : {-1.0, 0.3, 2.0}) {
      CHECK(std::abs(momentum_profile(p, k) - position_profile(x, k)) <= 1e-14);
    }
  }
}

TEST_CASE("momentum projection of the squeezed packet has exp(-p^2 / 4 omega) shape") {
  const double w = 2.5;
  const Wavepacket x = position_wavepacket(0.0, w);
  const cplx c0 = momentum_profile(x, 0.0);
  for (double p : {0.5, 1.0, 3.0}) {
    CHECK(std::abs(momentum_profile(x, p) / c0 - std::exp(-p * p / (4.0 * w))) <= 1e-14);
  }
}

TEST_CASE("Fock representation") {
  SUBCASE("centered packet has even occupations only") {
    const FockVector v = fock_representation(position_wavepacket(0.0, 1.0), 32);
    for (Eigen::Index n = 1; n < 32; n += 2) CHECK(std::abs(v.amplitudes()(n)) <= 1e-13);
  }
  SUBCASE("Fock inner product agrees with the closed-form overlap") {
    const Wavepacket a = position_wavepacket(0.0, 1.0);
    const Wavepacket b = position_wavepacket(0.5, 1.0);
    const cplx fock = fock_representation(a, 48).amplitudes().dot(fock_representation(b, 48).amplitudes());
    CHECK(std::abs(fock - overlap(a, b)) <= 1e-6);
  }
  SUBCASE("c2/c0 follows the squeezed vacuum and tends to -1/sqrt(2)") {
    // In the ladder basis of omega_ref the packet is a squeezed vacuum with
    // exp(-2r) = omega_ref / (2 omega), and c2/c0 = -tanh(r)/sqrt(2).
    const double w = 1.0;
    double previous = 0.0;
    for (double ref : {1.0, 0.5, 0.25, 0.125}) {
      const FockVector v = fock_representation(position_wavepacket(0.0, w), 160, ref);
      const double e2r = 2.0 * w / ref;
      const double t = (e2r - 1.0) / (e2r + 1.0);
      const double ratio = (v.amplitudes()(2) / v.amplitudes()(0)).real();
      CHECK(ratio == doctest::Approx(-t / std::sqrt(2.0)).epsilon(1e-9));
      CHECK(ratio < previous);
      previous = ratio;
    }
    CHECK(std::abs(previous + 1.0 / std::sqrt(2.0)) < 0.1);
  }
  SUBCASE("insufficient truncation raises") {
    CHECK_THROWS_AS(fock_representation(position_wavepacket(4.0, 1.0), 8), NumericError);
  }
}

TEST_CASE("squeeze") {
  const FockVector f0 = FockVector::vacuum(2, Statistics::fermion);
  const FockVector f1 = FockVector::number_state(2, 1, Statistics::fermion);
  CHECK(max_abs(CMatrix(squeeze(f0, 0.8).amplitudes() - f0.amplitudes())) <= 1e-15);
  CHECK(max_abs(CMatrix(squeeze(f1, 0.8).amplitudes() - f1.amplitudes())) <= 1e-15);

  const FockVector v = FockVector::vacuum(32);
  CHECK(max_abs(CMatrix(squeeze(v, 0.0).amplitudes() - v.amplitudes())) <= 1e-15);

  // exp[r(aa - a^dag a^dag)] maps x -> exp(-2r) x, so Var(x) -> exp(-4r) Var(x).
  const double w = 1.0;
  const double r = 0.5;
  const Eigen::Index d = 160;
  const CVector s = squeeze(FockVector::vacuum(d), r).amplitudes();
  const CMatrix x = position_operator(d, w);
  const double var = s.dot(x * x * s).real() - std::norm(s.dot(x * s));
  CHECK(var == doctest::Approx(std::exp(-4.0 * r) / (2.0 * w)).epsilon(1e-8));
  CHECK(std::abs(s.norm() - 1.0) <= 1e-10);

  CHECK_THROWS_AS(squeeze(FockVector::vacuum(32), r), NumericError);
}

TEST_CASE("displace") {
  const FockVector v = FockVector::vacuum(32);
  CHECK(max_abs(CMatrix(displace(v, 0.0).amplitudes() - v.amplitudes())) <= 1e-15);
  const CVector c = displace(v, 1.0).amplitudes();
  CHECK(std::abs(c.dot(number_operator(32) * c).real() - 1.0) <= 1e-8);
  // Poisson statistics oracle.
  for (Eigen::Index n = 0; n < 8; ++n) {
    double fact = 1.0;
    for (Eigen::Index k = 2; k <= n; ++k) fact *= static_cast<double>(k);
    CHECK(std::norm(c(n)) == doctest::Approx(std::exp(-1.0) / fact).epsilon(1e-10));
  }
  for (cplx g : {cplx(2.0, 0.0), cplx(1.2, -1.5), cplx(0.0, 2.0)}) {
    CHECK(std::abs(displace(FockVector::vacuum(64), g).norm() - 1.0) <= 1e-10);
  }
  CHECK_THROWS_AS(displace(FockVector::vacuum(2, Statistics::fermion), 1.0), ValidationError);
}
