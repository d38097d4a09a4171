#pragma once

// Finite-width Gaussian wavepackets standing in for position and momentum
// eigenkets, in hbar = m = 1 units.
//
// A position-localized packet of frequency omega has width b = (1/2 omega)^{1/2}
// and wavefunction
//   psi(x) = (pi s^2)^{-1/4} exp(-(x - x0)^2 / (2 s^2) + i k x),   s = b,
// so two packets of the same width overlap as exp(-(x - x')^2 / (2b)^2).
// A momentum-localized packet is the Fourier mirror (omega -> 1/omega): its
// momentum-space width is (omega/2)^{1/2} and its position-space width is the
// reciprocal. Packets are unit normalized; the delta-style normalization in
// which <chi_x|chi_x> = 1/(b sqrt(pi)) is available as the "raw" overlap.

#include "relgauss/fock.hpp"
#include "relgauss/linalg.hpp"

namespace relgauss {

enum class Localization { position, momentum };

class Wavepacket {
 public:
  /// Packet localized in `kind` with width b in that variable. omega is
  /// derived from b and must not be stored separately.
  static Wavepacket with_width(double center, double kick, double b,
                               Localization kind = Localization::position);

  [[nodiscard]] double center() const { return center_; }
  [[nodiscard]] double kick() const { return kick_; }
  /// Width in the localized variable.
  [[nodiscard]] double width() const { return b_; }
  [[nodiscard]] double omega() const { return omega_; }
  [[nodiscard]] Localization kind() const { return kind_; }
  /// s in the position-space wavefunction above.
  [[nodiscard]] double position_width() const {
    return kind_ == Localization::position ? b_ : 1.0 / b_;
  }

  [[nodiscard]] Wavepacket shifted(double dx, double dp = 0.0) const;

  friend bool operator==(const Wavepacket&, const Wavepacket&) = default;

 private:
  Wavepacket(double center, double kick, double b, double omega, Localization kind)
      : center_(center), kick_(kick), b_(b), omega_(omega), kind_(kind) {}

  double center_;
  double kick_;
  double b_;
  double omega_;
  Localization kind_;
};

/// Width of a position packet of frequency omega: (1/2 omega)^{1/2}.
double position_width_for(double omega);

Wavepacket position_wavepacket(double x, double omega);
Wavepacket momentum_wavepacket(double p, double omega);

struct OverlapOptions {
  /// Multiply by (pi s_a s_b)^{-1/2}, reproducing 1/(b sqrt(pi)) at x = x'.
  bool raw = false;
  /// Permit packets of different position-space width (general Gaussian integral).
  bool allow_unequal_widths = false;
};

/// <a|b>. Hermitian exactly: overlap(a, b) == conj(overlap(b, a)).
cplx overlap(const Wavepacket& a, const Wavepacket& b, OverlapOptions opts = {});

/// <a|x|b> for unit-normalized packets.
cplx position_matrix_element(const Wavepacket& a, const Wavepacket& b,
                             OverlapOptions opts = {});

/// Position- and momentum-space wavefunctions of a unit-normalized packet.
cplx position_profile(const Wavepacket& w, double x);
cplx momentum_profile(const Wavepacket& w, double p);

/// Truncated Fock amplitudes of the packet in the ladder basis of an
/// oscillator with frequency `reference_omega` (the packet's own omega when
/// nonpositive). Throws NumericError if the packet leaks past the truncation.
FockVector fock_representation(const Wavepacket& w, Eigen::Index dim,
                               double reference_omega = 0.0);

/// exp[r (a a - a^dag a^dag)] on the truncated space. For fermions a a = 0
/// and the operator is the identity.
FockVector squeeze(const FockVector& state, double r);

/// exp[gamma a^dag - gamma^* a]; bosons only.
FockVector displace(const FockVector& state, cplx gamma);

}  // namespace relgauss
