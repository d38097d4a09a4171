#pragma once

// Binned position measurement of the center of mass. The detector element
// for a bin is
//   P_bin = 1/(b sqrt(2 pi)) * int_bin dx |chi_x><chi_x|,
// chi_x the unit packet of the CM width b centered at x. Conditioning a
// cm-relational state on a bin leaves an operator on the relational slots
// whose trace is the bin probability.

#include <limits>
#include <optional>
#include <vector>

#include "relgauss/partition.hpp"
#include "relgauss/relational_ops.hpp"

namespace relgauss {

class DetectorBinning {
 public:
  /// Half-open [origin, origin + width); width may be +infinity.
  DetectorBinning(double origin, double width);
  /// Arbitrary [lo, hi), either end may be infinite.
  static DetectorBinning interval(double lo, double hi);
  static DetectorBinning whole_line();
  /// Bin of the given width centered on x.
  static DetectorBinning centered(double x, double width);

  [[nodiscard]] double lo() const { return lo_; }
  [[nodiscard]] double hi() const { return hi_; }
  [[nodiscard]] double width() const { return hi_ - lo_; }
  [[nodiscard]] bool infinite() const { return !std::isfinite(hi_ - lo_); }
  [[nodiscard]] bool contains(double x) const { return x >= lo_ && x < hi_; }

 private:
  DetectorBinning(double lo, double hi, int);
  double lo_;
  double hi_;
};

/// Detector energy assigned to a bin: q sigma times the bin midpoint.
double bin_energy(const DetectorBinning& bin, double q_sigma);

struct ConditionalOutcome {
  double probability = 0.0;
  WavepacketDensityOperator state;
  /// Trace of the unnormalized conditional operator.
  double raw_scale = 0.0;
};

/// Bin weights w_ji = <psi_j| P_bin |psi_i> on the CM slot, by quadrature.
CMatrix cm_bin_weights_quadrature(const ProductStateSuperposition& state,
                                  const DetectorBinning& bin, double abs_tol = 1e-10);
/// The same weights from the error-function closed form.
CMatrix cm_bin_weights_closed_form(const ProductStateSuperposition& state,
                                   const DetectorBinning& bin);

/// Conditional outcome with the weights evaluated by adaptive quadrature.
ConditionalOutcome conditional_relational_state(const ProductStateSuperposition& state,
                                                const DetectorBinning& bin);
/// Conditional outcome with the weights evaluated in closed form.
ConditionalOutcome closed_form_probability(const ProductStateSuperposition& state,
                                           const DetectorBinning& bin);

/// Relational state left when a sharp measurement finds the CM in `bin`:
/// the branches whose CM center lies in the bin, kept coherent.
WavepacketDensityOperator zmodel_reference(const ProductStateSuperposition& state,
                                           const DetectorBinning& bin);

struct PositionUncertainty {
  double value = 0.0;
  bool infinite = false;
};

/// delta_H / q_sigma; flagged infinite when q_sigma is zero or the ratio
/// overflows.
PositionUncertainty position_uncertainty(double delta_h, double q_sigma);

struct SweepRow {
  double q_sigma = 0.0;
  double b = 0.0;
  double delta_x = 0.0;
  double p = 0.0;
  double log_negativity = 0.0;
  double dist_to_twirl = 0.0;
  double dist_to_zmodel = 0.0;
};

struct SweepSpec {
  ParticleConfig particles;
  std::size_t reference = 0;
  std::vector<double> q_sigma_grid;
  /// Particle packet widths; each point rebuilds the state at omega = 1/(2 b^2).
  std::vector<double> width_grid;
  double delta_h = 1.0;
  /// Term whose CM center the bin is centered on.
  std::size_t measured_branch = 0;
};

/// Rows ordered by width, then charge. Every point is independent.
std::vector<SweepRow> limit_sweep(const SweepSpec& spec);

}  // namespace relgauss
