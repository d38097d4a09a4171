#pragma once

// Parallel-plate capacitor coupling H_int = q sigma (x_cm - x_left). The
// field is treated as a c-number potential; only the center of mass of the
// particles feels it.

#include <vector>

#include "relgauss/partition.hpp"
#include "relgauss/relational_ops.hpp"

namespace relgauss {

struct CapacitorZModel {
  double q = 1.0;
  double sigma = 1.0;
  double plate_separation = 1.0;
  double x_left = 0.0;

  [[nodiscard]] double coupling() const { return q * sigma; }
  [[nodiscard]] double x_right() const { return x_left + plate_separation; }
  [[nodiscard]] bool contains(double x, double tol = 1e-12) const {
    return x >= x_left - tol && x <= x_right() + tol;
  }
  void validate() const;
};

/// H = coupling * (sum_k w_k x_k - offset) acting on the slots of a
/// wavepacket operator.
struct LinearPositionHamiltonian {
  RVector slot_weights;
  double coupling = 0.0;
  double offset = 0.0;

  /// The Z-model Hamiltonian for a state in the given partition. External
  /// states couple through x_cm = sum_k m_k x_k / M (equal masses when
  /// `masses` is empty); cm-relational states couple through slot 0.
  static LinearPositionHamiltonian from_zmodel(const CapacitorZModel& z, Partition partition,
                                               std::size_t n_slots,
                                               const std::vector<double>& masses = {});
};

/// Tr[rho H] / Tr[rho] with full Gram corrections.
double expectation(const LinearPositionHamiltonian& h, const WavepacketDensityOperator& rho);

/// q sigma <x_cm - x_left>. Every branch must sit inside the field region.
double interaction_energy(const WavepacketDensityOperator& rho, const CapacitorZModel& z,
                          const std::vector<double>& masses = {});
double interaction_energy(const ProductStateSuperposition& state, const CapacitorZModel& z,
                          const std::vector<double>& masses = {});

/// Interaction energy of each branch taken on its own.
std::vector<double> branch_energies(const ProductStateSuperposition& state,
                                    const CapacitorZModel& z,
                                    const std::vector<double>& masses = {});

}  // namespace relgauss
