#pragma once

// Density operators on spans of product wavepackets,
//   rho = sum_ij C_ij |term_i><term_j|,
// where the terms are generally not orthogonal. All spectral quantities go
// through an orthonormal frame of the Gram matrix.

#include <cstddef>
#include <string>
#include <vector>

#include "relgauss/gaussian_states.hpp"
#include "relgauss/linalg.hpp"
#include "relgauss/partition.hpp"

namespace relgauss {

using ProductBasis = std::vector<std::vector<Wavepacket>>;

class WavepacketDensityOperator {
 public:
  WavepacketDensityOperator(ProductBasis basis, CMatrix coefficients, Partition partition,
                            std::vector<std::string> slot_labels = {}, double raw_scale = 1.0);

  [[nodiscard]] const ProductBasis& basis() const { return basis_; }
  [[nodiscard]] const CMatrix& coefficients() const { return c_; }
  [[nodiscard]] const CMatrix& gram() const { return gram_; }
  [[nodiscard]] const CMatrix& slot_gram(std::size_t slot) const { return slot_grams_.at(slot); }
  /// Gram matrix of the terms restricted to the given slots.
  [[nodiscard]] CMatrix gram_over(const std::vector<std::size_t>& slots) const;
  [[nodiscard]] Partition partition() const { return partition_; }
  [[nodiscard]] const std::vector<std::string>& slot_labels() const { return labels_; }
  [[nodiscard]] std::size_t n_terms() const { return basis_.size(); }
  [[nodiscard]] std::size_t n_slots() const { return slot_grams_.size(); }

  /// sum_ij C_ij S_ji.
  [[nodiscard]] cplx trace() const;
  /// Normalization discarded by traces and twirls so far, evaluated with
  /// delta-normalized overlaps. It grows without bound as the widths shrink.
  [[nodiscard]] double raw_scale() const { return raw_scale_; }

  /// Matrix of rho in an orthonormal frame of the basis span.
  [[nodiscard]] CMatrix frame_matrix(Orthogonalization method = Orthogonalization::symmetric) const;
  /// Number of basis directions projected out as linearly dependent.
  [[nodiscard]] Eigen::Index rank_reduction() const;

  [[nodiscard]] bool is_hermitian(double tol = 1e-10) const;

 private:
  ProductBasis basis_;
  CMatrix c_;
  Partition partition_;
  std::vector<std::string> labels_;
  double raw_scale_;
  std::vector<CMatrix> slot_grams_;
  CMatrix gram_;
};

struct Bipartition {
  std::vector<std::size_t> a;
  std::vector<std::size_t> b;

  /// Subsystem A as given; B is the complement in [0, n_slots).
  static Bipartition with_a(std::vector<std::size_t> a, std::size_t n_slots);
  void validate(std::size_t n_slots) const;
};

WavepacketDensityOperator pure_to_density(const ProductStateSuperposition& state);

/// Traces out `traced_slots` and renormalizes to unit trace. The discarded
/// scale multiplies into raw_scale().
WavepacketDensityOperator partial_trace(const WavepacketDensityOperator& rho,
                                        const std::vector<std::size_t>& traced_slots);

/// Trace over the CM slot (slot 0) of a cm-relational operator.
WavepacketDensityOperator g_twirl(const WavepacketDensityOperator& rho);

/// Tensors the same packet onto every term at `position`.
WavepacketDensityOperator attach_slot(const WavepacketDensityOperator& rho,
                                      const Wavepacket& packet, std::size_t position,
                                      Partition partition, const std::string& label);

/// Eigenvalues of rho in an orthonormal frame (ascending).
RVector spectrum(const WavepacketDensityOperator& rho,
                 Orthogonalization method = Orthogonalization::symmetric);
double von_neumann_entropy(const WavepacketDensityOperator& rho,
                           Orthogonalization method = Orthogonalization::symmetric);
double purity(const WavepacketDensityOperator& rho);

/// Entropy of entanglement (nats) of a pure state across the cut.
double entanglement_entropy(const ProductStateSuperposition& state, const Bipartition& cut,
                            Orthogonalization method = Orthogonalization::symmetric);
/// Same for a density operator, which must be pure within 1e-10.
double entanglement_entropy(const WavepacketDensityOperator& rho, const Bipartition& cut,
                            Orthogonalization method = Orthogonalization::symmetric);

/// log2 of the trace norm of the partial transpose on B.
double log_negativity(const WavepacketDensityOperator& rho, const Bipartition& cut);

/// Half the trace norm of rho1 - rho2; both must have the same slot count.
double trace_distance(const WavepacketDensityOperator& rho1,
                      const WavepacketDensityOperator& rho2);

}  // namespace relgauss
