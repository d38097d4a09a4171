#pragma once

// N-particle product/superposition states and the linear canonical map from
// the external partition (x_k, p_k) to the center-of-mass/relational
// partition (x_cm, x_{i|r}; p_cm, p_{i|r}):
//   x_cm = sum_k m_k x_k / M        p_cm = sum_k p_k
//   x_{i|r} = x_i - x_r             p_{i|r} = p_i - (m_i / M) p_cm
// Phase-space vectors are blocked: all positions first, then all momenta.

#include <cstddef>
#include <string>
#include <vector>

#include "relgauss/gaussian_states.hpp"
#include "relgauss/linalg.hpp"

namespace relgauss {

enum class Partition { external, cm_relational, relational };
std::string_view to_string(Partition p);

struct Branch {
  cplx amplitude{1.0, 0.0};
  double center = 0.0;
};

struct ParticleConfig {
  /// Defaults to all ones when empty.
  std::vector<double> masses;
  /// One entry per particle: the location superposition of that particle.
  std::vector<std::vector<Branch>> positions;
  double omega = 50.0;
};

class PartitionMap {
 public:
  /// reference is the 0-based index of the reference particle.
  static PartitionMap build(const std::vector<double>& masses, std::size_t reference = 0);
  /// Wraps an arbitrary linear map, e.g. to test canonicity of candidates.
  static PartitionMap from_matrix(RMatrix t, std::vector<double> masses,
                                  std::size_t reference = 0);

  [[nodiscard]] const RMatrix& matrix() const { return t_; }
  [[nodiscard]] const RMatrix& inverse() const { return t_inv_; }
  [[nodiscard]] const std::vector<double>& masses() const { return masses_; }
  [[nodiscard]] std::size_t n_particles() const { return masses_.size(); }
  [[nodiscard]] std::size_t reference() const { return reference_; }
  [[nodiscard]] double total_mass() const;

  [[nodiscard]] RVector apply(const RVector& phase_point) const { return t_ * phase_point; }
  [[nodiscard]] RVector apply_inverse(const RVector& phase_point) const {
    return t_inv_ * phase_point;
  }

  /// Slot labels in output order: "cm", then "i|r" (1-based particle numbers).
  [[nodiscard]] std::vector<std::string> slot_labels() const;

 private:
  RMatrix t_;
  RMatrix t_inv_;
  std::vector<double> masses_;
  std::size_t reference_ = 0;
};

/// Real canonical symplectic form [[0, I], [-I, 0]] on n degrees of freedom.
RMatrix canonical_symplectic(std::size_t n);

/// T Omega T^T == Omega within tol.
bool check_canonical(const PartitionMap& map, double tol = 1e-13);
double canonical_residual(const PartitionMap& map);

struct ProductTerm {
  cplx amplitude;
  std::vector<Wavepacket> factors;
};

class ProductStateSuperposition {
 public:
  /// Normalizes the amplitudes under the Gram metric.
  ProductStateSuperposition(Partition partition, std::vector<ProductTerm> terms,
                            std::vector<std::string> slot_labels = {});

  [[nodiscard]] Partition partition() const { return partition_; }
  [[nodiscard]] const std::vector<ProductTerm>& terms() const { return terms_; }
  [[nodiscard]] std::size_t n_terms() const { return terms_.size(); }
  [[nodiscard]] std::size_t n_slots() const { return terms_.front().factors.size(); }
  [[nodiscard]] const std::vector<std::string>& slot_labels() const { return labels_; }
  /// Gram-metric norm of the amplitudes as supplied, before normalization.
  [[nodiscard]] double input_norm() const { return input_norm_; }

  /// S_ij = <term_i|term_j> (amplitudes excluded).
  [[nodiscard]] CMatrix gram() const;
  /// <term_i|term_j> restricted to one slot.
  [[nodiscard]] CMatrix slot_gram(std::size_t slot) const;
  [[nodiscard]] CVector amplitudes() const;
  [[nodiscard]] double norm() const;

 private:
  Partition partition_;
  std::vector<ProductTerm> terms_;
  std::vector<std::string> labels_;
  double input_norm_ = 1.0;
};

/// Expands the per-particle superpositions into a sum of product terms in the
/// external partition.
ProductStateSuperposition build_external_state(const ParticleConfig& config);

/// Second moments of a transformed branch. The partitioned state keeps one
/// wavepacket per slot with the marginal width; the inter-slot correlations
/// it does not carry are reported here.
struct CovarianceReport {
  RMatrix covariance;  // blocked (x', p') covariance of one branch
  double max_cm_relational_correlation = 0.0;
  double max_relational_correlation = 0.0;
};

struct CmRelationalResult {
  ProductStateSuperposition state;
  std::vector<CovarianceReport> covariances;  // one per term
};

CmRelationalResult to_cm_relational_detailed(const ProductStateSuperposition& state,
                                             const PartitionMap& map);
ProductStateSuperposition to_cm_relational(const ProductStateSuperposition& state,
                                           const PartitionMap& map);

struct SlotDistinctness {
  std::string label;
  RMatrix overlap_magnitudes;  // |<term_i|term_j>| on this slot
  bool coincident = false;     // some pair of distinct terms overlaps above 1 - 1e-9
};

std::vector<SlotDistinctness> branch_distinctness(const ProductStateSuperposition& state,
                                                  double coincidence_tol = 1e-9);

}  // namespace relgauss
