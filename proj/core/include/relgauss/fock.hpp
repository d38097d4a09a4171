#pragma once

#include <cstddef>

#include "relgauss/kahler.hpp"
#include "relgauss/linalg.hpp"

namespace relgauss {

/// Truncated single-mode Fock amplitudes. Fermionic vectors have exactly two
/// entries (|0>, |1>).
class FockVector {
 public:
  FockVector(CVector amplitudes, Statistics statistics);

  static FockVector vacuum(Eigen::Index dim, Statistics statistics = Statistics::boson);
  static FockVector number_state(Eigen::Index dim, Eigen::Index n,
                                 Statistics statistics = Statistics::boson);

  [[nodiscard]] const CVector& amplitudes() const { return amp_; }
  [[nodiscard]] Statistics statistics() const { return stats_; }
  [[nodiscard]] Eigen::Index dim() const { return amp_.size(); }
  [[nodiscard]] double norm() const { return amp_.norm(); }

 private:
  CVector amp_;
  Statistics stats_;
};

/// Single-mode truncated operators. x and p are taken with respect to an
/// oscillator of frequency omega: a = sqrt(omega/2) (x + i p / omega).
CMatrix annihilation(Eigen::Index dim);
CMatrix creation(Eigen::Index dim);
CMatrix number_operator(Eigen::Index dim);
CMatrix position_operator(Eigen::Index dim, double omega);
CMatrix momentum_operator(Eigen::Index dim, double omega);

/// Probability in the top `max(2, dim/8)` levels, the tell-tale of a state
/// pushing against the truncation.
double truncation_leakage(const CVector& amplitudes);

inline constexpr double kLeakageThreshold = 1e-6;

/// Several modes of one statistics on a joint truncated space, mode 0 being
/// the most significant tensor factor. Fermionic ladder operators carry
/// Jordan-Wigner strings so distinct modes anticommute exactly.
class ModeSpace {
 public:
  ModeSpace(std::size_t n_modes, Statistics statistics, Eigen::Index dim_per_mode = 2);

  [[nodiscard]] std::size_t n_modes() const { return n_modes_; }
  [[nodiscard]] Statistics statistics() const { return stats_; }
  [[nodiscard]] Eigen::Index dim_per_mode() const { return local_dim_; }
  [[nodiscard]] Eigen::Index dimension() const { return total_dim_; }

  [[nodiscard]] CMatrix annihilation(std::size_t mode) const;
  [[nodiscard]] CMatrix creation(std::size_t mode) const;

  /// Basis index of an occupation pattern (one entry per mode).
  [[nodiscard]] Eigen::Index index_of(const std::vector<Eigen::Index>& occupations) const;
  [[nodiscard]] std::vector<Eigen::Index> occupations_of(Eigen::Index index) const;

 private:
  std::size_t n_modes_;
  Statistics stats_;
  Eigen::Index local_dim_;
  Eigen::Index total_dim_;
};

}  // namespace relgauss
