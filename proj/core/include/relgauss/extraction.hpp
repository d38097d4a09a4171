#pragma once

// Swap-based entanglement extraction: unitaries exchanging a source mode with
// a target mode, the algebraic condition on the source modes, and the energy
// the source side exchanges when its entanglement is swapped out.
//
// The reported cost is for the given final states; no partner-mode
// optimization is attempted, so it is not a minimum.

#include <string>
#include <vector>

#include "relgauss/fock.hpp"
#include "relgauss/kahler.hpp"
#include "relgauss/relational_ops.hpp"
#include "relgauss/zmodel.hpp"

namespace relgauss {

struct ModeSlot {
  std::string name;
  Statistics statistics = Statistics::fermion;
  /// Truncation; ignored (always 2) for fermions.
  Eigen::Index dim = 2;
};

struct ModePair {
  ModeSlot source;
  ModeSlot target;
};

/// Joint space of a pair, source as mode 0.
ModeSpace pair_space(const ModePair& pair);

/// U with U^dag a_target U = a_source and U^dag a_source U = a_target.
CMatrix build_swap_unitary(const ModePair& pair);

/// True iff a_A and a_B (and adjoints) mutually anticommute (fermions) or
/// commute (bosons) to `tol`.
bool check_extraction_condition(const CMatrix& a_a, const CMatrix& a_b, Statistics statistics,
                                double tol = 1e-12);

inline constexpr double kEntanglementThreshold = 1e-8;

/// Tr[rho_f H] - Tr[rho_i H], both normalized to unit trace. Throws
/// ProtocolInapplicable if rho_initial carries no log-negativity across `cut`.
double extraction_energy_cost(const LinearPositionHamiltonian& h,
                              const WavepacketDensityOperator& rho_initial,
                              const WavepacketDensityOperator& rho_final, const Bipartition& cut);

/// Dense variant on a dim_a x dim_b space; the cut is the tensor split.
double extraction_energy_cost(const CMatrix& h, const CMatrix& rho_initial,
                              const CMatrix& rho_final, Eigen::Index dim_a, Eigen::Index dim_b);

struct ExtractionCost {
  double initial_energy = 0.0;
  double initial_log_negativity = 0.0;
  /// Final state dephased in the branch basis.
  double mixture = 0.0;
  /// Final state collapsed to each branch in turn.
  std::vector<double> branches;
  std::vector<double> branch_weights;
};

/// Cost of extracting the CM|relational entanglement of a pure cm-relational
/// state under the Z-model Hamiltonian.
ExtractionCost zmodel_extraction_cost(const ProductStateSuperposition& state,
                                      const CapacitorZModel& z, const Bipartition& cut);

}  // namespace relgauss
