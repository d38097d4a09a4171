#include "relgauss/extraction.hpp"

#include <cmath>

#include "relgauss/errors.hpp"

namespace relgauss {

namespace {

Eigen::Index effective_dim(const ModeSlot& m) {
  return m.statistics == Statistics::fermion ? 2 : m.dim;
}

}  // namespace

ModeSpace pair_space(const ModePair& pair) {
  if (pair.source.name == pair.target.name) {
    throw ValidationError("ModePair: source and target must be distinct modes ('" +
                          pair.source.name + "')");
  }
  if (pair.source.statistics != pair.target.statistics) {
    throw ValidationError("ModePair: statistics mismatch between '" + pair.source.name +
                          "' and '" + pair.target.name + "'");
  }
  if (effective_dim(pair.source) != effective_dim(pair.target)) {
    throw ValidationError("ModePair: truncation mismatch between '" + pair.source.name +
                          "' and '" + pair.target.name + "'");
  }
  if (effective_dim(pair.source) < 2) throw ValidationError("ModePair: truncation must be >= 2");
  return ModeSpace(2, pair.source.statistics, effective_dim(pair.source));
}

CMatrix build_swap_unitary(const ModePair& pair) {
  const ModeSpace space = pair_space(pair);
  const Eigen::Index n = space.dimension();
  if (space.statistics() == Statistics::boson) {
    CMatrix u = CMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto occ = space.occupations_of(i);
      u(space.index_of({occ[1], occ[0]}), i) = 1.0;
    }
    return u;
  }
  const CMatrix a0 = space.annihilation(0);
  const CMatrix a1 = space.annihilation(1);
  const CMatrix n0 = a0.adjoint() * a0;
  const CMatrix n1 = a1.adjoint() * a1;
  return CMatrix::Identity(n, n) - n0 - n1 + a0.adjoint() * a1 + a1.adjoint() * a0;
}

bool check_extraction_condition(const CMatrix& a_a, const CMatrix& a_b, Statistics statistics,
                                double tol) {
  if (a_a.rows() != a_b.rows() || a_a.cols() != a_b.cols()) return false;
  const double sign = statistics == Statistics::fermion ? 1.0 : -1.0;
  const auto bracket = [sign](const CMatrix& x, const CMatrix& y) {
    return max_abs(CMatrix(x * y + sign * y * x));
  };
  const CMatrix ad = a_a.adjoint();
  const CMatrix bd = a_b.adjoint();
  return bracket(a_a, a_b) <= tol && bracket(a_a, bd) <= tol && bracket(ad, a_b) <= tol &&
         bracket(ad, bd) <= tol;
}

double extraction_energy_cost(const LinearPositionHamiltonian& h,
                              const WavepacketDensityOperator& rho_initial,
                              const WavepacketDensityOperator& rho_final, const Bipartition& cut) {
  if (rho_initial.n_slots() < 2) {
    throw ProtocolInapplicable(
        "no entanglement to extract: the initial state has a single tensor slot");
  }
  if (static_cast<std::size_t>(h.slot_weights.size()) != rho_initial.n_slots() ||
      rho_final.n_slots() != rho_initial.n_slots()) {
    throw ValidationError("extraction_energy_cost: Hamiltonian acts on modes outside the cut");
  }
  cut.validate(rho_initial.n_slots());
  const double ln = log_negativity(rho_initial, cut);
  if (ln <= kEntanglementThreshold) {
    throw ProtocolInapplicable("no entanglement to extract: log-negativity " + std::to_string(ln) +
                               " across the cut");
  }
  return expectation(h, rho_final) - expectation(h, rho_initial);
}

double extraction_energy_cost(const CMatrix& h, const CMatrix& rho_initial,
                              const CMatrix& rho_final, Eigen::Index dim_a, Eigen::Index dim_b) {
  const Eigen::Index n = dim_a * dim_b;
  for (const CMatrix* m : {&h, &rho_initial, &rho_final}) {
    if (m->rows() != n || m->cols() != n) {
      throw ValidationError("extraction_energy_cost: Hamiltonian acts on modes outside the cut");
    }
  }
  const double ln = dense_log_negativity(rho_initial, dim_a, dim_b);
  if (ln <= kEntanglementThreshold) {
    throw ProtocolInapplicable("no entanglement to extract: log-negativity " + std::to_string(ln) +
                               " across the cut");
  }
  const auto energy = [&h](const CMatrix& rho) {
    return (rho * h).trace().real() / rho.trace().real();
  };
  return energy(rho_final) - energy(rho_initial);
}

ExtractionCost zmodel_extraction_cost(const ProductStateSuperposition& state,
                                      const CapacitorZModel& z, const Bipartition& cut) {
  const WavepacketDensityOperator rho = pure_to_density(state);
  const auto h =
      LinearPositionHamiltonian::from_zmodel(z, state.partition(), state.n_slots());
  ExtractionCost cost;
  cost.initial_energy = interaction_energy(rho, z);
  cost.initial_log_negativity = rho.n_slots() < 2 ? 0.0 : log_negativity(rho, cut);

  const CVector a = state.amplitudes();
  const auto n = static_cast<Eigen::Index>(state.n_terms());
  const double total = a.squaredNorm();
  CMatrix dephased = CMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    dephased(i, i) = std::norm(a(i)) / total;
    cost.branch_weights.push_back(std::norm(a(i)) / total);
  }
  const WavepacketDensityOperator mixture(rho.basis(), dephased, rho.partition(),
                                          rho.slot_labels());
  cost.mixture = extraction_energy_cost(h, rho, mixture, cut);
  for (std::size_t i = 0; i < state.n_terms(); ++i) {
    const WavepacketDensityOperator branch({state.terms()[i].factors}, CMatrix::Ones(1, 1),
                                           rho.partition(), rho.slot_labels());
    cost.branches.push_back(expectation(h, branch) - cost.initial_energy);
  }
  return cost;
}

}  // namespace relgauss
