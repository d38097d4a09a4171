#include "relgauss/zmodel.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "relgauss/errors.hpp"

namespace relgauss {

void CapacitorZModel::validate() const {
  if (!(plate_separation > 0.0) || !std::isfinite(plate_separation)) {
    throw ValidationError("CapacitorZModel: plate separation must be positive");
  }
  if (!std::isfinite(coupling()) || !std::isfinite(x_left)) {
    throw ValidationError("CapacitorZModel: coupling and plate position must be finite");
  }
}

LinearPositionHamiltonian LinearPositionHamiltonian::from_zmodel(
    const CapacitorZModel& z, Partition partition, std::size_t n_slots,
    const std::vector<double>& masses) {
  z.validate();
  LinearPositionHamiltonian h;
  h.coupling = z.coupling();
  h.offset = z.x_left;
  h.slot_weights = RVector::Zero(static_cast<Eigen::Index>(n_slots));
  switch (partition) {
    case Partition::external: {
      if (!masses.empty() && masses.size() != n_slots) {
        throw ValidationError("Z-model: one mass per particle slot");
      }
      std::vector<double> m = masses.empty() ? std::vector<double>(n_slots, 1.0) : masses;
      const double total = std::accumulate(m.begin(), m.end(), 0.0);
      for (std::size_t k = 0; k < n_slots; ++k) {
        h.slot_weights(static_cast<Eigen::Index>(k)) = m[k] / total;
      }
      break;
    }
    case Partition::cm_relational:
      h.slot_weights(0) = 1.0;
      break;
    case Partition::relational:
      throw ValidationError("Z-model: a purely relational state has no center-of-mass slot");
  }
  return h;
}

double expectation(const LinearPositionHamiltonian& h, const WavepacketDensityOperator& rho) {
  if (static_cast<std::size_t>(h.slot_weights.size()) != rho.n_slots()) {
    throw ValidationError("expectation: Hamiltonian acts on " +
                          std::to_string(h.slot_weights.size()) + " slots, operator has " +
                          std::to_string(rho.n_slots()));
  }
  const cplx tr = rho.trace();
  if (std::abs(tr) < 1e-300) throw NumericError("expectation: zero-trace operator");
  if (h.coupling == 0.0) return 0.0;

  const auto n = static_cast<Eigen::Index>(rho.n_terms());
  constexpr OverlapOptions kOpts{.raw = false, .allow_unequal_widths = true};
  // <term_j| sum_k w_k x_k |term_i>
  CMatrix x = CMatrix::Zero(n, n);
  for (std::size_t k = 0; k < rho.n_slots(); ++k) {
    const double w = h.slot_weights(static_cast<Eigen::Index>(k));
    if (w == 0.0) continue;
    std::vector<std::size_t> others;
    for (std::size_t s = 0; s < rho.n_slots(); ++s) {
      if (s != k) others.push_back(s);
    }
    const CMatrix rest = rho.gram_over(others);
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = 0; i < n; ++i) {
        x(j, i) += w * rest(j, i) *
                   position_matrix_element(rho.basis()[static_cast<std::size_t>(j)][k],
                                           rho.basis()[static_cast<std::size_t>(i)][k], kOpts);
      }
    }
  }
  const cplx mean = rho.coefficients().cwiseProduct(x.transpose()).sum() / tr;
  return h.coupling * (mean.real() - h.offset);
}

namespace {

void check_field_region(const WavepacketDensityOperator& rho, const CapacitorZModel& z,
                        const LinearPositionHamiltonian& h) {
  for (std::size_t i = 0; i < rho.n_terms(); ++i) {
    const auto& term = rho.basis()[i];
    if (rho.partition() == Partition::external) {
      for (std::size_t k = 0; k < term.size(); ++k) {
        if (!z.contains(term[k].center())) {
          throw ValidationError("branch " + std::to_string(i + 1) + ": particle " +
                                std::to_string(k + 1) + " at " + std::to_string(term[k].center()) +
                                " is outside the capacitor field region");
        }
      }
    } else {
      double x = 0.0;
      for (std::size_t k = 0; k < term.size(); ++k) {
        x += h.slot_weights(static_cast<Eigen::Index>(k)) * term[k].center();
      }
      if (!z.contains(x)) {
        throw ValidationError("branch " + std::to_string(i + 1) + ": center of mass at " +
                              std::to_string(x) + " is outside the capacitor field region");
      }
    }
  }
}

}  // namespace

double interaction_energy(const WavepacketDensityOperator& rho, const CapacitorZModel& z,
                          const std::vector<double>& masses) {
  const auto h = LinearPositionHamiltonian::from_zmodel(z, rho.partition(), rho.n_slots(), masses);
  check_field_region(rho, z, h);
  return expectation(h, rho);
}

double interaction_energy(const ProductStateSuperposition& state, const CapacitorZModel& z,
                          const std::vector<double>& masses) {
  return interaction_energy(pure_to_density(state), z, masses);
}

std::vector<double> branch_energies(const ProductStateSuperposition& state,
                                    const CapacitorZModel& z,
                                    const std::vector<double>& masses) {
  std::vector<double> out;
  for (const auto& term : state.terms()) {
    const WavepacketDensityOperator branch({term.factors}, CMatrix::Ones(1, 1), state.partition(),
                                           state.slot_labels());
    out.push_back(interaction_energy(branch, z, masses));
  }
  return out;
}

}  // namespace relgauss
