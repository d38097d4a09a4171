#include "relgauss/povm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "relgauss/errors.hpp"
#include "relgauss/quadrature.hpp"

namespace relgauss {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Gaussian tails beyond this many widths from the integrand center are far
// below the quadrature tolerance.
constexpr double kTailWidths = 12.0;

void check_state(const ProductStateSuperposition& state) {
  if (state.partition() != Partition::cm_relational) {
    throw ValidationError("POVM: expected a cm-relational state");
  }
  if (state.n_slots() < 2) throw ValidationError("POVM: state needs at least one relational slot");
  const Wavepacket& first = state.terms().front().factors.front();
  for (const auto& t : state.terms()) {
    const Wavepacket& cm = t.factors.front();
    if (cm.kind() != Localization::position) {
      throw ValidationError("POVM: CM packets must be position localized");
    }
    if (std::abs(cm.width() - first.width()) > 1e-12 * first.width()) {
      throw ValidationError("POVM: CM packets of all branches must share one width");
    }
  }
}

double cm_width(const ProductStateSuperposition& state) {
  return state.terms().front().factors.front().width();
}

double half_erf_window(double lo, double hi, double mu, double scale) {
  const auto e = [&](double x) {
    if (std::isinf(x)) return x > 0 ? 1.0 : -1.0;
    return std::erf((x - mu) / scale);
  };
  return 0.5 * (e(hi) - e(lo));
}

ProductBasis relational_basis(const ProductStateSuperposition& state) {
  ProductBasis basis;
  for (const auto& t : state.terms()) basis.emplace_back(t.factors.begin() + 1, t.factors.end());
  return basis;
}

std::vector<std::string> relational_labels(const ProductStateSuperposition& state) {
  return {state.slot_labels().begin() + 1, state.slot_labels().end()};
}

ConditionalOutcome assemble(const ProductStateSuperposition& state, const CMatrix& weights,
                            const CMatrix& total_weights) {
  const CVector a = state.amplitudes();
  const CMatrix c = a * a.adjoint();
  // C'_ij = C_ij w_ji
  const CMatrix cond = c.cwiseProduct(weights.transpose());
  const CMatrix total = c.cwiseProduct(total_weights.transpose());
  WavepacketDensityOperator rel(relational_basis(state), cond, Partition::relational,
                                relational_labels(state));
  const double raw = rel.trace().real();
  const double norm = total.cwiseProduct(rel.gram().transpose()).sum().real();
  if (!(norm > 0.0)) throw NumericError("POVM: state has zero total detection weight");
  const double p = std::clamp(raw / norm, 0.0, 1.0);
  if (raw > 0.0) {
    rel = WavepacketDensityOperator(rel.basis(), cond / raw, Partition::relational,
                                    rel.slot_labels(), raw);
  }
  return ConditionalOutcome{p, std::move(rel), raw};
}

}  // namespace

DetectorBinning::DetectorBinning(double lo, double hi, int) : lo_(lo), hi_(hi) {
  if (std::isnan(lo) || std::isnan(hi) || !(hi > lo) || lo == kInf || hi == -kInf) {
    throw ValidationError("DetectorBinning: bin must satisfy lo < hi");
  }
}

DetectorBinning::DetectorBinning(double origin, double width) : DetectorBinning(origin, origin + width, 0) {
  if (!std::isfinite(origin)) throw ValidationError("DetectorBinning: origin must be finite");
  if (!(width > 0.0)) throw ValidationError("DetectorBinning: width must be positive");
}

DetectorBinning DetectorBinning::interval(double lo, double hi) { return {lo, hi, 0}; }

DetectorBinning DetectorBinning::whole_line() { return {-kInf, kInf, 0}; }

DetectorBinning DetectorBinning::centered(double x, double width) {
  if (std::isinf(width)) return whole_line();
  return DetectorBinning(x - width / 2.0, width);
}

double bin_energy(const DetectorBinning& bin, double q_sigma) {
  return q_sigma * (bin.lo() + bin.width() / 2.0);
}

CMatrix cm_bin_weights_quadrature(const ProductStateSuperposition& state,
                                  const DetectorBinning& bin, double abs_tol) {
  check_state(state);
  const double b = cm_width(state);
  const double norm = 1.0 / (b * std::sqrt(2.0 * std::numbers::pi));
  const auto n = static_cast<Eigen::Index>(state.n_terms());
  CMatrix w(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const Wavepacket& pj = state.terms()[static_cast<std::size_t>(j)].factors.front();
      const Wavepacket& pi = state.terms()[static_cast<std::size_t>(i)].factors.front();
      const double mu = 0.5 * (pi.center() + pj.center());
      const double lo = std::max(bin.lo(), mu - kTailWidths * b);
      const double hi = std::min(bin.hi(), mu + kTailWidths * b);
      if (!(hi > lo)) {
        w(j, i) = 0.0;
        continue;
      }
      const auto integrand = [&](double x) {
        const Wavepacket chi = Wavepacket::with_width(x, 0.0, b);
        return norm * overlap(pj, chi) * overlap(chi, pi);
      };
      w(j, i) = integrate(integrand, lo, hi, abs_tol).value;
    }
  }
  return w;
}

CMatrix cm_bin_weights_closed_form(const ProductStateSuperposition& state,
                                   const DetectorBinning& bin) {
  check_state(state);
  const double b = cm_width(state);
  const auto n = static_cast<Eigen::Index>(state.n_terms());
  CMatrix w(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const Wavepacket& pj = state.terms()[static_cast<std::size_t>(j)].factors.front();
      const Wavepacket& pi = state.terms()[static_cast<std::size_t>(i)].factors.front();
      if (pj.kick() != 0.0 || pi.kick() != 0.0) {
        throw ValidationError("closed_form_probability: CM packets must carry no momentum kick");
      }
      const double d = pi.center() - pj.center();
      const double mu = 0.5 * (pi.center() + pj.center());
      w(j, i) = std::exp(-d * d / (8.0 * b * b)) *
                half_erf_window(bin.lo(), bin.hi(), mu, b * std::sqrt(2.0));
    }
  }
  return w;
}

ConditionalOutcome conditional_relational_state(const ProductStateSuperposition& state,
                                                const DetectorBinning& bin) {
  return assemble(state, cm_bin_weights_quadrature(state, bin),
                  cm_bin_weights_quadrature(state, DetectorBinning::whole_line()));
}

ConditionalOutcome closed_form_probability(const ProductStateSuperposition& state,
                                           const DetectorBinning& bin) {
  return assemble(state, cm_bin_weights_closed_form(state, bin),
                  cm_bin_weights_closed_form(state, DetectorBinning::whole_line()));
}

WavepacketDensityOperator zmodel_reference(const ProductStateSuperposition& state,
                                           const DetectorBinning& bin) {
  check_state(state);
  ProductBasis basis;
  std::vector<cplx> amps;
  for (const auto& t : state.terms()) {
    if (bin.contains(t.factors.front().center())) {
      basis.emplace_back(t.factors.begin() + 1, t.factors.end());
      amps.push_back(t.amplitude);
    }
  }
  if (basis.empty()) throw ValidationError("zmodel_reference: no branch has its CM in the bin");
  const CVector a = Eigen::Map<const CVector>(amps.data(), static_cast<Eigen::Index>(amps.size()));
  WavepacketDensityOperator rho(std::move(basis), a * a.adjoint(), Partition::relational,
                                relational_labels(state));
  return WavepacketDensityOperator(rho.basis(), rho.coefficients() / rho.trace().real(),
                                   Partition::relational, rho.slot_labels());
}

PositionUncertainty position_uncertainty(double delta_h, double q_sigma) {
  if (q_sigma == 0.0) return {std::numeric_limits<double>::infinity(), true};
  const double v = std::abs(delta_h / q_sigma);
  if (!std::isfinite(v)) return {std::numeric_limits<double>::infinity(), true};
  return {v, false};
}

std::vector<SweepRow> limit_sweep(const SweepSpec& spec) {
  if (spec.q_sigma_grid.empty() || spec.width_grid.empty()) {
    throw ValidationError("limit_sweep: grids must be nonempty");
  }
  const auto monotone = [](const std::vector<double>& g) {
    return std::is_sorted(g.begin(), g.end()) || std::is_sorted(g.rbegin(), g.rend());
  };
  if (!monotone(spec.q_sigma_grid) || !monotone(spec.width_grid)) {
    throw ValidationError("limit_sweep: grids must be monotone");
  }
  const PartitionMap map = PartitionMap::build(
      spec.particles.masses.empty() ? std::vector<double>(spec.particles.positions.size(), 1.0)
                                    : spec.particles.masses,
      spec.reference);

  std::vector<SweepRow> rows;
  for (double b : spec.width_grid) {
    if (!(b > 0.0)) throw ValidationError("limit_sweep: widths must be positive");
    ParticleConfig cfg = spec.particles;
    cfg.omega = 1.0 / (2.0 * b * b);
    const auto state = to_cm_relational(build_external_state(cfg), map);
    if (spec.measured_branch >= state.n_terms()) {
      throw ValidationError("limit_sweep: measured branch out of range");
    }
    const double x_measured = state.terms()[spec.measured_branch].factors.front().center();
    const auto twirl = g_twirl(pure_to_density(state));
    for (double qs : spec.q_sigma_grid) {
      const PositionUncertainty dx = position_uncertainty(spec.delta_h, qs);
      const DetectorBinning bin = DetectorBinning::centered(x_measured, dx.value);
      const ConditionalOutcome out = closed_form_probability(state, bin);
      SweepRow row;
      row.q_sigma = qs;
      row.b = b;
      row.delta_x = dx.value;
      row.p = out.probability;
      row.log_negativity =
          out.state.n_slots() < 2 ? 0.0 : log_negativity(out.state, Bipartition::with_a({0}, out.state.n_slots()));
      row.dist_to_twirl = trace_distance(out.state, twirl);
      row.dist_to_zmodel = trace_distance(out.state, zmodel_reference(state, bin));
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace relgauss
