#include "relgauss/partition.hpp"

#include <cmath>
#include <numeric>

#include "relgauss/errors.hpp"

namespace relgauss {

std::string_view to_string(Partition p) {
  switch (p) {
    case Partition::external: return "external";
    case Partition::cm_relational: return "cm-relational";
    case Partition::relational: return "relational";
  }
  return "unknown";
}

RMatrix canonical_symplectic(std::size_t n) {
  const auto m = static_cast<Eigen::Index>(n);
  RMatrix om = RMatrix::Zero(2 * m, 2 * m);
  om.topRightCorner(m, m) = RMatrix::Identity(m, m);
  om.bottomLeftCorner(m, m) = -RMatrix::Identity(m, m);
  return om;
}

PartitionMap PartitionMap::build(const std::vector<double>& masses, std::size_t reference) {
  if (masses.empty()) throw ValidationError("build_partition_map: need at least one particle");
  for (double m : masses) {
    if (!(m > 0.0) || !std::isfinite(m)) {
      throw ValidationError("build_partition_map: masses must be positive");
    }
  }
  if (reference >= masses.size()) {
    throw ValidationError("build_partition_map: reference particle out of range");
  }
  const auto n = static_cast<Eigen::Index>(masses.size());
  const double total = std::accumulate(masses.begin(), masses.end(), 0.0);
  RMatrix x_block = RMatrix::Zero(n, n);
  RMatrix p_block = RMatrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    x_block(0, k) = masses[static_cast<std::size_t>(k)] / total;
    p_block(0, k) = 1.0;
  }
  const auto ref = static_cast<Eigen::Index>(reference);
  Eigen::Index row = 1;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i == ref) continue;
    x_block(row, i) = 1.0;
    x_block(row, ref) = -1.0;
    const double frac = masses[static_cast<std::size_t>(i)] / total;
    for (Eigen::Index k = 0; k < n; ++k) p_block(row, k) = (k == i ? 1.0 : 0.0) - frac;
    ++row;
  }
  RMatrix t = RMatrix::Zero(2 * n, 2 * n);
  t.topLeftCorner(n, n) = x_block;
  t.bottomRightCorner(n, n) = p_block;
  return from_matrix(std::move(t), masses, reference);
}

PartitionMap PartitionMap::from_matrix(RMatrix t, std::vector<double> masses,
                                       std::size_t reference) {
  const auto n = static_cast<Eigen::Index>(masses.size());
  if (t.rows() != 2 * n || t.cols() != 2 * n) {
    throw ValidationError("PartitionMap: matrix must be 2N x 2N");
  }
  Eigen::FullPivLU<RMatrix> lu(t);
  if (!lu.isInvertible()) throw NumericError("PartitionMap: map is singular");
  PartitionMap map;
  map.t_inv_ = lu.inverse();
  map.t_ = std::move(t);
  map.masses_ = std::move(masses);
  map.reference_ = reference;
  return map;
}

double PartitionMap::total_mass() const {
  return std::accumulate(masses_.begin(), masses_.end(), 0.0);
}

std::vector<std::string> PartitionMap::slot_labels() const {
  std::vector<std::string> labels{"cm"};
  for (std::size_t i = 0; i < masses_.size(); ++i) {
    if (i == reference_) continue;
    labels.push_back(std::to_string(i + 1) + "|" + std::to_string(reference_ + 1));
  }
  return labels;
}

double canonical_residual(const PartitionMap& map) {
  const RMatrix om = canonical_symplectic(map.n_particles());
  return max_abs(RMatrix(map.matrix() * om * map.matrix().transpose() - om));
}

bool check_canonical(const PartitionMap& map, double tol) {
  return canonical_residual(map) <= tol;
}

ProductStateSuperposition::ProductStateSuperposition(Partition partition,
                                                     std::vector<ProductTerm> terms,
                                                     std::vector<std::string> slot_labels)
    : partition_(partition), terms_(std::move(terms)), labels_(std::move(slot_labels)) {
  if (terms_.empty()) throw ValidationError("ProductStateSuperposition: need at least one term");
  const std::size_t slots = terms_.front().factors.size();
  if (slots == 0) throw ValidationError("ProductStateSuperposition: terms need factors");
  for (const auto& t : terms_) {
    if (t.factors.size() != slots) {
      throw ValidationError("ProductStateSuperposition: all terms need the same slot count");
    }
  }
  if (labels_.empty()) {
    for (std::size_t s = 0; s < slots; ++s) labels_.push_back(std::to_string(s + 1));
  } else if (labels_.size() != slots) {
    throw ValidationError("ProductStateSuperposition: one label per slot");
  }
  input_norm_ = norm();
  if (!(input_norm_ > 0.0)) throw ValidationError("ProductStateSuperposition: zero state");
  for (auto& t : terms_) t.amplitude /= input_norm_;
}

CMatrix ProductStateSuperposition::slot_gram(std::size_t slot) const {
  const auto n = static_cast<Eigen::Index>(terms_.size());
  CMatrix s(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      s(i, j) = overlap(terms_[static_cast<std::size_t>(i)].factors[slot],
                        terms_[static_cast<std::size_t>(j)].factors[slot],
                        OverlapOptions{.raw = false, .allow_unequal_widths = true});
    }
  }
  return s;
}

CMatrix ProductStateSuperposition::gram() const {
  const auto n = static_cast<Eigen::Index>(terms_.size());
  CMatrix s = CMatrix::Ones(n, n);
  for (std::size_t slot = 0; slot < n_slots(); ++slot) s = s.cwiseProduct(slot_gram(slot));
  return s;
}

CVector ProductStateSuperposition::amplitudes() const {
  CVector a(static_cast<Eigen::Index>(terms_.size()));
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    a(static_cast<Eigen::Index>(i)) = terms_[i].amplitude;
  }
  return a;
}

double ProductStateSuperposition::norm() const {
  const CVector a = amplitudes();
  return std::sqrt(std::max(0.0, a.dot(gram() * a).real()));
}

ProductStateSuperposition build_external_state(const ParticleConfig& config) {
  const std::size_t n = config.positions.size();
  if (n == 0) throw ValidationError("ParticleConfig: need at least one particle");
  if (!config.masses.empty() && config.masses.size() != n) {
    throw ValidationError("ParticleConfig: one mass per particle");
  }
  for (double m : config.masses) {
    if (!(m > 0.0)) throw ValidationError("ParticleConfig: masses must be positive");
  }
  if (!(config.omega > 0.0)) throw ValidationError("ParticleConfig: omega must be positive");

  // Per-particle normalization under each particle's own Gram metric.
  std::vector<std::vector<std::pair<cplx, Wavepacket>>> factors(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& branches = config.positions[k];
    if (branches.empty()) {
      throw ValidationError("ParticleConfig: particle " + std::to_string(k + 1) +
                            " has no position branches");
    }
    cplx norm2{0.0, 0.0};
    for (const auto& bi : branches) {
      for (const auto& bj : branches) {
        norm2 += std::conj(bi.amplitude) * bj.amplitude *
                 overlap(position_wavepacket(bi.center, config.omega),
                         position_wavepacket(bj.center, config.omega));
      }
    }
    if (!(norm2.real() > 0.0)) {
      throw ValidationError("ParticleConfig: particle " + std::to_string(k + 1) +
                            " superposition has zero norm");
    }
    const double scale = 1.0 / std::sqrt(norm2.real());
    for (const auto& b : branches) {
      factors[k].emplace_back(b.amplitude * scale, position_wavepacket(b.center, config.omega));
    }
  }

  std::vector<ProductTerm> terms{ProductTerm{cplx{1.0, 0.0}, {}}};
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<ProductTerm> next;
    for (const auto& t : terms) {
      for (const auto& [amp, packet] : factors[k]) {
        ProductTerm extended = t;
        extended.amplitude *= amp;
        extended.factors.push_back(packet);
        next.push_back(std::move(extended));
      }
    }
    terms = std::move(next);
  }
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < n; ++k) labels.push_back(std::to_string(k + 1));
  return ProductStateSuperposition(Partition::external, std::move(terms), std::move(labels));
}

CmRelationalResult to_cm_relational_detailed(const ProductStateSuperposition& state,
                                             const PartitionMap& map) {
  if (state.partition() != Partition::external) {
    throw ValidationError("to_cm_relational: state must be in the external partition");
  }
  const std::size_t n = map.n_particles();
  if (state.n_slots() != n) {
    throw ValidationError("to_cm_relational: state has " + std::to_string(state.n_slots()) +
                          " slots but the map has " + std::to_string(n) + " particles");
  }
  const auto dim = static_cast<Eigen::Index>(n);
  const RMatrix& t = map.matrix();

  std::vector<ProductTerm> terms;
  std::vector<CovarianceReport> reports;
  for (const auto& term : state.terms()) {
    RVector mean(2 * dim);
    RMatrix cov = RMatrix::Zero(2 * dim, 2 * dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
      const auto& w = term.factors[static_cast<std::size_t>(k)];
      const double s = w.position_width();
      mean(k) = w.center();
      mean(dim + k) = w.kick();
      cov(k, k) = s * s / 2.0;
      cov(dim + k, dim + k) = 1.0 / (2.0 * s * s);
    }
    const RVector mapped = t * mean;
    const RMatrix mapped_cov = t * cov * t.transpose();

    ProductTerm out{term.amplitude, {}};
    for (Eigen::Index j = 0; j < dim; ++j) {
      const double s = std::sqrt(2.0 * mapped_cov(j, j));
      out.factors.push_back(Wavepacket::with_width(mapped(j), mapped(dim + j), s));
    }
    terms.push_back(std::move(out));

    CovarianceReport report;
    report.covariance = mapped_cov;
    for (Eigen::Index i = 0; i < dim; ++i) {
      for (Eigen::Index j = i + 1; j < dim; ++j) {
        for (Eigen::Index off : {Eigen::Index{0}, dim}) {
          const double c = std::abs(mapped_cov(i + off, j + off)) /
                           std::sqrt(mapped_cov(i + off, i + off) * mapped_cov(j + off, j + off));
          double& slot = i == 0 ? report.max_cm_relational_correlation
                                : report.max_relational_correlation;
          slot = std::max(slot, c);
        }
      }
    }
    reports.push_back(std::move(report));
  }
  return CmRelationalResult{
      ProductStateSuperposition(Partition::cm_relational, std::move(terms), map.slot_labels()),
      std::move(reports)};
}

ProductStateSuperposition to_cm_relational(const ProductStateSuperposition& state,
                                           const PartitionMap& map) {
  return to_cm_relational_detailed(state, map).state;
}

std::vector<SlotDistinctness> branch_distinctness(const ProductStateSuperposition& state,
                                                  double coincidence_tol) {
  std::vector<SlotDistinctness> out;
  const auto n = static_cast<Eigen::Index>(state.n_terms());
  for (std::size_t slot = 0; slot < state.n_slots(); ++slot) {
    SlotDistinctness d;
    d.label = state.slot_labels()[slot];
    d.overlap_magnitudes = state.slot_gram(slot).cwiseAbs();
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        if (d.overlap_magnitudes(i, j) > 1.0 - coincidence_tol) d.coincident = true;
      }
    }
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace relgauss
