#include "relgauss/relational_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "relgauss/errors.hpp"

namespace relgauss {

namespace {

constexpr OverlapOptions kUnit{.raw = false, .allow_unequal_widths = true};
constexpr OverlapOptions kRaw{.raw = true, .allow_unequal_widths = true};

CMatrix slot_overlaps(const ProductBasis& basis, std::size_t slot, OverlapOptions opts) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  CMatrix s(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      s(i, j) = overlap(basis[static_cast<std::size_t>(i)][slot],
                        basis[static_cast<std::size_t>(j)][slot], opts);
      s(j, i) = std::conj(s(i, j));
    }
  }
  return s;
}

RVector frame_spectrum(const CMatrix& m) { return hermitian_eigenvalues(m); }

double trace_norm_hermitian(const CMatrix& m) {
  return frame_spectrum(m).cwiseAbs().sum();
}

std::vector<std::size_t> complement(const std::vector<std::size_t>& slots, std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < n; ++s) {
    if (std::find(slots.begin(), slots.end(), s) == slots.end()) out.push_back(s);
  }
  return out;
}

}  // namespace

WavepacketDensityOperator::WavepacketDensityOperator(ProductBasis basis, CMatrix coefficients,
                                                     Partition partition,
                                                     std::vector<std::string> slot_labels,
                                                     double raw_scale)
    : basis_(std::move(basis)),
      c_(std::move(coefficients)),
      partition_(partition),
      labels_(std::move(slot_labels)),
      raw_scale_(raw_scale) {
  if (basis_.empty()) throw ValidationError("WavepacketDensityOperator: empty basis");
  const auto n = static_cast<Eigen::Index>(basis_.size());
  if (c_.rows() != n || c_.cols() != n) {
    throw ValidationError("WavepacketDensityOperator: coefficient matrix must be n x n");
  }
  const std::size_t slots = basis_.front().size();
  if (slots == 0) throw ValidationError("WavepacketDensityOperator: terms need slots");
  for (const auto& t : basis_) {
    if (t.size() != slots) {
      throw ValidationError("WavepacketDensityOperator: all terms need the same slot count");
    }
  }
  if (labels_.empty()) {
    for (std::size_t s = 0; s < slots; ++s) labels_.push_back(std::to_string(s + 1));
  } else if (labels_.size() != slots) {
    throw ValidationError("WavepacketDensityOperator: one label per slot");
  }
  gram_ = CMatrix::Ones(n, n);
  for (std::size_t s = 0; s < slots; ++s) {
    slot_grams_.push_back(slot_overlaps(basis_, s, kUnit));
    gram_ = gram_.cwiseProduct(slot_grams_.back());
  }
}

CMatrix WavepacketDensityOperator::gram_over(const std::vector<std::size_t>& slots) const {
  const auto n = static_cast<Eigen::Index>(basis_.size());
  CMatrix s = CMatrix::Ones(n, n);
  for (std::size_t slot : slots) s = s.cwiseProduct(slot_grams_.at(slot));
  return s;
}

cplx WavepacketDensityOperator::trace() const {
  return c_.cwiseProduct(gram_.transpose()).sum();
}

CMatrix WavepacketDensityOperator::frame_matrix(Orthogonalization method) const {
  const GramFrame f = gram_frame(gram_, method);
  return f.coords * c_ * f.coords.adjoint();
}

Eigen::Index WavepacketDensityOperator::rank_reduction() const {
  return gram_frame(gram_).dropped;
}

bool WavepacketDensityOperator::is_hermitian(double tol) const {
  return max_abs(CMatrix(c_ - c_.adjoint())) <= tol * std::max(1.0, max_abs(c_));
}

Bipartition Bipartition::with_a(std::vector<std::size_t> a, std::size_t n_slots) {
  Bipartition cut{std::move(a), {}};
  std::sort(cut.a.begin(), cut.a.end());
  cut.b = complement(cut.a, n_slots);
  cut.validate(n_slots);
  return cut;
}

void Bipartition::validate(std::size_t n_slots) const {
  if (a.empty() || b.empty()) throw ValidationError("Bipartition: both sides must be nonempty");
  std::set<std::size_t> seen;
  for (std::size_t s : a) {
    if (s >= n_slots) throw ValidationError("Bipartition: slot index out of range");
    seen.insert(s);
  }
  for (std::size_t s : b) {
    if (s >= n_slots) throw ValidationError("Bipartition: slot index out of range");
    if (!seen.insert(s).second) throw ValidationError("Bipartition: sides overlap");
  }
  if (seen.size() != a.size() + b.size() || seen.size() != n_slots) {
    throw ValidationError("Bipartition: sides must cover every slot exactly once");
  }
}

WavepacketDensityOperator pure_to_density(const ProductStateSuperposition& state) {
  ProductBasis basis;
  for (const auto& t : state.terms()) basis.push_back(t.factors);
  const CVector a = state.amplitudes();
  return WavepacketDensityOperator(std::move(basis), a * a.adjoint(), state.partition(),
                                   state.slot_labels());
}

WavepacketDensityOperator partial_trace(const WavepacketDensityOperator& rho,
                                        const std::vector<std::size_t>& traced_slots) {
  std::set<std::size_t> traced(traced_slots.begin(), traced_slots.end());
  for (std::size_t s : traced) {
    if (s >= rho.n_slots()) throw ValidationError("partial_trace: slot index out of range");
  }
  if (traced.empty()) return rho;
  if (traced.size() == rho.n_slots()) {
    throw ValidationError("partial_trace: tracing every slot leaves a scalar; use trace()");
  }

  const auto n = static_cast<Eigen::Index>(rho.n_terms());
  CMatrix contracted = rho.coefficients();
  CMatrix raw_contracted = rho.coefficients();
  for (std::size_t s : traced) {
    // C'_ij = C_ij <term_j|term_i>_slot
    contracted = contracted.cwiseProduct(rho.slot_gram(s).transpose());
    raw_contracted =
        raw_contracted.cwiseProduct(slot_overlaps(rho.basis(), s, kRaw).transpose());
  }

  std::vector<std::size_t> kept;
  std::vector<std::string> labels;
  for (std::size_t s = 0; s < rho.n_slots(); ++s) {
    if (!traced.contains(s)) {
      kept.push_back(s);
      labels.push_back(rho.slot_labels()[s]);
    }
  }
  ProductBasis basis(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (std::size_t s : kept) basis[static_cast<std::size_t>(i)].push_back(rho.basis()[static_cast<std::size_t>(i)][s]);
  }
  const CMatrix kept_gram = rho.gram_over(kept);
  const double t = contracted.cwiseProduct(kept_gram.transpose()).sum().real();
  const double t_raw = raw_contracted.cwiseProduct(kept_gram.transpose()).sum().real();
  if (!(t > 0.0)) throw NumericError("partial_trace: reduced operator has nonpositive trace");
  return WavepacketDensityOperator(std::move(basis), contracted / t, rho.partition(),
                                   std::move(labels), rho.raw_scale() * t_raw);
}

WavepacketDensityOperator g_twirl(const WavepacketDensityOperator& rho) {
  if (rho.partition() != Partition::cm_relational) {
    throw ValidationError(std::string("g_twirl: expected a cm-relational operator, got ") +
                          std::string(to_string(rho.partition())));
  }
  auto reduced = partial_trace(rho, {0});
  return WavepacketDensityOperator(reduced.basis(), reduced.coefficients(), Partition::relational,
                                   reduced.slot_labels(), reduced.raw_scale());
}

WavepacketDensityOperator attach_slot(const WavepacketDensityOperator& rho,
                                      const Wavepacket& packet, std::size_t position,
                                      Partition partition, const std::string& label) {
  if (position > rho.n_slots()) throw ValidationError("attach_slot: position out of range");
  ProductBasis basis = rho.basis();
  for (auto& t : basis) t.insert(t.begin() + static_cast<std::ptrdiff_t>(position), packet);
  auto labels = rho.slot_labels();
  labels.insert(labels.begin() + static_cast<std::ptrdiff_t>(position), label);
  return WavepacketDensityOperator(std::move(basis), rho.coefficients(), partition,
                                   std::move(labels), rho.raw_scale());
}

RVector spectrum(const WavepacketDensityOperator& rho, Orthogonalization method) {
  return frame_spectrum(rho.frame_matrix(method));
}

double von_neumann_entropy(const WavepacketDensityOperator& rho, Orthogonalization method) {
  const RVector ev = spectrum(rho, method);
  return shannon_entropy_nats(ev.cwiseMax(0.0));
}

double purity(const WavepacketDensityOperator& rho) {
  const CMatrix m = rho.frame_matrix();
  return (m * m).trace().real();
}

double entanglement_entropy(const ProductStateSuperposition& state, const Bipartition& cut,
                            Orthogonalization method) {
  cut.validate(state.n_slots());
  CMatrix s_a = CMatrix::Ones(static_cast<Eigen::Index>(state.n_terms()),
                              static_cast<Eigen::Index>(state.n_terms()));
  CMatrix s_b = s_a;
  for (std::size_t s : cut.a) s_a = s_a.cwiseProduct(state.slot_gram(s));
  for (std::size_t s : cut.b) s_b = s_b.cwiseProduct(state.slot_gram(s));
  const GramFrame fa = gram_frame(s_a, method);
  const GramFrame fb = gram_frame(s_b, method);
  const CVector a = state.amplitudes();
  const CMatrix m = fa.coords * a.asDiagonal() * fb.coords.transpose();
  Eigen::JacobiSVD<CMatrix> svd(m);
  RVector probs = svd.singularValues().array().square();
  const double total = probs.sum();
  if (!(total > 0.0)) throw NumericError("entanglement_entropy: zero state");
  return shannon_entropy_nats(probs / total);
}

double entanglement_entropy(const WavepacketDensityOperator& rho, const Bipartition& cut,
                            Orthogonalization method) {
  cut.validate(rho.n_slots());
  if (std::abs(purity(rho) - 1.0) > 1e-10) {
    throw ValidationError("entanglement_entropy: input is mixed; use log_negativity");
  }
  return von_neumann_entropy(partial_trace(rho, cut.b), method);
}

double log_negativity(const WavepacketDensityOperator& rho, const Bipartition& cut) {
  cut.validate(rho.n_slots());
  if (!rho.is_hermitian()) throw ValidationError("log_negativity: operator is not Hermitian");
  const GramFrame fa = gram_frame(rho.gram_over(cut.a));
  const GramFrame fb = gram_frame(rho.gram_over(cut.b));
  const Eigen::Index ra = fa.rank;
  const Eigen::Index rb = fb.rank;
  const auto n = static_cast<Eigen::Index>(rho.n_terms());
  CMatrix v(ra * rb, n);
  for (Eigen::Index i = 0; i < n; ++i) v.col(i) = kron(fa.coords.col(i), fb.coords.col(i));
  const CMatrix m = v * rho.coefficients() * v.adjoint();
  return dense_log_negativity(m, ra, rb);
}

double trace_distance(const WavepacketDensityOperator& rho1,
                      const WavepacketDensityOperator& rho2) {
  if (rho1.n_slots() != rho2.n_slots()) {
    throw ValidationError("trace_distance: operators have different slot counts");
  }
  ProductBasis basis = rho1.basis();
  basis.insert(basis.end(), rho2.basis().begin(), rho2.basis().end());
  const auto n1 = static_cast<Eigen::Index>(rho1.n_terms());
  const auto n2 = static_cast<Eigen::Index>(rho2.n_terms());
  CMatrix c = CMatrix::Zero(n1 + n2, n1 + n2);
  c.topLeftCorner(n1, n1) = rho1.coefficients() / rho1.trace().real();
  c.bottomRightCorner(n2, n2) = -rho2.coefficients() / rho2.trace().real();
  const WavepacketDensityOperator diff(std::move(basis), std::move(c), rho1.partition());
  return 0.5 * trace_norm_hermitian(diff.frame_matrix());
}

}  // namespace relgauss
