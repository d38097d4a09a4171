#include "relgauss/fock.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "relgauss/errors.hpp"

namespace relgauss {

FockVector::FockVector(CVector amplitudes, Statistics statistics)
    : amp_(std::move(amplitudes)), stats_(statistics) {
  if (amp_.size() == 0) throw ValidationError("FockVector: empty amplitude vector");
  if (stats_ == Statistics::fermion && amp_.size() != 2) {
    throw ValidationError("FockVector: fermionic vectors have exactly 2 amplitudes");
  }
  if (amp_.norm() > 1.0 + 1e-10) {
    throw ValidationError("FockVector: norm exceeds 1");
  }
}

FockVector FockVector::vacuum(Eigen::Index dim, Statistics statistics) {
  return number_state(dim, 0, statistics);
}

FockVector FockVector::number_state(Eigen::Index dim, Eigen::Index n, Statistics statistics) {
  if (n < 0 || n >= dim) throw ValidationError("FockVector: occupation outside truncation");
  return FockVector(CVector::Unit(dim, n), statistics);
}

CMatrix annihilation(Eigen::Index dim) {
  if (dim < 1) throw ValidationError("annihilation: dimension must be positive");
  CMatrix a = CMatrix::Zero(dim, dim);
  for (Eigen::Index n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

CMatrix creation(Eigen::Index dim) { return annihilation(dim).adjoint(); }

CMatrix number_operator(Eigen::Index dim) {
  CMatrix n = CMatrix::Zero(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) n(k, k) = static_cast<double>(k);
  return n;
}

CMatrix position_operator(Eigen::Index dim, double omega) {
  const CMatrix a = annihilation(dim);
  return (a + a.adjoint()) / std::sqrt(2.0 * omega);
}

CMatrix momentum_operator(Eigen::Index dim, double omega) {
  const CMatrix a = annihilation(dim);
  return -kI * std::sqrt(omega / 2.0) * (a - a.adjoint());
}

double truncation_leakage(const CVector& amplitudes) {
  const Eigen::Index dim = amplitudes.size();
  const Eigen::Index top = std::min<Eigen::Index>(dim, std::max<Eigen::Index>(2, dim / 8));
  return amplitudes.tail(top).squaredNorm();
}

ModeSpace::ModeSpace(std::size_t n_modes, Statistics statistics, Eigen::Index dim_per_mode)
    : n_modes_(n_modes), stats_(statistics), local_dim_(dim_per_mode), total_dim_(1) {
  if (n_modes_ == 0) throw ValidationError("ModeSpace: need at least one mode");
  if (stats_ == Statistics::fermion && local_dim_ != 2) {
    throw ValidationError("ModeSpace: fermionic modes have local dimension 2");
  }
  if (local_dim_ < 2) throw ValidationError("ModeSpace: local dimension must be >= 2");
  for (std::size_t k = 0; k < n_modes_; ++k) {
    total_dim_ *= local_dim_;
    if (total_dim_ > 1 << 14) throw ValidationError("ModeSpace: joint space too large");
  }
}

Eigen::Index ModeSpace::index_of(const std::vector<Eigen::Index>& occupations) const {
  if (occupations.size() != n_modes_) throw ValidationError("ModeSpace: occupation count");
  Eigen::Index idx = 0;
  for (const auto n : occupations) {
    if (n < 0 || n >= local_dim_) throw ValidationError("ModeSpace: occupation out of range");
    idx = idx * local_dim_ + n;
  }
  return idx;
}

std::vector<Eigen::Index> ModeSpace::occupations_of(Eigen::Index index) const {
  std::vector<Eigen::Index> occ(n_modes_);
  for (std::size_t k = n_modes_; k-- > 0;) {
    occ[k] = index % local_dim_;
    index /= local_dim_;
  }
  return occ;
}

CMatrix ModeSpace::annihilation(std::size_t mode) const {
  if (mode >= n_modes_) throw ValidationError("ModeSpace: mode index out of range");
  CMatrix a = CMatrix::Zero(total_dim_, total_dim_);
  for (Eigen::Index col = 0; col < total_dim_; ++col) {
    auto occ = occupations_of(col);
    const Eigen::Index n = occ[mode];
    if (n == 0) continue;
    double amp = std::sqrt(static_cast<double>(n));
    if (stats_ == Statistics::fermion) {
      Eigen::Index parity = 0;
      for (std::size_t k = 0; k < mode; ++k) parity += occ[k];
      if (parity % 2 != 0) amp = -amp;
    }
    occ[mode] = n - 1;
    a(index_of(occ), col) = amp;
  }
  return a;
}

CMatrix ModeSpace::creation(std::size_t mode) const { return annihilation(mode).adjoint(); }

}  // namespace relgauss
