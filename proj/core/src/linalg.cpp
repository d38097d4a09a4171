#include "relgauss/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "relgauss/errors.hpp"

namespace relgauss {

double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double max_abs(const RMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

CMatrix expm_antihermitian(const CMatrix& a) {
  const CMatrix h = (-kI * a + (-kI * a).adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  if (es.info() != Eigen::Success) {
    throw NumericError("expm_antihermitian: eigendecomposition failed");
  }
  const RVector& lambda = es.eigenvalues();
  CVector phases(lambda.size());
  for (Eigen::Index k = 0; k < lambda.size(); ++k) {
    phases(k) = std::exp(kI * lambda(k));
  }
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

RVector hermitian_eigenvalues(const CMatrix& h) {
  const CMatrix sym = (h + h.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(sym, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NumericError("hermitian_eigenvalues: eigendecomposition failed");
  }
  return es.eigenvalues();
}

namespace {

GramFrame symmetric_frame(const CMatrix& gram, double rank_tol) {
  const CMatrix sym = (gram + gram.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(sym);
  if (es.info() != Eigen::Success) {
    throw NumericError("gram_frame: eigendecomposition failed");
  }
  const RVector& lambda = es.eigenvalues();
  const double cutoff = rank_tol * std::max(1.0, lambda.maxCoeff());
  const Eigen::Index n = gram.rows();
  RVector root = RVector::Zero(n);
  Eigen::Index rank = 0;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (lambda(k) > cutoff) {
      root(k) = std::sqrt(lambda(k));
      ++rank;
    }
  }
  GramFrame frame;
  const CMatrix& u = es.eigenvectors();
  frame.coords = u * root.cast<cplx>().asDiagonal() * u.adjoint();
  frame.rank = rank;
  frame.dropped = n - rank;
  return frame;
}

GramFrame cholesky_frame(const CMatrix& gram, double rank_tol) {
  const CMatrix sym = (gram + gram.adjoint()) * 0.5;
  Eigen::LDLT<CMatrix> ldlt(sym);
  if (ldlt.info() != Eigen::Success) {
    throw NumericError("gram_frame: LDLT factorization failed");
  }
  const Eigen::Index n = gram.rows();
  // sym = P^T L D L^* P, so F = D^{1/2} L^* P satisfies F^* F = sym.
  const CMatrix lower = ldlt.matrixL();
  CMatrix lstar_p = lower.adjoint();
  lstar_p = lstar_p * ldlt.transpositionsP();
  const RVector d = ldlt.vectorD().real();
  const double cutoff = rank_tol * std::max(1.0, d.maxCoeff());
  std::vector<Eigen::Index> kept;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (d(k) > cutoff) kept.push_back(k);
  }
  GramFrame frame;
  frame.coords.resize(static_cast<Eigen::Index>(kept.size()), n);
  for (std::size_t r = 0; r < kept.size(); ++r) {
    const auto k = kept[r];
    frame.coords.row(static_cast<Eigen::Index>(r)) = std::sqrt(d(k)) * lstar_p.row(k);
  }
  frame.rank = static_cast<Eigen::Index>(kept.size());
  frame.dropped = n - frame.rank;
  return frame;
}

}  // namespace

GramFrame gram_frame(const CMatrix& gram, Orthogonalization method, double rank_tol) {
  if (gram.rows() != gram.cols()) {
    throw ValidationError("gram_frame: Gram matrix must be square");
  }
  if (gram.rows() == 0) return {};
  return method == Orthogonalization::symmetric ? symmetric_frame(gram, rank_tol)
                                                : cholesky_frame(gram, rank_tol);
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

double shannon_entropy_nats(const RVector& probs, double floor) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < probs.size(); ++k) {
    const double p = probs(k);
    if (p > floor) s -= p * std::log(p);
  }
  return s;
}

CMatrix partial_transpose_b(const CMatrix& rho, Eigen::Index dim_a, Eigen::Index dim_b) {
  if (rho.rows() != dim_a * dim_b || rho.cols() != dim_a * dim_b) {
    throw ValidationError("partial_transpose_b: dimension mismatch");
  }
  CMatrix pt(rho.rows(), rho.cols());
  for (Eigen::Index k = 0; k < dim_a; ++k) {
    for (Eigen::Index l = 0; l < dim_b; ++l) {
      for (Eigen::Index k2 = 0; k2 < dim_a; ++k2) {
        for (Eigen::Index l2 = 0; l2 < dim_b; ++l2) {
          pt(k * dim_b + l, k2 * dim_b + l2) = rho(k * dim_b + l2, k2 * dim_b + l);
        }
      }
    }
  }
  return pt;
}

double dense_log_negativity(const CMatrix& rho, Eigen::Index dim_a, Eigen::Index dim_b) {
  const double tr = rho.trace().real();
  const double norm = hermitian_eigenvalues(partial_transpose_b(rho, dim_a, dim_b)).cwiseAbs().sum();
  return std::max(0.0, std::log2(norm / tr));
}

}  // namespace relgauss
