#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace relgauss {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr cplx kI{0.0, 1.0};

/// Largest absolute entry; 0 for empty matrices.
double max_abs(const CMatrix& m);
double max_abs(const RMatrix& m);

/// exp(A) for anti-Hermitian A, via the eigendecomposition of -iA.
/// The result is unitary to machine precision.
CMatrix expm_antihermitian(const CMatrix& a);

/// Eigenvalues of a Hermitian matrix (ascending). The input is symmetrized
/// first so round-off in the off-diagonal does not leak into the spectrum.
RVector hermitian_eigenvalues(const CMatrix& h);

/// Orthonormal frame for the span of a set of non-orthogonal vectors with
/// Gram matrix `gram`.
///
/// `coords` holds the coordinates of each original vector in the frame
/// (rank x n, column i = vector i). Eigenvalues of the Gram matrix below
/// `rank_tol * max(1, lambda_max)` are projected out, so coincident vectors
/// collapse onto one frame direction instead of producing an ill-conditioned
/// inverse.
struct GramFrame {
  CMatrix coords;
  Eigen::Index rank = 0;
  Eigen::Index dropped = 0;
};

enum class Orthogonalization {
  /// Löwdin: eigendecomposition of the Gram matrix.
  symmetric,
  /// Pivoted LDL^T, i.e. Gram-Schmidt in pivot order.
  cholesky,
};

GramFrame gram_frame(const CMatrix& gram,
                     Orthogonalization method = Orthogonalization::symmetric,
                     double rank_tol = 1e-12);

/// Kronecker product of two dense matrices.
CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Partial transpose on the second factor of a (dim_a * dim_b)-square matrix.
CMatrix partial_transpose_b(const CMatrix& rho, Eigen::Index dim_a, Eigen::Index dim_b);

/// log2 of the trace norm of the partial transpose of a Hermitian matrix,
/// normalized by its trace.
double dense_log_negativity(const CMatrix& rho, Eigen::Index dim_a, Eigen::Index dim_b);

/// Sum of -p ln p over the entries of `probs` greater than `floor`.
double shannon_entropy_nats(const RVector& probs, double floor = 1e-15);

}  // namespace relgauss
