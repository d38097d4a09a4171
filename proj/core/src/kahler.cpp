#include "relgauss/kahler.hpp"

#include <cmath>
#include <string>

#include "relgauss/errors.hpp"

namespace relgauss {

std::string_view to_string(Ordering o) {
  return o == Ordering::position_momentum_blocked ? "position-momentum-blocked"
                                                  : "fock-paired";
}

std::string_view to_string(Statistics s) {
  return s == Statistics::boson ? "boson" : "fermion";
}

namespace {

void require_square(const CMatrix& m, Eigen::Index dim, const char* what) {
  if (m.rows() != dim || m.cols() != dim) {
    throw ValidationError(std::string(what) + ": expected " + std::to_string(dim) + "x" +
                          std::to_string(dim) + " matrix, got " + std::to_string(m.rows()) +
                          "x" + std::to_string(m.cols()));
  }
}

CMatrix blocked_canonical(const PhaseSpaceLayout& layout) {
  const auto n = static_cast<Eigen::Index>(layout.n_modes);
  CMatrix form = CMatrix::Zero(2 * n, 2 * n);
  if (layout.statistics == Statistics::boson) {
    form.topRightCorner(n, n) = CMatrix::Identity(n, n);
    form.bottomLeftCorner(n, n) = -CMatrix::Identity(n, n);
  } else {
    form.setIdentity();
  }
  return form;
}

CMatrix checked_inverse(const CMatrix& m, const char* what) {
  Eigen::FullPivLU<CMatrix> lu(m);
  if (!lu.isInvertible()) {
    throw NumericError(std::string(what) + " is singular");
  }
  return lu.inverse();
}

}  // namespace

CMatrix fock_from_blocked(const PhaseSpaceLayout& layout, double omega) {
  if (!(omega > 0.0)) throw ValidationError("fock_from_blocked: omega must be positive");
  const auto n = static_cast<Eigen::Index>(layout.n_modes);
  CMatrix m = CMatrix::Zero(2 * n, 2 * n);
  double cq = 1.0 / std::sqrt(2.0);
  double cp = 1.0 / std::sqrt(2.0);
  if (layout.statistics == Statistics::boson) {
    cq = std::sqrt(omega / 2.0);
    cp = 1.0 / std::sqrt(2.0 * omega);
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    m(2 * k, k) = cq;
    m(2 * k, n + k) = kI * cp;
    m(2 * k + 1, k) = cq;
    m(2 * k + 1, n + k) = -kI * cp;
  }
  return m;
}

CMatrix canonical_form(const PhaseSpaceLayout& layout) {
  const CMatrix blocked = blocked_canonical(layout);
  if (layout.ordering == Ordering::position_momentum_blocked) return blocked;
  // Ladder operators in the canonical form depend on omega only through an
  // overall rescaling that cancels for the symplectic form; use omega = 1.
  const CMatrix m = fock_from_blocked(layout, 1.0);
  return m * blocked * m.transpose();
}

CMatrix complex_structure(const CMatrix& g, const CMatrix& omega, double tol) {
  if (g.rows() != g.cols() || omega.rows() != omega.cols() || g.rows() != omega.rows()) {
    throw ValidationError("complex_structure: G and Omega must be square and of equal size");
  }
  if (g.rows() == 0 || g.rows() % 2 != 0) {
    throw ValidationError("complex_structure: phase-space dimension must be even and nonzero");
  }
  const CMatrix omega_inv = checked_inverse(omega, "complex_structure: Omega");
  const CMatrix g_inv = checked_inverse(g, "complex_structure: G");
  CMatrix j = -g * omega_inv;
  const CMatrix j_alt = omega * g_inv;
  const double gap = max_abs(CMatrix(j - j_alt));
  if (gap > tol) {
    throw NumericError("complex_structure: -G Omega^-1 and Omega G^-1 differ by " +
                       std::to_string(gap) + "; G and Omega are not Kähler compatible");
  }
  return j;
}

bool check_kahler_compatible(const CMatrix& j, double tol) {
  if (j.rows() != j.cols()) return false;
  const CMatrix residual = j * j + CMatrix::Identity(j.rows(), j.cols());
  return max_abs(residual) <= tol;
}

KahlerStructure KahlerStructure::make(const PhaseSpaceLayout& layout, const CMatrix& g,
                                      const CMatrix& omega, const CVector& z, double tol) {
  if (layout.n_modes == 0) throw ValidationError("KahlerStructure: n_modes must be positive");
  const Eigen::Index dim = layout.dimension();
  require_square(g, dim, "KahlerStructure: G");
  require_square(omega, dim, "KahlerStructure: Omega");

  const double scale = std::max(1.0, max_abs(g));
  if (max_abs(CMatrix(g - g.transpose())) > 1e-14 * scale) {
    throw ValidationError("KahlerStructure: G is not symmetric");
  }
  if (max_abs(CMatrix(omega + omega.transpose())) > 1e-14 * std::max(1.0, max_abs(omega))) {
    throw ValidationError("KahlerStructure: Omega is not antisymmetric");
  }

  // Positivity is a statement about the real (Hermitian-xi) layout.
  CMatrix g_blocked = g;
  if (layout.ordering == Ordering::fock_paired) {
    const CMatrix m_inv = checked_inverse(fock_from_blocked(layout, 1.0), "layout map");
    g_blocked = m_inv * g * m_inv.transpose();
  }
  if (hermitian_eigenvalues(g_blocked).minCoeff() <= 0.0 ||
      max_abs(CMatrix(g_blocked.imag().cast<cplx>())) > tol * scale) {
    throw ValidationError("KahlerStructure: G is not positive definite");
  }

  const CMatrix canonical = canonical_form(layout);
  const CMatrix& fixed = layout.statistics == Statistics::boson ? omega : g;
  if (max_abs(CMatrix(fixed - canonical)) > tol) {
    throw ValidationError(layout.statistics == Statistics::boson
                              ? "KahlerStructure: bosonic Omega must equal the canonical form"
                              : "KahlerStructure: fermionic G must equal the canonical form");
  }

  KahlerStructure k;
  k.layout_ = layout;
  k.g_ = g;
  k.omega_ = omega;
  k.j_ = relgauss::complex_structure(g, omega, tol);
  if (!check_kahler_compatible(k.j_, tol)) {
    throw NumericError("KahlerStructure: J^2 != -I; G and Omega are not Kähler compatible");
  }
  if (layout.statistics == Statistics::fermion) {
    if (z.size() != 0 && max_abs(CMatrix(z)) != 0.0) {
      throw ValidationError("KahlerStructure: fermionic one-point function must vanish");
    }
    k.z_ = CVector::Zero(dim);
  } else if (z.size() == 0) {
    k.z_ = CVector::Zero(dim);
  } else if (z.size() != dim) {
    throw ValidationError("KahlerStructure: one-point function has wrong length");
  } else {
    k.z_ = z;
  }
  return k;
}

KahlerStructure KahlerStructure::bosonic_vacuum(std::size_t n_modes, double omega) {
  if (!(omega > 0.0)) throw ValidationError("bosonic_vacuum: omega must be positive");
  const PhaseSpaceLayout layout{n_modes, Ordering::position_momentum_blocked, Statistics::boson};
  const auto n = static_cast<Eigen::Index>(n_modes);
  // <{q,q}> = 1/omega, <{p,p}> = omega for the ground state.
  CMatrix g = CMatrix::Zero(2 * n, 2 * n);
  g.topLeftCorner(n, n) = CMatrix::Identity(n, n) / omega;
  g.bottomRightCorner(n, n) = CMatrix::Identity(n, n) * omega;
  return make(layout, g, canonical_form(layout));
}

KahlerStructure KahlerStructure::converted(Ordering target, double omega) const {
  if (target == layout_.ordering) return *this;
  PhaseSpaceLayout blocked_layout = layout_;
  blocked_layout.ordering = Ordering::position_momentum_blocked;
  CMatrix m = fock_from_blocked(blocked_layout, omega);
  if (target == Ordering::position_momentum_blocked) {
    m = checked_inverse(m, "layout map");
  }
  PhaseSpaceLayout out_layout = layout_;
  out_layout.ordering = target;
  KahlerStructure k;
  k.layout_ = out_layout;
  k.g_ = m * g_ * m.transpose();
  k.omega_ = m * omega_ * m.transpose();
  k.j_ = m * j_ * checked_inverse(m, "layout map");
  k.z_ = m * z_;
  return k;
}

CMatrix gaussianity_projector(const KahlerStructure& k, double tol) {
  const CMatrix& j = k.complex_structure();
  if (!check_kahler_compatible(j, tol)) {
    throw NumericError("gaussianity_projector: incompatible Kähler structure");
  }
  const CMatrix id = CMatrix::Identity(j.rows(), j.cols());
  return 0.5 * (id + kI * j);
}

bool mode_transformation_check(const CMatrix& v, const KahlerStructure& k, double tol) {
  const auto& layout = k.layout();
  const Eigen::Index dim = layout.dimension();
  if (v.cols() != dim || v.rows() == 0 || v.rows() > dim / 2) {
    throw ValidationError("mode_transformation_check: v must be n x " + std::to_string(dim) +
                          " with 1 <= n <= " + std::to_string(dim / 2));
  }
  CMatrix w = v.conjugate();
  if (layout.ordering == Ordering::fock_paired) {
    for (Eigen::Index c = 0; c + 1 < dim; c += 2) w.col(c).swap(w.col(c + 1));
  }
  const Eigen::Index n = v.rows();
  const CMatrix id = CMatrix::Identity(n, n);
  if (layout.statistics == Statistics::boson) {
    const CMatrix& om = k.symplectic();
    return max_abs(CMatrix(v * om * v.transpose())) <= tol &&
           max_abs(CMatrix(w * om * v.transpose() - kI * id)) <= tol;
  }
  const CMatrix& g = k.metric();
  return max_abs(CMatrix(v * g * v.transpose())) <= tol &&
         max_abs(CMatrix(w * g * v.transpose() - id)) <= tol;
}

CMatrix quadratic_operator(const HamiltonianMatrix& h, Statistics statistics,
                           const std::vector<CMatrix>& xi_ops) {
  const auto dim = static_cast<Eigen::Index>(xi_ops.size());
  if (h.h.rows() != dim || h.h.cols() != dim || dim == 0) {
    throw ValidationError("quadratic_operator: h must match the operator vector length");
  }
  const Eigen::Index hilbert = xi_ops.front().rows();
  CMatrix out = CMatrix::Zero(hilbert, hilbert);
  for (Eigen::Index a = 0; a < dim; ++a) {
    for (Eigen::Index b = 0; b < dim; ++b) {
      if (h.h(a, b) == cplx{}) continue;
      out += h.h(a, b) * xi_ops[static_cast<std::size_t>(a)] * xi_ops[static_cast<std::size_t>(b)];
    }
  }
  const cplx prefactor = statistics == Statistics::boson ? cplx{0.5, 0.0} : 0.5 * kI;
  return prefactor * out;
}

CorrelationForms correlation_forms(const CVector& state, const std::vector<CMatrix>& xi_ops) {
  const auto dim = static_cast<Eigen::Index>(xi_ops.size());
  if (dim == 0) throw ValidationError("correlation_forms: empty operator vector");
  const double norm2 = state.squaredNorm();
  if (!(norm2 > 0.0)) throw ValidationError("correlation_forms: zero state");
  auto expect = [&](const CMatrix& op) { return state.dot(op * state) / norm2; };

  CorrelationForms out;
  out.z.resize(dim);
  for (Eigen::Index a = 0; a < dim; ++a) out.z(a) = expect(xi_ops[static_cast<std::size_t>(a)]);
  const Eigen::Index hilbert = state.size();
  const CMatrix id = CMatrix::Identity(hilbert, hilbert);
  out.g.resize(dim, dim);
  out.omega.resize(dim, dim);
  for (Eigen::Index a = 0; a < dim; ++a) {
    const CMatrix xa = xi_ops[static_cast<std::size_t>(a)] - out.z(a) * id;
    for (Eigen::Index b = 0; b < dim; ++b) {
      const CMatrix xb = xi_ops[static_cast<std::size_t>(b)] - out.z(b) * id;
      out.g(a, b) = expect(CMatrix(xa * xb + xb * xa));
      out.omega(a, b) = -kI * expect(CMatrix(xa * xb - xb * xa));
    }
  }
  return out;
}

FermionicOscillator fermionic_oscillator(double omega) {
  if (!(omega > 0.0)) throw ValidationError("fermionic_oscillator: omega must be positive");
  // Basis (|0>, |1>): a|1> = |0>.
  CMatrix a = CMatrix::Zero(2, 2);
  a(0, 1) = 1.0;
  const std::vector<CMatrix> xi{a, a.adjoint()};
  const PhaseSpaceLayout layout{1, Ordering::fock_paired, Statistics::fermion};

  const auto build = [&](const CVector& psi) {
    const CorrelationForms forms = correlation_forms(psi, xi);
    return KahlerStructure::make(layout, forms.g, forms.omega);
  };
  const CVector ground = CVector::Unit(2, 0);
  const CVector excited = CVector::Unit(2, 1);

  CMatrix h = CMatrix::Zero(2, 2);
  h(0, 1) = kI * omega;
  h(1, 0) = -kI * omega;
  return FermionicOscillator{HamiltonianMatrix{h, omega}, build(ground), build(excited)};
}

double gaussianity_residual(const KahlerStructure& k, const std::vector<CMatrix>& xi_ops,
                            const CVector& state) {
  const CMatrix p = gaussianity_projector(k);
  const auto dim = static_cast<Eigen::Index>(xi_ops.size());
  if (p.rows() != dim) throw ValidationError("gaussianity_residual: operator vector length");
  const Eigen::Index hilbert = state.size();
  const CMatrix id = CMatrix::Identity(hilbert, hilbert);
  double worst = 0.0;
  for (Eigen::Index a = 0; a < dim; ++a) {
    CVector acc = CVector::Zero(hilbert);
    for (Eigen::Index b = 0; b < dim; ++b) {
      if (p(a, b) == cplx{}) continue;
      acc += p(a, b) * ((xi_ops[static_cast<std::size_t>(b)] - k.one_point()(b) * id) * state);
    }
    worst = std::max(worst, acc.norm());
  }
  return worst;
}

}  // namespace relgauss
