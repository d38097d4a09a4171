#pragma once

// Kähler triple (G, Omega, J) of a Gaussian state on a 2N-dimensional phase
// space, for bosons and fermions.
//
// Conventions. Index a runs over the operator vector xi^a whose layout is
// recorded in PhaseSpaceLayout:
//   position_momentum_blocked : xi = (q_1..q_N, p_1..p_N)   (Hermitian)
//   fock_paired               : xi = (a_1, a_1^dag, .., a_N, a_N^dag)
// G^{ab} = <{xi^a - z^a, xi^b - z^b}>, i Omega^{ab} = <[xi^a, xi^b]>, and
// J^a_b = -G^{ac} (Omega^{-1})_{cb} = Omega^{ac} (G^{-1})_{cb}.
// The bosonic symplectic form in blocked layout is the real [[0, I], [-I, 0]].

#include <cstddef>
#include <string_view>

#include "relgauss/linalg.hpp"

namespace relgauss {

enum class Ordering { position_momentum_blocked, fock_paired };
enum class Statistics { boson, fermion };

std::string_view to_string(Ordering o);
std::string_view to_string(Statistics s);

struct PhaseSpaceLayout {
  std::size_t n_modes = 1;
  Ordering ordering = Ordering::position_momentum_blocked;
  Statistics statistics = Statistics::boson;

  [[nodiscard]] Eigen::Index dimension() const {
    return static_cast<Eigen::Index>(2 * n_modes);
  }
  friend bool operator==(const PhaseSpaceLayout&, const PhaseSpaceLayout&) = default;
};

inline constexpr double kDefaultKahlerTol = 1e-12;

/// The canonical state-independent form for the layout: the symplectic form
/// for bosons, the metric for fermions.
CMatrix canonical_form(const PhaseSpaceLayout& layout);

/// Linear map M with xi_fock = M xi_blocked. Bosonic modes use
/// a = sqrt(omega/2) (q + i p / omega); fermionic (Majorana) modes use
/// a = (q + i p) / sqrt(2) and ignore omega.
CMatrix fock_from_blocked(const PhaseSpaceLayout& layout, double omega = 1.0);

/// J = -G Omega^{-1}; throws unless Omega G^{-1} agrees within `tol`.
CMatrix complex_structure(const CMatrix& g, const CMatrix& omega,
                          double tol = kDefaultKahlerTol);

/// ||J^2 + I||_max <= tol.
bool check_kahler_compatible(const CMatrix& j, double tol = kDefaultKahlerTol);

class KahlerStructure {
 public:
  /// Validates every invariant of the triple and derives J. The one-point
  /// function is forced to zero for fermions; passing a nonzero z for a
  /// fermionic layout is an error.
  static KahlerStructure make(const PhaseSpaceLayout& layout, const CMatrix& g,
                              const CMatrix& omega, const CVector& z = CVector(),
                              double tol = kDefaultKahlerTol);

  /// Bosonic vacuum of N oscillators with frequency omega in blocked layout.
  static KahlerStructure bosonic_vacuum(std::size_t n_modes, double omega);

  [[nodiscard]] const PhaseSpaceLayout& layout() const { return layout_; }
  [[nodiscard]] const CMatrix& metric() const { return g_; }
  [[nodiscard]] const CMatrix& symplectic() const { return omega_; }
  [[nodiscard]] const CMatrix& complex_structure() const { return j_; }
  [[nodiscard]] const CVector& one_point() const { return z_; }

  /// Re-expresses the triple in another operator layout. `omega` is the
  /// oscillator frequency used to define bosonic ladder operators.
  [[nodiscard]] KahlerStructure converted(Ordering target, double omega = 1.0) const;

 private:
  KahlerStructure() = default;

  PhaseSpaceLayout layout_;
  CMatrix g_;
  CMatrix omega_;
  CMatrix j_;
  CVector z_;
};

/// P = (I + iJ)/2. Rows of P applied to (xi - z) annihilate the state.
CMatrix gaussianity_projector(const KahlerStructure& k, double tol = kDefaultKahlerTol);

/// Checks that the rows of v define canonical ladder operators a_i = v_ia xi^a.
///
/// Bosons: Omega v v^T = 0 and Omega v* v^T = i I. Fermions: G v v^T = 0 and
/// G v* v^T = I. The conjugate functional is v* in the Hermitian blocked
/// layout; in the Fock-paired layout xi is not Hermitian and conjugation also
/// swaps a_k <-> a_k^dag, which is applied here.
bool mode_transformation_check(const CMatrix& v, const KahlerStructure& k,
                               double tol = kDefaultKahlerTol);

struct HamiltonianMatrix {
  CMatrix h;
  double frequency = 1.0;
};

/// The quadratic operator built from h on a concrete representation of xi.
/// Bosons: H = (1/2) h_ab xi^a xi^b. Fermions: H = (i/2) h_ab xi^a xi^b,
/// the normalization under which the fermionic oscillator matrix
/// [[0, i w], [-i w, 0]] reproduces w (a^dag a - a a^dag) / 2.
CMatrix quadratic_operator(const HamiltonianMatrix& h, Statistics statistics,
                           const std::vector<CMatrix>& xi_ops);

/// G and Omega of a state vector, computed from expectation values of
/// anticommutators and commutators of the given operator vector.
struct CorrelationForms {
  CMatrix g;
  CMatrix omega;
  CVector z;
};
CorrelationForms correlation_forms(const CVector& state, const std::vector<CMatrix>& xi_ops);

/// The single fermionic oscillator H = w (a^dag a - a a^dag)/2 in the
/// Fock-paired layout xi = (a, a^dag).
struct FermionicOscillator {
  HamiltonianMatrix hamiltonian;
  KahlerStructure ground;
  KahlerStructure excited;
};
FermionicOscillator fermionic_oscillator(double omega);

/// max_a || sum_b P_ab (xi - z)^b |psi> ||, the residual of the Gaussianity
/// condition on a concrete representation.
double gaussianity_residual(const KahlerStructure& k, const std::vector<CMatrix>& xi_ops,
                            const CVector& state);

}  // namespace relgauss
