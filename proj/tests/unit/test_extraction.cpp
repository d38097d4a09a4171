#include <doctest.h>

#include <cmath>

#include "relgauss/errors.hpp"
#include "relgauss/extraction.hpp"
#include "relgauss/partition.hpp"

using namespace relgauss;

namespace {

ModePair fermion_pair() {
  return {{"A", Statistics::fermion, 2}, {"C", Statistics::fermion, 2}};
}

double unitarity_defect(const CMatrix& u) {
  return max_abs(CMatrix(u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())));
}

CMatrix bell_density() {
  CVector psi = CVector::Zero(4);
  psi(0) = psi(3) = 1.0 / std::sqrt(2.0);
  return psi * psi.adjoint();
}

}  // namespace

TEST_CASE("fermionic swap exchanges the pair") {
  const ModePair pair = fermion_pair();
  const ModeSpace space = pair_space(pair);
  const CMatrix u = build_swap_unitary(pair);
  CHECK(unitarity_defect(u) <= 1e-14);
  const CMatrix a0 = space.annihilation(0);
  const CMatrix a1 = space.annihilation(1);
  CHECK(max_abs(CMatrix(u.adjoint() * a1 * u - a0)) <= 1e-14);
  CHECK(max_abs(CMatrix(u.adjoint() * a0 * u - a1)) <= 1e-14);
}

TEST_CASE("bosonic swap exchanges the pair within the truncation") {
  for (Eigen::Index d : {2, 3, 5}) {
    const ModePair pair{{"A", Statistics::boson, d}, {"C", Statistics::boson, d}};
    const ModeSpace space = pair_space(pair);
    const CMatrix u = build_swap_unitary(pair);
    CHECK(unitarity_defect(u) <= 1e-14);
    CHECK(max_abs(CMatrix(u.adjoint() * space.annihilation(1) * u - space.annihilation(0))) <= 1e-14);
    CHECK(max_abs(CMatrix(u * u - CMatrix::Identity(u.rows(), u.cols()))) <= 1e-14);
  }
}

TEST_CASE("pair validation") {
  CHECK_THROWS_AS(pair_space({{"A", Statistics::fermion, 2}, {"A", Statistics::fermion, 2}}),
                  ValidationError);
  CHECK_THROWS_AS(pair_space({{"A", Statistics::fermion, 2}, {"C", Statistics::boson, 2}}),
                  ValidationError);
  CHECK_THROWS_AS(pair_space({{"A", Statistics::boson, 3}, {"C", Statistics::boson, 4}}),
                  ValidationError);
  CHECK_NOTHROW(pair_space({{"A", Statistics::fermion, 2}, {"C", Statistics::fermion, 7}}));
}

TEST_CASE("extraction condition") {
  const ModeSpace f(2, Statistics::fermion);
  CHECK(check_extraction_condition(f.annihilation(0), f.annihilation(1), Statistics::fermion));
  CHECK_FALSE(check_extraction_condition(f.annihilation(0), f.annihilation(0), Statistics::fermion));
  CHECK_FALSE(check_extraction_condition(f.annihilation(0), f.annihilation(1), Statistics::boson));

  const ModeSpace b(2, Statistics::boson, 3);
  CHECK(check_extraction_condition(b.annihilation(0), b.annihilation(1), Statistics::boson));
  CHECK_FALSE(check_extraction_condition(b.annihilation(0), b.annihilation(0), Statistics::boson));
  CHECK_FALSE(check_extraction_condition(b.annihilation(0), CMatrix::Zero(3, 3), Statistics::boson));
}

TEST_CASE("swapping half of a Bell pair into a fresh mode moves its entanglement and energy") {
  // Modes ordered (A, C, B): Bell pair on A-B, C empty, H = n_A.
  const ModePair pair{{"A", Statistics::boson, 2}, {"C", Statistics::boson, 2}};
  const CMatrix u_ac = build_swap_unitary(pair);
  const CMatrix u = kron(u_ac, CMatrix::Identity(2, 2));

  CMatrix rho_ab = bell_density();
  CMatrix vac = CMatrix::Zero(2, 2);
  vac(0, 0) = 1.0;
  // A (x) C (x) B: reorder the A-B Bell pair around the C vacuum.
  CMatrix rho_i = CMatrix::Zero(8, 8);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int ap = 0; ap < 2; ++ap)
        for (int bp = 0; bp < 2; ++bp) rho_i(a * 4 + b, ap * 4 + bp) = rho_ab(a * 2 + b, ap * 2 + bp);
  const CMatrix rho_f = u * rho_i * u.adjoint();

  CHECK(dense_log_negativity(rho_i, 2, 4) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(dense_log_negativity(rho_f, 2, 4) <= 1e-12);

  CMatrix n = CMatrix::Zero(2, 2);
  n(1, 1) = 1.0;
  const CMatrix h = kron(n, CMatrix::Identity(4, 4));
  CHECK(extraction_energy_cost(h, rho_i, rho_f, 2, 4) == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("dense cost on a product state is inapplicable") {
  CMatrix prod = CMatrix::Zero(4, 4);
  prod(0, 0) = 1.0;
  CHECK_THROWS_AS(extraction_energy_cost(CMatrix::Identity(4, 4), prod, prod, 2, 2),
                  ProtocolInapplicable);
  CHECK_THROWS_AS(extraction_energy_cost(CMatrix::Identity(8, 8), bell_density(), bell_density(), 2, 2),
                  ValidationError);
}

TEST_CASE("Z-model extraction cost") {
  ParticleConfig c;
  c.positions = {{{1.0, 0.0}, {1.0, 2.0}}, {{1.0, 0.0}}};
  const auto cm = to_cm_relational(build_external_state(c), PartitionMap::build({1.0, 1.0}));
  const CapacitorZModel z{.q = 1.0, .sigma = 1.0, .plate_separation = 3.0, .x_left = 0.0};
  const auto cost = zmodel_extraction_cost(cm, z, Bipartition::with_a({0}, 2));
  CHECK(cost.initial_energy == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(cost.initial_log_negativity == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(cost.mixture) <= 1e-12);
  REQUIRE(cost.branches.size() == 2);
  CHECK(cost.branches[0] == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(cost.branches[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(cost.branch_weights[0] == doctest::Approx(0.5));
  // Weighted branch costs average to the mixture cost.
  CHECK(std::abs(cost.branch_weights[0] * cost.branches[0] +
                 cost.branch_weights[1] * cost.branches[1] - cost.mixture) <= 1e-12);
}

TEST_CASE("extraction without entanglement is inapplicable") {
  const CapacitorZModel z{.q = 1.0, .sigma = 1.0, .plate_separation = 3.0, .x_left = 0.0};
  ParticleConfig c;
  c.positions = {{{1.0, 1.0}}, {{1.0, 0.5}}};
  const auto product = to_cm_relational(build_external_state(c), PartitionMap::build({1.0, 1.0}));
  CHECK_THROWS_AS(zmodel_extraction_cost(product, z, Bipartition::with_a({0}, 2)),
                  ProtocolInapplicable);

  const auto rho = pure_to_density(product);
  const auto single = partial_trace(rho, {1});
  LinearPositionHamiltonian h{RVector::Ones(1), 1.0, 0.0};
  CHECK_THROWS_AS(extraction_energy_cost(h, single, single, Bipartition{{0}, {}}),
                  ProtocolInapplicable);
}
