// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/sinh_sinh.hpp>
#include <CLI11.hpp>

#include "relgauss/errors.hpp"
#include "relgauss/extraction.hpp"
#include "relgauss/gaussian_states.hpp"
#include "relgauss/kahler.hpp"
#include "relgauss/partition.hpp"
#include "relgauss/povm.hpp"
#include "relgauss/relational_ops.hpp"
#include "relgauss/scenario.hpp"
#include "relgauss/zmodel.hpp"

using namespace relgauss;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
  // Runtime budget in seconds; nonpositive means none.
  double budget_s = 0.0;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

CMatrix m2(cplx a, cplx b, cplx c, cplx d) {
  CMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

ParticleConfig spread(std::size_t n, double omega, std::mt19937_64& rng) {
  // Particle 1 in two locations, the rest localized; distinct CM branches.
  std::uniform_real_distribution<double> pos(-2.0, 2.0);
  std::uniform_real_distribution<double> gap(1.0, 3.0);
  ParticleConfig c;
  c.omega = omega;
  const double x = pos(rng);
  c.positions.push_back({{1.0, x}, {1.0, x + gap(rng)}});
  for (std::size_t k = 1; k < n; ++k) c.positions.push_back({{1.0, pos(rng)}});
  return c;
}

Outcome ac1() {
  const FermionicOscillator osc = fermionic_oscillator(1.0);
  const double w = 1.0;
  double err = 0.0;
  err = std::max(err, max_abs(CMatrix(osc.hamiltonian.h - m2(0, kI * w, -kI * w, 0))));
  err = std::max(err, max_abs(CMatrix(osc.ground.metric() - m2(0, 1, 1, 0))));
  err = std::max(err, max_abs(CMatrix(osc.ground.symplectic() - m2(0, -kI, kI, 0))));
  err = std::max(err, max_abs(CMatrix(osc.ground.complex_structure() - m2(-kI, 0, 0, kI))));
  const CMatrix j = complex_structure(osc.ground.metric(), osc.ground.symplectic());
  const double j2 = max_abs(CMatrix(j * j + CMatrix::Identity(2, 2)));
  return {err == 0.0 && j2 <= 1e-14,
          "matrix mismatch " + num(err) + ", |J^2 + I| " + num(j2), 1e-3};
}

Outcome ac2() {
  boost::math::quadrature::sinh_sinh<double> integrator;
  double worst = 0.0;
  int points = 0;
  for (double omega : {0.5, 2.0, 50.0}) {
    for (double x : {-0.3, 0.0, 0.7}) {
      for (double xp : {-0.5, 0.1, 1.2}) {
        const auto weight = [omega](double p) { return std::exp(-p * p / (2.0 * omega)); };
        const double d = xp - x;
        const double oracle =
            integrator.integrate([&](double p) { return std::cos(d * p) * weight(p); }) /
            integrator.integrate(weight);
        const cplx closed = overlap(position_wavepacket(x, omega), position_wavepacket(xp, omega));
        worst = std::max(worst, std::abs(closed - oracle));
        ++points;
      }
    }
  }
  return {points == 27 && worst <= 1e-8, std::to_string(points) + " points, max error " + num(worst), 1.0};
}

Outcome ac3() {
  std::mt19937_64 rng(20261019);
  std::uniform_real_distribution<double> mass(0.01, 100.0);
  double worst = 0.0;
  int maps = 0;
  for (std::size_t n = 1; n <= 8; ++n) {
    for (int t = 0; t < 100; ++t) {
      std::vector<double> m(n);
      for (auto& x : m) x = mass(rng);
      worst = std::max(worst, canonical_residual(PartitionMap::build(m, static_cast<std::size_t>(t) % n)));
      ++maps;
    }
  }
  return {worst <= 1e-13, std::to_string(maps) + " maps, max |T Omega T^T - Omega| " + num(worst), 1.0};
}

Outcome ac4() {
  ParticleConfig two;
  two.positions = {{{1.0, 0.0}, {1.0, 2.0}}, {{1.0, 0.0}}};
  const auto cm2 = to_cm_relational(build_external_state(two), PartitionMap::build({1.0, 1.0}));
  const double s = entanglement_entropy(cm2, Bipartition::with_a({0}, 2));
  const bool entropy_ok = std::abs(s - std::numbers::ln2) <= 1e-9;

  std::mt19937_64 rng(4);
  double worst = 0.0;
  int cuts = 0;
  for (std::size_t n : {2u, 3u, 4u}) {
    for (int t = 0; t < 5; ++t) {
      const ParticleConfig c = spread(n, 200.0, rng);
      const auto cm = to_cm_relational(build_external_state(c), PartitionMap::build(std::vector<double>(n, 1.0)));
      const auto tw = g_twirl(pure_to_density(cm));
      const std::size_t k = tw.n_slots();
      // Every bipartition of the relational slots, A containing slot 0.
      for (unsigned mask = 0; mask + 1 < (1u << (k - 1)) && k > 1; ++mask) {
        std::vector<std::size_t> a{0};
        for (std::size_t j = 1; j < k; ++j) {
          if (mask & (1u << (j - 1))) a.push_back(j);
        }
        worst = std::max(worst, log_negativity(tw, Bipartition::with_a(a, k)));
        ++cuts;
      }
    }
  }
  return {entropy_ok && worst <= 1e-8,
          "S = " + num(s) + " (|S - ln2| " + num(std::abs(s - std::numbers::ln2)) + "), twirled log-neg max " +
              num(worst) + " over " + std::to_string(cuts) + " cuts (N = 2 has a single relational slot)",
          5.0};
}

Outcome ac5() {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> count(2, 4);
  std::uniform_real_distribution<double> wdist(-1.0, 1.0);
  int raised = 0;
  int trials = 0;
  for (; trials < 100; ++trials) {
    const auto n = static_cast<std::size_t>(count(rng));
    const ParticleConfig c = spread(n, 200.0, rng);
    const auto cm = to_cm_relational(build_external_state(c), PartitionMap::build(std::vector<double>(n, 1.0)));
    const auto tw = g_twirl(pure_to_density(cm));
    LinearPositionHamiltonian h;
    h.slot_weights = RVector(static_cast<Eigen::Index>(tw.n_slots()));
    for (Eigen::Index k = 0; k < h.slot_weights.size(); ++k) h.slot_weights(k) = wdist(rng);
    h.coupling = 1.0;
    const Bipartition cut = tw.n_slots() > 1 ? Bipartition::with_a({0}, tw.n_slots())
                                             : Bipartition{{0}, {}};
    try {
      extraction_energy_cost(h, tw, tw, cut);
    } catch (const ProtocolInapplicable&) {
      ++raised;
    }
  }
  return {raised == trials, std::to_string(raised) + "/" + std::to_string(trials) + " raised protocol-inapplicable"};
}

Outcome ac6() {
  ParticleConfig c;
  c.positions = {{{1.0, 0.0}, {1.0, 2.0}}, {{1.0, 0.0}}};
  const CapacitorZModel z{.q = 1.0, .sigma = 1.0, .plate_separation = 3.0, .x_left = 0.0};
  const auto ext = build_external_state(c);
  const auto cm = to_cm_relational(ext, PartitionMap::build({1.0, 1.0}));
  const auto cost = zmodel_extraction_cost(cm, z, Bipartition::with_a({0}, 2));
  const double branch_err = std::max(std::abs(cost.branches[0] + 0.5), std::abs(cost.branches[1] - 0.5));
  const auto e_ext = branch_energies(ext, z);
  const auto e_cm = branch_energies(cm, z);
  double part = std::abs(interaction_energy(ext, z) - interaction_energy(cm, z));
  for (std::size_t i = 0; i < e_ext.size(); ++i) part = std::max(part, std::abs(e_ext[i] - e_cm[i]));
  return {branch_err <= 1e-10 && std::abs(cost.mixture) <= 1e-10 && part <= 1e-10,
          "branch dE (" + num(cost.branches[0]) + ", " + num(cost.branches[1]) + "), mixture " +
              num(cost.mixture) + ", partition difference " + num(part),
          1.0};
}

Outcome ac7(const fs::path& scenarios) {
  double worst = 0.0;
  for (double b : {0.01, 0.1, 0.5}) {
    for (double dx : {0.1, 1.0, std::numeric_limits<double>::infinity()}) {
      for (double sep : {0.5, 1.0, 5.0}) {
        ProductStateSuperposition st(
            Partition::cm_relational,
            {{1.0, {Wavepacket::with_width(0.0, 0.0, b), Wavepacket::with_width(0.0, 0.0, 0.1)}},
             {1.0, {Wavepacket::with_width(sep, 0.0, b), Wavepacket::with_width(1.0, 0.0, 0.1)}}},
            {"cm", "2|1"});
        const auto bin = DetectorBinning::centered(0.2, dx);
        worst = std::max(worst, max_abs(CMatrix(cm_bin_weights_closed_form(st, bin) -
                                                cm_bin_weights_quadrature(st, bin))));
        worst = std::max(worst, std::abs(closed_form_probability(st, bin).probability -
                                         conditional_relational_state(st, bin).probability));
      }
    }
  }

  const Scenario sc = load_scenario(scenarios / "povm_sweep.ini");
  SweepSpec spec;
  spec.particles = sc.particles;
  spec.reference = sc.reference;
  spec.q_sigma_grid = sc.detector->q_sigma_grid;
  spec.width_grid = sc.detector->width_grid;
  spec.delta_h = sc.detector->delta_h;
  spec.measured_branch = sc.detector->measured_branch;
  const auto rows = limit_sweep(spec);
  const double b_min = *std::min_element(spec.width_grid.begin(), spec.width_grid.end());
  const double q_max = *std::max_element(spec.q_sigma_grid.begin(), spec.q_sigma_grid.end());
  double q_weak = q_max;
  for (double q : spec.q_sigma_grid) {
    if (q > 0.0) q_weak = std::min(q_weak, q);
  }
  double weak = 0.0;
  double strong = 1.0;
  for (const auto& r : rows) {
    if (r.q_sigma == 0.0 || r.q_sigma == q_weak) weak = std::max(weak, r.dist_to_twirl);
    if (r.b == b_min && r.q_sigma == q_max) strong = r.dist_to_zmodel;
  }
  return {worst <= 1e-8 && weak <= 1e-6 && strong <= 1e-6,
          "closed form vs quadrature " + num(worst) + " over 27 points, weak-charge distance to twirl " +
              num(weak) + ", strong-charge distance to measured branch " + num(strong),
          30.0};
}

Outcome ac8() {
  // Fit ln(coherence) = -alpha (d^2 / 8 b^2) over a grid of CM separations.
  const double b = 0.2;
  double sxy = 0.0;
  double sxx = 0.0;
  for (double d : {0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.8}) {
    ProductStateSuperposition st(
        Partition::cm_relational,
        {{1.0, {Wavepacket::with_width(0.0, 0.0, b), Wavepacket::with_width(0.0, 0.0, 0.1)}},
         {1.0, {Wavepacket::with_width(d, 0.0, b), Wavepacket::with_width(5.0, 0.0, 0.1)}}},
        {"cm", "2|1"});
    const auto out = conditional_relational_state(st, DetectorBinning::whole_line());
    const CMatrix& c = out.state.coefficients();
    const double coherence = std::abs(c(0, 1)) / std::sqrt(std::abs(c(0, 0) * c(1, 1)));
    const double x = d * d / (8.0 * b * b);
    sxy += x * -std::log(coherence);
    sxx += x * x;
  }
  const double alpha = sxy / sxx;
  return {std::abs(alpha - 1.0) <= 0.02, "fitted exponent " + num(alpha)};
}

Outcome ac9() {
  const ModePair pair{{"A", Statistics::fermion, 2}, {"C", Statistics::fermion, 2}};
  const ModeSpace space = pair_space(pair);
  const CMatrix u = build_swap_unitary(pair);
  const CMatrix a0 = space.annihilation(0);
  const CMatrix a1 = space.annihilation(1);
  const double conj = std::max(max_abs(CMatrix(u.adjoint() * a1 * u - a0)),
                               max_abs(CMatrix(u.adjoint() * a0 * u - a1)));
  const double unit = max_abs(CMatrix(u.adjoint() * u - CMatrix::Identity(4, 4)));
  double anti = 0.0;
  for (const CMatrix& x : {a0, CMatrix(a0.adjoint())}) {
    for (const CMatrix& y : {a1, CMatrix(a1.adjoint())}) anti = std::max(anti, max_abs(CMatrix(x * y + y * x)));
  }
  const bool cond = check_extraction_condition(a0, a1, Statistics::fermion, 1e-12);
  return {space.dimension() == 4 && conj == 0.0 && unit == 0.0 && anti <= 1e-12 && cond,
          "swap conjugation error " + num(conj) + ", unitarity " + num(unit) + ", anticommutators " + num(anti)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome ac10(const std::string& cli, const fs::path& scenarios, const fs::path& workdir) {
  if (cli.empty()) return {false, "no CLI given (--cli)"};
  int compared = 0;
  for (const auto& entry : fs::directory_iterator(scenarios)) {
    if (entry.path().extension() != ".ini") continue;
    for (const char* fmt : {"csv", "json"}) {
      std::string out[2];
      for (int k = 0; k < 2; ++k) {
        const fs::path dir = workdir / ("run" + std::to_string(k)) / fmt;
        fs::remove_all(dir);
        const std::string cmd = "\"" + cli + "\" run \"" + entry.path().string() + "\" --out \"" +
                                dir.string() + "\" --format " + fmt + " > /dev/null";
        if (std::system(cmd.c_str()) != 0) {
          return {false, "run failed: " + entry.path().filename().string()};
        }
        for (const auto& f : fs::directory_iterator(dir)) out[k] += slurp(f.path());
      }
      if (out[0].empty() || out[0] != out[1]) {
        return {false, "outputs differ: " + entry.path().filename().string() + " (" + fmt + ")"};
      }
      ++compared;
    }
  }
  return {compared > 0, std::to_string(compared) + " scenario/format pairs byte-identical"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"relgauss acceptance suite"};
  std::string cli;
  std::string scenarios = RELGAUSS_SCENARIO_DIR;
  std::string workdir = (fs::temp_directory_path() / "relgauss_acceptance").string();
  app.add_option("--cli", cli, "Path to the relgauss executable");
  app.add_option("--scenarios", scenarios, "Scenario directory");
  app.add_option("--workdir", workdir, "Scratch directory for CLI outputs");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"AC1 kahler-example", ac1},
      {"AC2 overlap-oracle", ac2},
      {"AC3 symplecticity", ac3},
      {"AC4 twirl-entanglement", ac4},
      {"AC5 no-extraction", ac5},
      {"AC6 zmodel-energy", ac6},
      {"AC7 povm-limits", [&] { return ac7(scenarios); }},
      {"AC8 cross-term-decay", ac8},
      {"AC9 swap-algebra", ac9},
      {"AC10 determinism", [&] { return ac10(cli, scenarios, workdir); }},
  };

  int failures = 0;
  for (const auto& [name, check] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string budget;
    if (o.budget_s > 0.0) {
      budget = " (budget " + num(o.budget_s) + " s)";
      if (t > o.budget_s) {
        o.pass = false;
        o.detail += "; over runtime budget";
      }
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << " [" << num(t) << " s"
              << budget << "]" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
