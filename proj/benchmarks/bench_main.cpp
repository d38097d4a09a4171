#include <benchmark/benchmark.h>

#include "relgauss/partition.hpp"
#include "relgauss/povm.hpp"
#include "relgauss/relational_ops.hpp"

using namespace relgauss;

namespace {

ProductStateSuperposition cm_state(std::size_t n, std::size_t branches) {
  ParticleConfig c;
  c.omega = 200.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<Branch> b;
    const std::size_t m = k < 2 ? branches : 1;
    for (std::size_t i = 0; i < m; ++i) b.push_back({1.0, 0.7 * static_cast<double>(i) + 0.3 * static_cast<double>(k)});
    c.positions.push_back(b);
  }
  return to_cm_relational(build_external_state(c), PartitionMap::build(std::vector<double>(n, 1.0)));
}

void BM_Overlap(benchmark::State& st) {
  const Wavepacket a = position_wavepacket(0.0, 50.0);
  const Wavepacket b = position_wavepacket(0.13, 50.0);
  for (auto _ : st) benchmark::DoNotOptimize(overlap(a, b));
}
BENCHMARK(BM_Overlap);

void BM_PartialTrace(benchmark::State& st) {
  const auto rho = pure_to_density(cm_state(4, static_cast<std::size_t>(st.range(0))));
  for (auto _ : st) benchmark::DoNotOptimize(g_twirl(rho));
}
BENCHMARK(BM_PartialTrace)->Arg(2)->Arg(4)->Arg(8);

void BM_LogNegativity(benchmark::State& st) {
  const auto tw = g_twirl(pure_to_density(cm_state(4, static_cast<std::size_t>(st.range(0)))));
  const auto cut = Bipartition::with_a({0}, tw.n_slots());
  for (auto _ : st) benchmark::DoNotOptimize(log_negativity(tw, cut));
}
BENCHMARK(BM_LogNegativity)->Arg(2)->Arg(4);

void BM_PovmClosedForm(benchmark::State& st) {
  const auto s = cm_state(2, static_cast<std::size_t>(st.range(0)));
  const auto bin = DetectorBinning::centered(0.0, 1.0);
  for (auto _ : st) benchmark::DoNotOptimize(closed_form_probability(s, bin).probability);
}
BENCHMARK(BM_PovmClosedForm)->Arg(2)->Arg(8);

void BM_PovmQuadrature(benchmark::State& st) {
  const auto s = cm_state(2, 2);
  const auto bin = DetectorBinning::centered(0.0, 1.0);
  for (auto _ : st) benchmark::DoNotOptimize(conditional_relational_state(s, bin).probability);
}
BENCHMARK(BM_PovmQuadrature);

}  // namespace

BENCHMARK_MAIN();
