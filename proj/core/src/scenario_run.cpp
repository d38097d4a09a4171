#include <algorithm>
#include <cmath>

#include "relgauss/extraction.hpp"
#include "relgauss/povm.hpp"
#include "relgauss/relational_ops.hpp"
#include "relgauss/scenario.hpp"

namespace relgauss {

namespace {

std::string join(const std::vector<std::string>& labels, const std::vector<std::size_t>& slots) {
  std::string out;
  for (std::size_t s : slots) {
    if (!out.empty()) out += " ";
    out += labels[s];
  }
  return out;
}

std::string cut_label(const std::vector<std::string>& labels, const Bipartition& cut) {
  return join(labels, cut.a) + " / " + join(labels, cut.b);
}

/// Bipartitions with slot 0 on side A, each unordered cut once.
std::vector<Bipartition> all_cuts(std::size_t n_slots) {
  std::vector<Bipartition> cuts;
  if (n_slots < 2) return cuts;
  const std::size_t rest = n_slots - 1;
  for (std::size_t mask = 0; mask + 1 < (std::size_t{1} << rest); ++mask) {
    std::vector<std::size_t> a{0};
    for (std::size_t s = 0; s < rest; ++s) {
      if (mask & (std::size_t{1} << s)) a.push_back(s + 1);
    }
    cuts.push_back(Bipartition::with_a(std::move(a), n_slots));
  }
  return cuts;
}

PartitionMap map_for(const Scenario& s) { return PartitionMap::build(s.particles.masses, s.reference); }

void run_twirl(const Scenario& s, ResultRecord& rec) {
  rec.columns = {"stage", "cut", "quantity", "value"};
  const auto add = [&rec](std::string stage, std::string cut, std::string q, double v) {
    rec.rows.push_back({std::move(stage), std::move(cut), std::move(q), v});
  };
  const auto external = build_external_state(s.particles);
  const auto detailed = to_cm_relational_detailed(external, map_for(s));
  const auto& state = detailed.state;
  const auto rho = pure_to_density(state);
  const auto& labels = state.slot_labels();

  add("external", "-", "branches", static_cast<double>(external.n_terms()));
  const Bipartition cm_cut = Bipartition::with_a({0}, state.n_slots());
  add("cm-relational", cut_label(labels, cm_cut), "entanglement_entropy",
      entanglement_entropy(state, cm_cut));
  for (const auto& cut : all_cuts(state.n_slots())) {
    add("cm-relational", cut_label(labels, cut), "log_negativity", log_negativity(rho, cut));
  }
  double corr = 0.0;
  for (const auto& r : detailed.covariances) corr = std::max(corr, r.max_relational_correlation);
  add("cm-relational", "-", "max_relational_correlation", corr);
  for (const auto& d : branch_distinctness(state)) {
    add("cm-relational", d.label, "coincident_branches", d.coincident ? 1.0 : 0.0);
  }

  const auto twirled = g_twirl(rho);
  const double tr = twirled.trace().real();
  add("twirled", "-", "trace", tr);
  if (std::abs(tr - 1.0) > s.tolerances.trace) {
    rec.provenance.tolerance_breaches.push_back("twirled trace deviates from 1 by " +
                                                std::to_string(std::abs(tr - 1.0)));
  }
  add("twirled", "-", "raw_scale", twirled.raw_scale());
  add("twirled", "-", "purity", purity(twirled));
  add("twirled", "-", "von_neumann_entropy", von_neumann_entropy(twirled));
  add("twirled", "-", "rank_reduction", static_cast<double>(twirled.rank_reduction()));
  for (const auto& cut : all_cuts(twirled.n_slots())) {
    const double ln = log_negativity(twirled, cut);
    add("twirled", cut_label(twirled.slot_labels(), cut), "log_negativity", ln);
    if (ln > s.tolerances.log_negativity) {
      rec.provenance.tolerance_breaches.push_back("twirled log-negativity " + std::to_string(ln) +
                                                  " across " + cut_label(twirled.slot_labels(), cut));
    }
  }
}

void run_zmodel(const Scenario& s, ResultRecord& rec) {
  rec.columns = {"quantity", "branch", "value"};
  const auto add = [&rec](std::string q, std::string branch, double v) {
    rec.rows.push_back({std::move(q), std::move(branch), v});
  };
  const CapacitorZModel& z = *s.zmodel;
  const auto external = build_external_state(s.particles);
  const auto state = to_cm_relational(external, map_for(s));
  const auto e_cm = branch_energies(state, z);
  const auto e_ext = branch_energies(external, z, s.particles.masses);

  double residual = 0.0;
  for (std::size_t i = 0; i < state.n_terms(); ++i) {
    const std::string b = std::to_string(i + 1);
    add("x_cm", b, state.terms()[i].factors.front().center());
    add("branch_energy", b, e_cm[i]);
    add("branch_energy_external", b, e_ext[i]);
    for (std::size_t j = 0; j < i; ++j) {
      residual = std::max(residual, std::abs((e_cm[i] - e_cm[j]) - (e_ext[i] - e_ext[j])));
    }
  }
  add("partition_residual", "-", residual);
  if (residual > s.tolerances.energy) {
    rec.provenance.tolerance_breaches.push_back("branch energy differences depend on the partition by " +
                                                std::to_string(residual));
  }

  const Bipartition cut = Bipartition::with_a({0}, state.n_slots());
  const ExtractionCost cost = zmodel_extraction_cost(state, z, cut);
  add("initial_energy", "-", cost.initial_energy);
  add("initial_log_negativity", "-", cost.initial_log_negativity);
  add("delta_e_mixture", "-", cost.mixture);
  double mean = 0.0;
  for (std::size_t i = 0; i < cost.branches.size(); ++i) {
    add("branch_weight", std::to_string(i + 1), cost.branch_weights[i]);
    add("delta_e_branch", std::to_string(i + 1), cost.branches[i]);
    mean += cost.branch_weights[i] * cost.branches[i];
  }
  add("delta_e_branch_mean", "-", mean);
  if (std::abs(mean - cost.mixture) > s.tolerances.energy) {
    rec.provenance.tolerance_breaches.push_back(
        "mixture energy differs from the weighted branch mean by " +
        std::to_string(std::abs(mean - cost.mixture)));
  }
}

void run_sweep(const Scenario& s, ResultRecord& rec) {
  rec.columns = {"q_sigma", "b", "delta_x", "p", "log_negativity", "dist_to_twirl", "dist_to_zmodel"};
  const DetectorSettings& d = *s.detector;
  SweepSpec spec;
  spec.particles = s.particles;
  spec.reference = s.reference;
  spec.q_sigma_grid = d.q_sigma_grid;
  spec.width_grid = d.width_grid;
  spec.delta_h = d.delta_h;
  spec.measured_branch = d.measured_branch;
  for (const auto& row : limit_sweep(spec)) {
    rec.rows.push_back({row.q_sigma, row.b, row.delta_x, row.p, row.log_negativity,
                        row.dist_to_twirl, row.dist_to_zmodel});
  }
}

template <class E>
[[noreturn]] void rethrow_with_context(const Scenario& s, const E& e) {
  throw E("scenario '" + s.name + "': " + e.what());
}

}  // namespace

ResultRecord run(const Scenario& scenario) {
  ResultRecord rec;
  rec.scenario = scenario.name;
  rec.experiment = std::string(to_string(scenario.experiment));
  rec.provenance.library_version = library_version();
  rec.provenance.tolerances = scenario.tolerances;
  try {
    switch (scenario.experiment) {
      case Experiment::twirl: run_twirl(scenario, rec); break;
      case Experiment::zmodel_extract: run_zmodel(scenario, rec); break;
      case Experiment::povm_sweep: run_sweep(scenario, rec); break;
    }
  } catch (const ProtocolInapplicable& e) {
    rethrow_with_context(scenario, e);
  } catch (const NumericError& e) {
    rethrow_with_context(scenario, e);
  } catch (const ValidationError& e) {
    rethrow_with_context(scenario, ValidationError(e.what()));
  }
  return rec;
}

}  // namespace relgauss
