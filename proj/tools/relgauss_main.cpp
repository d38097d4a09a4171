// relgauss: validate and run relational Gaussian-state scenarios.
//
// Exit codes: 0 success, 1 i/o failure, 2 invalid scenario or inapplicable
// protocol, 3 numeric failure or tolerance breach.

#include <chrono>
#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "relgauss/errors.hpp"
#include "relgauss/scenario.hpp"

namespace {

enum Exit : int { kOk = 0, kIo = 1, kInvalid = 2, kNumeric = 3 };

struct RunOptions {
  std::string scenario;
  std::string out;
  std::string format;
  bool timing = false;
};

std::filesystem::path output_directory(const RunOptions& opts, const relgauss::Scenario& s) {
  if (!opts.out.empty()) return opts.out;
  if (s.output_directory) return *s.output_directory;
  if (const char* env = std::getenv("RELGAUSS_OUTPUT_DIR"); env && *env) return env;
  return ".";
}

relgauss::OutputFormat output_format(const RunOptions& opts, const relgauss::Scenario& s) {
  if (opts.format == "json") return relgauss::OutputFormat::json;
  if (opts.format == "csv") return relgauss::OutputFormat::csv;
  return s.output_format.value_or(relgauss::OutputFormat::csv);
}

int execute(const RunOptions& opts, bool sweep_only) {
  const relgauss::Scenario scenario = relgauss::load_scenario(opts.scenario);
  if (sweep_only && scenario.experiment != relgauss::Experiment::povm_sweep) {
    std::cerr << "error: scenario '" << scenario.name << "' is a "
              << relgauss::to_string(scenario.experiment) << " experiment, not povm-sweep\n";
    return kInvalid;
  }
  const auto start = std::chrono::steady_clock::now();
  relgauss::ResultRecord record = relgauss::run(scenario);
  if (opts.timing) {
    record.provenance.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  const auto path = relgauss::emit(record, output_format(opts, scenario), output_directory(opts, scenario));
  std::cout << path.string() << "\n";
  if (!record.provenance.tolerance_breaches.empty()) {
    for (const auto& b : record.provenance.tolerance_breaches) {
      std::cerr << "tolerance breach: " << b << "\n";
    }
    return kNumeric;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relational Gaussian-state scenarios: G-twirl, Z-model extraction, POVM sweeps"};
  app.set_version_flag("--version", relgauss::library_version());
  bool describe = false;
  app.add_flag("--describe-schema", describe, "Print the scenario and output schema as JSON");
  app.require_subcommand(0, 1);

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Parse and validate a scenario file");
  validate->add_option("scenario", validate_path, "Scenario file")->required();

  RunOptions run_opts;
  auto* run = app.add_subcommand("run", "Run a scenario and write its result table");
  RunOptions sweep_opts;
  auto* sweep = app.add_subcommand("sweep", "Run a povm-sweep scenario");
  for (auto [cmd, opts] : {std::pair{run, &run_opts}, std::pair{sweep, &sweep_opts}}) {
    cmd->add_option("scenario", opts->scenario, "Scenario file")->required();
    cmd->add_option("--out", opts->out,
                    "Output directory (default: [output] directory, $RELGAUSS_OUTPUT_DIR, .)");
    cmd->add_option("--format", opts->format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_flag("--timing", opts->timing, "Record wall time (makes output non-reproducible)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (describe) {
      std::cout << relgauss::describe_schema();
      return kOk;
    }
    if (*validate) {
      const auto s = relgauss::load_scenario(validate_path);
      std::cout << "ok: " << s.name << " (" << relgauss::to_string(s.experiment) << ")\n";
      return kOk;
    }
    if (*run) return execute(run_opts, false);
    if (*sweep) return execute(sweep_opts, true);
    std::cout << app.help();
    return kInvalid;
  } catch (const relgauss::ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const relgauss::ProtocolInapplicable& e) {
    std::cerr << "error: protocol inapplicable: " << e.what() << "\n";
    return kInvalid;
  } catch (const relgauss::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const relgauss::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kNumeric;
  } catch (const relgauss::OutputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  }
}
