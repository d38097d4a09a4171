#pragma once

// Declarative scenarios: a sectioned key=value document describing particles,
// an experiment and its parameters, executed into a tabular ResultRecord.
//
//   [scenario]   name, experiment = twirl | zmodel-extract | povm-sweep
//   [particles]  count, masses_natural, omega_natural, reference,
//                positions_<k>_natural, amplitudes_<k>, phases_<k>_rad
//   [zmodel]     charge_natural, charge_density_natural,
//                plate_separation_natural, x_left_natural
//   [detector]   delta_h_natural, q_sigma_grid, width_grid_natural,
//                measured_branch
//   [output]     directory, format = csv | json
//   [tolerances] log_negativity, trace, energy
//
// Lists are comma separated; grids also accept linspace(a, b, n) and
// logspace(a, b, n) (base-10 exponents). Particle and branch indices are
// 1-based.

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "relgauss/errors.hpp"
#include "relgauss/partition.hpp"
#include "relgauss/zmodel.hpp"

namespace relgauss {

enum class Experiment { twirl, zmodel_extract, povm_sweep };
std::string_view to_string(Experiment e);

enum class OutputFormat { csv, json };
std::string_view to_string(OutputFormat f);

struct DetectorSettings {
  double delta_h = 1.0;
  std::vector<double> q_sigma_grid;
  std::vector<double> width_grid;
  std::size_t measured_branch = 0;
};

struct Tolerances {
  double log_negativity = 1e-8;
  double trace = 1e-10;
  double energy = 1e-10;

  friend bool operator==(const Tolerances&, const Tolerances&) = default;
};

struct Scenario {
  std::string name;
  Experiment experiment = Experiment::twirl;
  ParticleConfig particles;
  std::size_t reference = 0;
  std::optional<CapacitorZModel> zmodel;
  std::optional<DetectorSettings> detector;
  std::optional<std::string> output_directory;
  std::optional<OutputFormat> output_format;
  Tolerances tolerances;
};

/// Every problem found in a scenario document, not just the first.
class ScenarioError : public ValidationError {
 public:
  explicit ScenarioError(std::vector<std::string> errors);
  [[nodiscard]] const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);

/// Machine-readable description of the scenario keys and output tables.
std::string describe_schema();

using Cell = std::variant<std::string, double>;

struct Provenance {
  std::string library_version;
  Tolerances tolerances;
  /// Checks that ran but exceeded their tolerance; the table is still valid
  /// output but the run counts as a numeric failure.
  std::vector<std::string> tolerance_breaches;
  std::optional<double> wall_time_s;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct ResultRecord {
  static constexpr int kSchemaVersion = 1;

  int schema_version = kSchemaVersion;
  std::string scenario;
  std::string experiment;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  Provenance provenance;

  friend bool operator==(const ResultRecord&, const ResultRecord&) = default;
};

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string library_version();

/// Executes the scenario. Module errors are rethrown with the scenario name
/// prefixed, keeping their type.
ResultRecord run(const Scenario& scenario);

std::string to_csv(const ResultRecord& record);
std::string to_json(const ResultRecord& record);
ResultRecord record_from_json(const std::string& text);

/// Writes <directory>/<scenario>.<csv|json> and returns the path.
std::filesystem::path emit(const ResultRecord& record, OutputFormat format,
                           const std::filesystem::path& directory);

}  // namespace relgauss
