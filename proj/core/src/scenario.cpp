#include "relgauss/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <json.hpp>

namespace relgauss {

namespace pt = boost::property_tree;

std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::twirl: return "twirl";
    case Experiment::zmodel_extract: return "zmodel-extract";
    case Experiment::povm_sweep: return "povm-sweep";
  }
  return "unknown";
}

std::string_view to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

namespace {

std::string join_errors(const std::vector<std::string>& errors) {
  std::string msg = "invalid scenario:";
  for (const auto& e : errors) msg += "\n  " + e;
  return msg;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::optional<double> parse_double(std::string_view text) {
  const std::string t = trim(text);
  if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
  double v = 0.0;
  const char* begin = t.data();
  const char* end = t.data() + t.size();
  if (!t.empty() && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (t.empty() || ec != std::errc() || ptr != end) return std::nullopt;
  return v;
}

std::optional<long long> parse_integer(std::string_view text) {
  const std::string t = trim(text);
  long long v = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) return std::nullopt;
  return v;
}

class Reader {
 public:
  Reader(const pt::ptree& root, std::vector<std::string>& errors) : root_(root), errors_(errors) {}

  [[nodiscard]] bool has_section(const std::string& section) const {
    return root_.get_child_optional(pt::ptree::path_type(section, '\0')).has_value();
  }

  std::optional<std::string> text(const std::string& section, const std::string& key,
                                  bool required) {
    consumed_.insert(section + "." + key);
    const auto sec = root_.get_child_optional(pt::ptree::path_type(section, '\0'));
    if (sec) {
      const auto v = sec->get_optional<std::string>(pt::ptree::path_type(key, '\0'));
      if (v) return trim(*v);
    }
    if (required) error(section, key, "required key is missing");
    return std::nullopt;
  }

  std::optional<double> number(const std::string& section, const std::string& key, bool required) {
    const auto t = text(section, key, required);
    if (!t) return std::nullopt;
    const auto v = parse_double(*t);
    if (!v) error(section, key, "expected a number, got '" + *t + "'");
    return v;
  }

  std::optional<long long> integer(const std::string& section, const std::string& key,
                                   bool required) {
    const auto t = text(section, key, required);
    if (!t) return std::nullopt;
    const auto v = parse_integer(*t);
    if (!v) error(section, key, "expected an integer, got '" + *t + "'");
    return v;
  }

  std::optional<std::vector<double>> list(const std::string& section, const std::string& key,
                                          bool required, bool allow_ranges = false) {
    const auto t = text(section, key, required);
    if (!t) return std::nullopt;
    if (allow_ranges) {
      static const std::regex range(
          R"(^\s*(linspace|logspace)\s*\(\s*([^,]+),\s*([^,]+),\s*([^)]+)\)\s*$)");
      std::smatch m;
      if (std::regex_match(*t, m, range)) {
        const auto a = parse_double(m[2].str());
        const auto b = parse_double(m[3].str());
        const auto n = parse_integer(m[4].str());
        if (!a || !b || !n || *n < 1 || !std::isfinite(*a) || !std::isfinite(*b)) {
          error(section, key, "malformed range '" + *t + "'");
          return std::nullopt;
        }
        std::vector<double> out;
        for (long long i = 0; i < *n; ++i) {
          const double f = *n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(*n - 1);
          const double x = *a + f * (*b - *a);
          out.push_back(m[1].str() == "logspace" ? std::pow(10.0, x) : x);
        }
        return out;
      }
    }
    std::vector<double> out;
    std::stringstream ss(*t);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto v = parse_double(item);
      if (!v) {
        error(section, key, "expected a comma-separated list of numbers, got '" + *t + "'");
        return std::nullopt;
      }
      out.push_back(*v);
    }
    if (out.empty()) {
      error(section, key, "list is empty");
      return std::nullopt;
    }
    return out;
  }

  void error(const std::string& section, const std::string& key, const std::string& what) {
    errors_.push_back(section + "." + key + ": " + what);
  }

  /// Rejects everything that was never asked for.
  void reject_unconsumed() {
    for (const auto& [section, child] : root_) {
      if (!child.data().empty() && child.empty()) {
        errors_.push_back(section + ": key outside any section");
        continue;
      }
      if (!known_sections_.contains(section)) {
        errors_.push_back("[" + section + "]: unknown section");
        continue;
      }
      for (const auto& [key, value] : child) {
        if (!consumed_.contains(section + "." + key)) {
          errors_.push_back(section + "." + key + ": unknown key");
        }
      }
    }
  }

  std::set<std::string> known_sections_{"scenario", "particles", "zmodel",
                                         "detector", "output",    "tolerances"};

 private:
  const pt::ptree& root_;
  std::vector<std::string>& errors_;
  std::set<std::string> consumed_;
};

bool valid_name(const std::string& name) {
  return !name.empty() && std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
  });
}

bool monotone(const std::vector<double>& g) {
  return std::is_sorted(g.begin(), g.end()) || std::is_sorted(g.rbegin(), g.rend());
}

std::string fmt(double x) {
  std::ostringstream ss;
  ss << x;
  return ss.str();
}

constexpr long long kMaxParticles = 8;
constexpr std::size_t kMaxTerms = 64;

}  // namespace

ScenarioError::ScenarioError(std::vector<std::string> errors)
    : ValidationError(join_errors(errors)), errors_(std::move(errors)) {}

Scenario parse_scenario(const std::string& text) {
  pt::ptree root;
  try {
    std::istringstream in(text);
    pt::read_ini(in, root);
  } catch (const pt::ini_parser_error& e) {
    throw ScenarioError({"line " + std::to_string(e.line()) + ": " + e.message()});
  }

  std::vector<std::string> errors;
  Reader r(root, errors);
  Scenario s;

  // [scenario]
  if (auto name = r.text("scenario", "name", true)) {
    if (valid_name(*name)) {
      s.name = *name;
    } else {
      r.error("scenario", "name", "use only letters, digits, '-', '_' and '.'");
    }
  }
  bool have_experiment = false;
  if (auto e = r.text("scenario", "experiment", true)) {
    have_experiment = true;
    if (*e == "twirl") {
      s.experiment = Experiment::twirl;
    } else if (*e == "zmodel-extract") {
      s.experiment = Experiment::zmodel_extract;
    } else if (*e == "povm-sweep") {
      s.experiment = Experiment::povm_sweep;
    } else {
      have_experiment = false;
      r.error("scenario", "experiment",
              "expected twirl, zmodel-extract or povm-sweep, got '" + *e + "'");
    }
  }

  // [particles]
  std::size_t count = 0;
  if (auto n = r.integer("particles", "count", true)) {
    if (*n < 1 || *n > kMaxParticles) {
      r.error("particles", "count", "must be between 1 and " + std::to_string(kMaxParticles));
    } else {
      count = static_cast<std::size_t>(*n);
    }
  }
  if (auto masses = r.list("particles", "masses_natural", false)) {
    if (count != 0 && masses->size() != count) {
      r.error("particles", "masses_natural", "expected " + std::to_string(count) + " masses");
    } else if (std::any_of(masses->begin(), masses->end(),
                           [](double m) { return !(m > 0.0) || !std::isfinite(m); })) {
      r.error("particles", "masses_natural", "masses must be positive and finite");
    } else {
      s.particles.masses = *masses;
    }
  }
  if (count != 0 && s.particles.masses.empty()) s.particles.masses.assign(count, 1.0);
  if (auto omega = r.number("particles", "omega_natural", false)) {
    if (have_experiment && s.experiment == Experiment::povm_sweep) {
      r.error("particles", "omega_natural",
              "not used by povm-sweep; widths come from detector.width_grid_natural");
    } else if (!(*omega > 0.0) || !std::isfinite(*omega)) {
      r.error("particles", "omega_natural", "must be positive and finite");
    } else {
      s.particles.omega = *omega;
    }
  }
  if (auto ref = r.integer("particles", "reference", false)) {
    if (*ref < 1 || (count != 0 && static_cast<std::size_t>(*ref) > count)) {
      r.error("particles", "reference", "must name a particle between 1 and count");
    } else {
      s.reference = static_cast<std::size_t>(*ref - 1);
    }
  }
  std::size_t n_terms = count == 0 ? 0 : 1;
  for (std::size_t k = 1; k <= count; ++k) {
    const std::string pos_key = "positions_" + std::to_string(k) + "_natural";
    const std::string amp_key = "amplitudes_" + std::to_string(k);
    const std::string phase_key = "phases_" + std::to_string(k) + "_rad";
    const auto positions = r.list("particles", pos_key, true);
    const auto amps = r.list("particles", amp_key, false);
    const auto phases = r.list("particles", phase_key, false);
    if (!positions) {
      n_terms = 0;
      continue;
    }
    bool ok = true;
    if (std::any_of(positions->begin(), positions->end(), [](double x) { return !std::isfinite(x); })) {
      r.error("particles", pos_key, "positions must be finite");
      ok = false;
    }
    if (amps && amps->size() != positions->size()) {
      r.error("particles", amp_key, "expected one amplitude per position");
      ok = false;
    } else if (amps && std::all_of(amps->begin(), amps->end(), [](double a) { return a == 0.0; })) {
      r.error("particles", amp_key, "amplitudes must not all vanish");
      ok = false;
    }
    if (phases && phases->size() != positions->size()) {
      r.error("particles", phase_key, "expected one phase per position");
      ok = false;
    }
    std::vector<Branch> branches;
    for (std::size_t i = 0; i < positions->size(); ++i) {
      const double mag = amps ? (*amps)[i] : 1.0;
      const double phase = phases && phases->size() == positions->size() ? (*phases)[i] : 0.0;
      branches.push_back(Branch{std::polar(mag, phase), (*positions)[i]});
    }
    if (ok) s.particles.positions.push_back(std::move(branches));
    n_terms *= positions->size();
  }
  if (n_terms > kMaxTerms) {
    errors.push_back("particles: " + std::to_string(n_terms) + " product branches exceed the limit of " +
                     std::to_string(kMaxTerms));
  }
  const bool particles_ok = count != 0 && s.particles.positions.size() == count;

  if (count == 1 && have_experiment && s.experiment == Experiment::twirl) {
    r.error("particles", "count", "twirl needs at least two particles");
  }

  // [zmodel]
  const bool wants_zmodel = have_experiment && s.experiment == Experiment::zmodel_extract;
  if (r.has_section("zmodel") && have_experiment && !wants_zmodel) {
    errors.push_back("[zmodel]: section is not used by experiment " +
                     std::string(to_string(s.experiment)));
  }
  if (wants_zmodel) {
    CapacitorZModel z;
    const auto q = r.number("zmodel", "charge_natural", true);
    const auto sigma = r.number("zmodel", "charge_density_natural", true);
    const auto sep = r.number("zmodel", "plate_separation_natural", true);
    const auto left = r.number("zmodel", "x_left_natural", false);
    if (q) z.q = *q;
    if (sigma) z.sigma = *sigma;
    if (left) z.x_left = *left;
    if (sep) {
      if (!(*sep > 0.0) || !std::isfinite(*sep)) {
        r.error("zmodel", "plate_separation_natural", "must be positive and finite");
      }
      z.plate_separation = *sep;
    }
    if (q && sigma && !std::isfinite(z.coupling())) {
      r.error("zmodel", "charge_natural", "charge times charge density must be finite");
    }
    if (sep && *sep > 0.0 && particles_ok) {
      for (std::size_t k = 0; k < count; ++k) {
        const auto& branches = s.particles.positions[k];
        for (std::size_t i = 0; i < branches.size(); ++i) {
          if (!z.contains(branches[i].center)) {
            r.error("particles", "positions_" + std::to_string(k + 1) + "_natural",
                    "branch " + std::to_string(i + 1) + " at x = " + fmt(branches[i].center) +
                        " lies outside the capacitor [" + fmt(z.x_left) + ", " +
                        fmt(z.x_right()) + "]");
          }
        }
      }
    }
    if (count == 1) {
      r.error("particles", "count", "zmodel-extract needs at least two particles");
    }
    s.zmodel = z;
  }

  // [detector]
  const bool wants_detector = have_experiment && s.experiment == Experiment::povm_sweep;
  if (r.has_section("detector") && have_experiment && !wants_detector) {
    errors.push_back("[detector]: section is not used by experiment " +
                     std::string(to_string(s.experiment)));
  }
  if (wants_detector) {
    DetectorSettings d;
    if (auto dh = r.number("detector", "delta_h_natural", false)) {
      if (!(*dh > 0.0) || !std::isfinite(*dh)) {
        r.error("detector", "delta_h_natural", "must be positive and finite");
      }
      d.delta_h = *dh;
    }
    if (auto g = r.list("detector", "q_sigma_grid", true, true)) {
      if (!monotone(*g)) r.error("detector", "q_sigma_grid", "grid must be monotone");
      if (std::any_of(g->begin(), g->end(), [](double x) { return !(x >= 0.0) || !std::isfinite(x); })) {
        r.error("detector", "q_sigma_grid", "charges must be finite and nonnegative");
      }
      d.q_sigma_grid = *g;
    }
    if (auto g = r.list("detector", "width_grid_natural", true, true)) {
      if (!monotone(*g)) r.error("detector", "width_grid_natural", "grid must be monotone");
      if (std::any_of(g->begin(), g->end(), [](double x) { return !(x > 0.0) || !std::isfinite(x); })) {
        r.error("detector", "width_grid_natural", "widths must be positive and finite");
      }
      d.width_grid = *g;
    }
    if (auto mb = r.integer("detector", "measured_branch", false)) {
      if (*mb < 1 || (n_terms != 0 && static_cast<std::size_t>(*mb) > n_terms)) {
        r.error("detector", "measured_branch",
                "must be between 1 and the number of product branches (" +
                    std::to_string(n_terms) + ")");
      } else {
        d.measured_branch = static_cast<std::size_t>(*mb - 1);
      }
    }
    if (count == 1) r.error("particles", "count", "povm-sweep needs at least two particles");
    s.detector = d;
  }

  // [output]
  if (auto dir = r.text("output", "directory", false)) {
    if (dir->empty()) {
      r.error("output", "directory", "must not be empty");
    } else {
      s.output_directory = *dir;
    }
  }
  if (auto f = r.text("output", "format", false)) {
    if (*f == "csv") {
      s.output_format = OutputFormat::csv;
    } else if (*f == "json") {
      s.output_format = OutputFormat::json;
    } else {
      r.error("output", "format", "expected csv or json, got '" + *f + "'");
    }
  }

  // [tolerances]
  if (auto t = r.number("tolerances", "log_negativity", false)) {
    if (!(*t > 0.0)) r.error("tolerances", "log_negativity", "must be positive");
    s.tolerances.log_negativity = *t;
  }
  if (auto t = r.number("tolerances", "trace", false)) {
    if (!(*t > 0.0)) r.error("tolerances", "trace", "must be positive");
    s.tolerances.trace = *t;
  }
  if (auto t = r.number("tolerances", "energy", false)) {
    if (!(*t > 0.0)) r.error("tolerances", "energy", "must be positive");
    s.tolerances.energy = *t;
  }

  r.reject_unconsumed();
  if (!errors.empty()) throw ScenarioError(std::move(errors));
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError({"cannot read scenario file '" + path.string() + "'"});
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::string describe_schema() {
  using nlohmann::ordered_json;
  const auto key = [](std::string type, bool required, std::string def, std::string desc) {
    ordered_json k;
    k["type"] = std::move(type);
    k["required"] = required;
    if (!def.empty()) k["default"] = std::move(def);
    k["description"] = std::move(desc);
    return k;
  };
  ordered_json doc;
  doc["schema_version"] = ResultRecord::kSchemaVersion;
  doc["format"] = "ini: [section] headers, key = value lines, ';' comments";
  ordered_json& sec = doc["sections"];
  sec["scenario"]["name"] = key("string", true, "", "letters, digits, '-', '_', '.'; names output files");
  sec["scenario"]["experiment"] = key("enum", true, "", "twirl | zmodel-extract | povm-sweep");
  sec["particles"]["count"] = key("integer", true, "", "number of particles, 1 to 8");
  sec["particles"]["masses_natural"] = key("list<number>", false, "1 for every particle", "one positive mass per particle");
  sec["particles"]["omega_natural"] = key("number", false, "50", "packet frequency; width b = (1/2 omega)^(1/2); rejected in povm-sweep");
  sec["particles"]["reference"] = key("integer", false, "1", "reference particle of the relational coordinates");
  sec["particles"]["positions_<k>_natural"] = key("list<number>", true, "", "branch centers of particle k (1-based)");
  sec["particles"]["amplitudes_<k>"] = key("list<number>", false, "all 1", "branch amplitude magnitudes of particle k");
  sec["particles"]["phases_<k>_rad"] = key("list<number>", false, "all 0", "branch amplitude phases of particle k");
  sec["zmodel"]["charge_natural"] = key("number", true, "", "particle charge q (zmodel-extract only)");
  sec["zmodel"]["charge_density_natural"] = key("number", true, "", "plate charge density sigma");
  sec["zmodel"]["plate_separation_natural"] = key("number", true, "", "plate separation L > 0");
  sec["zmodel"]["x_left_natural"] = key("number", false, "0", "left plate; energies are relative to it");
  sec["detector"]["delta_h_natural"] = key("number", false, "1", "detector energy resolution; bin width is delta_h / q_sigma (povm-sweep only)");
  sec["detector"]["q_sigma_grid"] = key("grid", true, "", "monotone list, linspace(a, b, n) or logspace(a, b, n)");
  sec["detector"]["width_grid_natural"] = key("grid", true, "", "monotone list of packet widths b");
  sec["detector"]["measured_branch"] = key("integer", false, "1", "product branch whose CM the bin is centered on");
  sec["output"]["directory"] = key("string", false, "$RELGAUSS_OUTPUT_DIR or .", "output directory; --out overrides");
  sec["output"]["format"] = key("enum", false, "csv", "csv | json; --format overrides");
  sec["tolerances"]["log_negativity"] = key("number", false, "1e-08", "post-twirl log-negativity bound");
  sec["tolerances"]["trace"] = key("number", false, "1e-10", "unit-trace bound for reduced operators");
  sec["tolerances"]["energy"] = key("number", false, "1e-10", "bound on energy consistency checks (partition independence, mixture vs branch mean)");

  ordered_json& out = doc["outputs"];
  out["twirl"] = {"stage", "cut", "quantity", "value"};
  out["zmodel-extract"] = {"quantity", "branch", "value"};
  out["povm-sweep"] = {"q_sigma", "b", "delta_x", "p", "log_negativity", "dist_to_twirl", "dist_to_zmodel"};
  doc["exit_codes"] = {{"0", "success"},
                       {"1", "i/o failure"},
                       {"2", "validation error or inapplicable protocol"},
                       {"3", "numeric failure or tolerance breach"}};
  return doc.dump(2) + "\n";
}

}  // namespace relgauss
