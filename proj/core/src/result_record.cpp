#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "relgauss/scenario.hpp"

namespace relgauss {

using nlohmann::ordered_json;

std::string library_version() { return RELGAUSS_VERSION_STRING; }

namespace {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

ordered_json encode_double(double x) {
  if (std::isfinite(x)) return x;
  return ordered_json{{"float", std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf")}};
}

double decode_double(const ordered_json& j) {
  if (j.is_number()) return j.get<double>();
  const std::string s = j.at("float").get<std::string>();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

std::string to_csv(const ResultRecord& record) {
  std::string out;
  for (std::size_t i = 0; i < record.columns.size(); ++i) {
    if (i) out += ',';
    out += csv_field(record.columns[i]);
  }
  out += '\n';
  for (const auto& row : record.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      if (const auto* d = std::get_if<double>(&row[i])) {
        out += format_double(*d);
      } else {
        out += csv_field(std::get<std::string>(row[i]));
      }
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const ResultRecord& record) {
  ordered_json j;
  j["schema_version"] = record.schema_version;
  j["scenario"] = record.scenario;
  j["experiment"] = record.experiment;
  j["columns"] = record.columns;
  ordered_json rows = ordered_json::array();
  for (const auto& row : record.rows) {
    ordered_json r = ordered_json::array();
    for (const auto& cell : row) {
      if (const auto* d = std::get_if<double>(&cell)) {
        r.push_back(encode_double(*d));
      } else {
        r.push_back(std::get<std::string>(cell));
      }
    }
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  ordered_json& p = j["provenance"];
  p["library_version"] = record.provenance.library_version;
  p["tolerances"]["log_negativity"] = record.provenance.tolerances.log_negativity;
  p["tolerances"]["trace"] = record.provenance.tolerances.trace;
  p["tolerances"]["energy"] = record.provenance.tolerances.energy;
  p["tolerance_breaches"] = record.provenance.tolerance_breaches;
  if (record.provenance.wall_time_s) p["wall_time_s"] = *record.provenance.wall_time_s;
  return j.dump(2) + "\n";
}

ResultRecord record_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const ordered_json::exception& e) {
    throw ValidationError(std::string("record_from_json: ") + e.what());
  }
  try {
    ResultRecord rec;
    rec.schema_version = j.at("schema_version").get<int>();
    if (rec.schema_version != ResultRecord::kSchemaVersion) {
      throw ValidationError("record_from_json: unsupported schema_version " +
                            std::to_string(rec.schema_version));
    }
    rec.scenario = j.at("scenario").get<std::string>();
    rec.experiment = j.at("experiment").get<std::string>();
    rec.columns = j.at("columns").get<std::vector<std::string>>();
    for (const auto& r : j.at("rows")) {
      std::vector<Cell> row;
      for (const auto& cell : r) {
        if (cell.is_string()) {
          row.emplace_back(cell.get<std::string>());
        } else {
          row.emplace_back(decode_double(cell));
        }
      }
      rec.rows.push_back(std::move(row));
    }
    const auto& p = j.at("provenance");
    rec.provenance.library_version = p.at("library_version").get<std::string>();
    rec.provenance.tolerances.log_negativity = p.at("tolerances").at("log_negativity").get<double>();
    rec.provenance.tolerances.trace = p.at("tolerances").at("trace").get<double>();
    rec.provenance.tolerances.energy = p.at("tolerances").at("energy").get<double>();
    rec.provenance.tolerance_breaches = p.at("tolerance_breaches").get<std::vector<std::string>>();
    if (p.contains("wall_time_s")) rec.provenance.wall_time_s = p.at("wall_time_s").get<double>();
    return rec;
  } catch (const ordered_json::exception& e) {
    throw ValidationError(std::string("record_from_json: ") + e.what());
  }
}

std::filesystem::path emit(const ResultRecord& record, OutputFormat format,
                           const std::filesystem::path& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) {
    throw OutputError("cannot create output directory '" + directory.string() + "': " + ec.message());
  }
  const auto path = directory / (record.scenario + (format == OutputFormat::csv ? ".csv" : ".json"));
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw OutputError("cannot write '" + path.string() + "'");
  out << (format == OutputFormat::csv ? to_csv(record) : to_json(record));
  out.close();
  if (!out) throw OutputError("failed writing '" + path.string() + "'");
  return path;
}

}  // namespace relgauss
