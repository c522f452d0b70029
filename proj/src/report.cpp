#include "wentzell/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace wentzell {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

Json json_complex(Complex z) { return Json::array({z.real(), z.imag()}); }

Json json_matrix(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(json_complex(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json json_vector(const Vector& v) {
  Json out = Json::array();
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(json_complex(v[i]));
  return out;
}

Json ReportEnvelope::to_json() const {
  Json doc;
  doc["tool"] = "wentzell-lab";
  doc["version"] = version;
  doc["command"] = command;
  doc["config"] = config_echo;
  doc["wall_time_ms"] = wall_time_ms;
  doc["verdict"] = verdict;
  doc["payload"] = payload;
  return doc;
}

std::vector<std::string> emit_report(const ReportEnvelope& envelope, const OutputSpec& output) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(output.directory, ec);
  if (ec) throw IoError("emit_report: cannot create directory " + output.directory);

  bool want_json = false, want_csv = false;
  for (const std::string& f : output.formats) {
    if (f == "json") want_json = true;
    else if (f == "csv") want_csv = true;
    else throw ConfigError("output.formats: unknown format '" + f + "'");
  }

  std::vector<std::string> written;
  if (want_json) {
    const fs::path path = fs::path(output.directory) / (envelope.command + ".json");
    std::ofstream os(path);
    if (!os) throw IoError("emit_report: cannot open " + path.string());
    os << envelope.to_json().dump(2) << "\n";
    if (!os) throw IoError("emit_report: write failed for " + path.string());
    written.push_back(path.string());
  }
  if (want_csv) {
    for (const CsvTable& table : envelope.tables) {
      const fs::path path = fs::path(output.directory) / (table.name + ".csv");
      std::ofstream os(path);
      if (!os) throw IoError("emit_report: cannot open " + path.string());
      for (std::size_t j = 0; j < table.header.size(); ++j) {
        os << (j ? "," : "") << table.header[j];
      }
      os << "\n";
      for (const auto& row : table.rows) {
        for (std::size_t j = 0; j < row.size(); ++j) os << (j ? "," : "") << row[j];
        os << "\n";
      }
      if (!os) throw IoError("emit_report: write failed for " + path.string());
      written.push_back(path.string());
    }
  }
  return written;
}

}  // namespace wentzell
