#ifndef WENTZELL_REPORT_HPP
#define WENTZELL_REPORT_HPP

#include <json.hpp>

#include <string>
#include <vector>

#include "wentzell/dense.hpp"

namespace wentzell {

using Json = nlohmann::ordered_json;

struct OutputSpec {
  std::string directory = ".";
  std::vector<std::string> formats = {"json"};
};

/// A flat table destined for a CSV file (one table per file).
struct CsvTable {
  std::string name;  // file stem
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// One report per run: tool version, config echo, command, wall time,
/// command-specific payload, verdict.
struct ReportEnvelope {
  std::string version;
  std::string command;
  Json config_echo;
  double wall_time_ms = 0.0;
  std::string verdict;  // PASS | FAIL | INCONCLUSIVE | N/A
  Json payload;
  std::vector<CsvTable> tables;

  Json to_json() const;
};

/// Full round-trip precision (17 significant digits).
std::string format_double(double x);

Json json_complex(Complex z);  // [re, im]
Json json_matrix(const Matrix& m);
Json json_vector(const Vector& v);

/// Writes <command>.json and one CSV per table into the directory;
/// returns the written paths. Throws IoError.
std::vector<std::string> emit_report(const ReportEnvelope& envelope, const OutputSpec& output);

}  // namespace wentzell

#endif
