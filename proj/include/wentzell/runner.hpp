#ifndef WENTZELL_RUNNER_HPP
#define WENTZELL_RUNNER_HPP

#include <cstdint>

#include "wentzell/problem.hpp"
#include "wentzell/report.hpp"

namespace wentzell {

struct DiskParams {
  int K = 256;
  double beta = -1.0;
  double gamma = 0.0;
  double q = 0.0;
};

/// Parsed and validated experiment configuration; `raw` is the effective
/// config echoed into every report (it reproduces the run exactly).
struct ExperimentConfig {
  Json raw;
  std::string command;
  bool is_disk = false;
  WentzellProblem problem;  // interval problems
  DiskParams disk;          // disk problems
  std::vector<std::size_t> grid_list;
  Json params;  // command block without the name
  OutputSpec output;
  std::uint64_t seed = 0;
};

/// Valid subcommand names, in dispatch order.
const std::vector<std::string>& command_names();

/// Parses a config document. When `cli_command` is nonempty it selects or
/// cross-checks the command block. Throws ConfigError naming the offending
/// field.
ExperimentConfig parse_config(const Json& doc, const std::string& cli_command = "");
ExperimentConfig load_config_file(const std::string& path, const std::string& cli_command = "");

/// Runs the configured experiment and assembles the report envelope.
/// Numerical errors (ResolventPole, SpectrumHit, ...) propagate.
ReportEnvelope execute(const ExperimentConfig& config);

/// Full CLI: parse arguments, execute, emit files, map the outcome to the
/// exit code (0 pass / informational, 1 fail, 2 config error, 3 numerical
/// error).
int run_cli(int argc, char** argv);

}  // namespace wentzell

#endif
