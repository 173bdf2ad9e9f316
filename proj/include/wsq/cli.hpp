#pragma once

// Command-line front end. A run is a pure function of its RunConfig: the
// config is embedded in every report and the same config gives byte-identical
// JSON apart from the "timing" object.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "wsq/circle_operators.hpp"
#include "wsq/report.hpp"

namespace wsq::cli {

enum ExitCode : int { kPass = 0, kUsage = 1, kViolation = 2 };

struct RunConfig {
  std::string subcommand;          ///< verify | constants | simulate | circle | all
  std::string action = "suite";    ///< circle only: suite | gstar-avg | profile
  std::vector<double> c_list{1.0, 2.0, 10.0, 100.0};
  std::vector<double> p_list{2.0, 3.0, 4.0};
  std::uint64_t samples = 100000;  ///< random Bellman samples per region
  int grid_nodes = 5;
  int dirs = 16;
  int depth = 10;
  std::uint64_t trials = 1000;
  std::uint64_t seed = 42;
  double tol = 1e-9;
  circle::QuadratureSpec quad;
  circle::PoissonGrid ap_grid;
  std::uint64_t paths = 0;         ///< Brownian paths; 0 skips the Monte Carlo
  double dt = 1e-4;
  double alpha = 0.5;
  std::string f = "cos";
  std::string corpus;              ///< JSON corpus file; empty uses the built-in corpus
  std::string out;                 ///< JSON report path; empty prints to stdout
  std::string csv;                 ///< optional CSV table path
};

report::json to_json(const RunConfig& cfg);

struct RunResult {
  int exit_code = kPass;
  report::json document;           ///< full envelope
  report::CsvTable table;          ///< empty header when the subcommand emits no table
};

/// Executes a parsed configuration. Throws UsageError / DomainError on bad input.
RunResult execute(const RunConfig& cfg);

/// Parses argv, runs, writes the outputs. Returns the exit code (0 pass, 1 usage, 2 violations).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wsq::cli
