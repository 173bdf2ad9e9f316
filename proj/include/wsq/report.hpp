#pragma once

// JSON and CSV emission. Reports are deterministic functions of the run
// configuration: wall-clock timings live under a separate "timing" key that
// is excluded from the determinism contract.

#include <string>
#include <vector>

#include "json.hpp"
#include "wsq/scan_report.hpp"

namespace wsq::report {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;
inline constexpr int kCsvVersion = 1;

std::string code_version();

json to_json(const bellman::StatePoint& pt);
json to_json(const bellman::Direction& dir);
json to_json(const ViolationRecord& rec);
/// Scan report without its wall time.
json to_json(const ScanReport& report);

/// {"schema_version", "code_version", "config", "results", "timing"}.
json envelope(const json& config, const json& results, const json& timing);

/// Dump with a trailing newline; same input gives the same bytes.
std::string dump(const json& doc);

/// Drops the "timing" key, for determinism comparisons.
json without_timing(json doc);

/// CSV table with a "# csv_version=N" first line and a fixed header.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

std::string to_csv(const CsvTable& table);

/// Writes `text` to `path`; throws std::runtime_error on I/O failure.
void write_file(const std::string& path, const std::string& text);

}  // namespace wsq::report
