#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wsq/bellman.hpp"

namespace wsq {

/// One evaluated inequality. Convention: the check passes iff
/// margin <= tolerance * scale (negative margin = slack).
struct ViolationRecord {
  std::string check_name;
  std::optional<bellman::StatePoint> point;
  std::optional<bellman::Direction> direction;
  /// Named scalars needed to replay the sample (c, gamma, p, trial, ...).
  std::vector<std::pair<std::string, double>> extra;
  double margin = 0.0;
  double scale = 1.0;
  std::uint64_t sample_index = 0;

  double relative_margin() const { return margin / scale; }
};

struct ScanReport {
  std::string check_name;
  std::vector<std::pair<std::string, double>> parameters;
  double tolerance = 1e-9;
  std::uint64_t seed = 0;
  std::uint64_t samples = 0;
  std::uint64_t violations = 0;
  /// Sample with the largest relative margin (the closest call or worst violation).
  std::optional<ViolationRecord> worst;
  /// First few violating samples, in sample order.
  std::vector<ViolationRecord> witnesses;
  double wall_seconds = 0.0;

  static constexpr std::size_t kMaxWitnesses = 8;

  bool passed() const { return violations == 0; }
  double worst_relative_margin() const {
    return worst ? worst->relative_margin() : -std::numeric_limits<double>::infinity();
  }

  /// Counts one evaluated record. Records must be added in sample order for
  /// the report to be independent of scheduling.
  void add(const ViolationRecord& record);
  /// Appends another report's records (same tolerance); used to combine per-c scans.
  void merge(const ScanReport& other);
};

}  // namespace wsq
