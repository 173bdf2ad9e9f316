#include "wsq/report.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#ifndef WSQ_VERSION
#define WSQ_VERSION "0.0.0"
#endif

namespace wsq {

namespace {

// NaN counts as a violation and as the worst record.
bool worse(const ViolationRecord& a, const ViolationRecord& b) {
  const double ra = a.relative_margin();
  const double rb = b.relative_margin();
  if (std::isnan(ra)) return !std::isnan(rb);
  return ra > rb;
}

}  // namespace

void ScanReport::add(const ViolationRecord& record) {
  ++samples;
  if (!(record.margin <= tolerance * record.scale)) {
    ++violations;
    if (witnesses.size() < kMaxWitnesses) witnesses.push_back(record);
  }
  if (!worst || worse(record, *worst)) worst = record;
}

void ScanReport::merge(const ScanReport& other) {
  samples += other.samples;
  violations += other.violations;
  for (const auto& w : other.witnesses) {
    if (witnesses.size() >= kMaxWitnesses) break;
    witnesses.push_back(w);
  }
  if (other.worst && (!worst || worse(*other.worst, *worst))) worst = other.worst;
  wall_seconds += other.wall_seconds;
}

namespace report {

std::string code_version() { return WSQ_VERSION; }

json to_json(const bellman::StatePoint& pt) {
  return {{"x", pt.x}, {"y", pt.y}, {"w", pt.w}, {"v", pt.v}};
}

json to_json(const bellman::Direction& dir) { return {{"d", dir.d}, {"r", dir.r}, {"s", dir.s}}; }

json to_json(const ViolationRecord& rec) {
  json out{{"check", rec.check_name}, {"sample_index", rec.sample_index},
           {"margin", rec.margin},    {"scale", rec.scale},
           {"relative_margin", rec.relative_margin()}};
  if (rec.point) out["point"] = to_json(*rec.point);
  if (rec.direction) out["direction"] = to_json(*rec.direction);
  json extra = json::object();
  for (const auto& [k, v] : rec.extra) extra[k] = v;
  out["extra"] = extra;
  return out;
}

json to_json(const ScanReport& r) {
  json params = json::object();
  for (const auto& [k, v] : r.parameters) params[k] = v;
  json out{{"check", r.check_name}, {"passed", r.passed()},   {"samples", r.samples},
           {"violations", r.violations}, {"tolerance", r.tolerance}, {"seed", r.seed},
           {"parameters", params}};
  out["worst"] = r.worst ? to_json(*r.worst) : json(nullptr);
  json wit = json::array();
  for (const auto& w : r.witnesses) wit.push_back(to_json(w));
  out["witnesses"] = wit;
  return out;
}

json envelope(const json& config, const json& results, const json& timing) {
  return {{"schema_version", kSchemaVersion}, {"code_version", code_version()},
          {"config", config},                 {"results", results},
          {"timing", timing}};
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

json without_timing(json doc) {
  doc.erase("timing");
  return doc;
}

std::string to_csv(const CsvTable& table) {
  std::ostringstream os;
  os.precision(17);
  os << "# csv_version=" << kCsvVersion << "\n";
  for (std::size_t i = 0; i < table.header.size(); ++i) os << (i ? "," : "") << table.header[i];
  os << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << "\n";
  }
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace report
}  // namespace wsq
