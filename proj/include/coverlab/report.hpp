#pragma once

// Machine-readable command reports.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "coverlab/errors.hpp"

namespace coverlab {

inline constexpr int kReportSchemaVersion = 1;

enum class Outcome { pass, fail, partial };

inline std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::pass: return "pass";
    case Outcome::fail: return "fail";
    case Outcome::partial: return "partial";
  }
  return "fail";
}

inline Outcome outcome_from_string(const std::string& s) {
  if (s == "pass") return Outcome::pass;
  if (s == "fail") return Outcome::fail;
  if (s == "partial") return Outcome::partial;
  throw ParseError("unknown outcome \"" + s + "\"");
}

struct ReportRow {
  std::string name;
  bool ok = false;
  std::string detail;

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

struct RunReport {
  int schema_version = kReportSchemaVersion;
  std::string command;
  std::map<std::string, std::string> inputs;
  std::map<std::string, std::string> asset_checksums;  // path -> sha256
  Outcome outcome = Outcome::fail;
  std::vector<ReportRow> rows;
  std::map<std::string, nlohmann::ordered_json> data;  // command-specific payload
  double wall_time_ms = 0;

  void add(std::string name, bool ok, std::string detail = {}) {
    rows.push_back(ReportRow{std::move(name), ok, std::move(detail)});
  }

  bool all_ok() const {
    for (const auto& r : rows) {
      if (!r.ok) return false;
    }
    return true;
  }

  const ReportRow* first_failure() const {
    for (const auto& r : rows) {
      if (!r.ok) return &r;
    }
    return nullptr;
  }

  int exit_code() const { return outcome == Outcome::pass ? 0 : 1; }

  friend bool operator==(const RunReport&, const RunReport&) = default;
};

inline nlohmann::ordered_json report_to_json(const RunReport& r) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) rows.push_back({{"name", row.name}, {"ok", row.ok}, {"detail", row.detail}});
  nlohmann::ordered_json data = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.data) data[k] = v;
  return {{"schema_version", r.schema_version},
          {"command", r.command},
          {"inputs", r.inputs},
          {"asset_checksums", r.asset_checksums},
          {"outcome", to_string(r.outcome)},
          {"rows", rows},
          {"data", data},
          {"wall_time_ms", r.wall_time_ms}};
}

inline RunReport report_from_json(const nlohmann::ordered_json& j) {
  try {
    RunReport r;
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != kReportSchemaVersion) {
      throw ParseError("unsupported report schema version " + std::to_string(r.schema_version));
    }
    r.command = j.at("command").get<std::string>();
    r.inputs = j.at("inputs").get<std::map<std::string, std::string>>();
    r.asset_checksums = j.at("asset_checksums").get<std::map<std::string, std::string>>();
    r.outcome = outcome_from_string(j.at("outcome").get<std::string>());
    for (const auto& row : j.at("rows")) {
      r.rows.push_back(ReportRow{row.at("name").get<std::string>(), row.at("ok").get<bool>(),
                                 row.at("detail").get<std::string>()});
    }
    for (const auto& [k, v] : j.at("data").items()) r.data[k] = v;
    r.wall_time_ms = j.at("wall_time_ms").get<double>();
    return r;
  } catch (const nlohmann::ordered_json::exception& e) {
    throw ParseError(std::string("malformed report: ") + e.what());
  }
}

}  // namespace coverlab
