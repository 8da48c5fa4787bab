// Copyright 2026 The tempograph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <charconv>
#include <cmath>
#include <ostream>
#include <string>

#include "json.hpp"
#include "tempograph/checker.hpp"

namespace tempograph {

/// Finite numbers as JSON numbers; infinities as the string "inf".
inline nlohmann::ordered_json json_number(double v) {
  if (std::isinf(v)) return "inf";
  return v;
}

inline nlohmann::ordered_json record_to_json(const DeviationRecord& r) {
  nlohmann::ordered_json j;
  j["trace"] = r.trace_id;
  j["kind"] = to_string(r.kind);
  j["key"] = r.key.to_string();
  j["observed_s"] = r.observed;
  j["z"] = json_number(r.z);
  j["cost"] = json_number(r.cost);
  j["at"] = format_timestamp(r.at);
  return j;
}

/// One deviation record per line.
inline std::string record_line(const DeviationRecord& r) { return record_to_json(r).dump(); }

inline nlohmann::ordered_json counters_to_json(const CheckCounters& c) {
  return {{"events", c.events},
          {"ignored_lifecycle", c.ignored_lifecycle},
          {"durations_observed", c.durations_observed},
          {"durations_checked", c.durations_checked},
          {"duration_deviations", c.duration_deviations},
          {"distances_observed", c.distances_observed},
          {"distances_checked", c.distances_checked},
          {"distance_deviations", c.distance_deviations},
          {"unfinished_committed", c.unfinished_committed},
          {"evictions", c.evictions},
          {"resurrections", c.resurrections},
          {"unknown_activity_events", c.unknown_activity_events},
          {"repeated_starts", c.repeated_starts},
          {"frontier_truncations", c.frontier_truncations},
          {"peak_live_traces", c.peak_live_traces}};
}

inline nlohmann::ordered_json trace_to_json(const TraceResult& t) {
  nlohmann::ordered_json j;
  j["trace"] = t.trace_id;
  j["events"] = t.events;
  j["structural"] = t.structural;
  j["structural_final"] = t.structural_final;
  j["temporal_committed"] = json_number(t.temporal_committed);
  j["temporal_pending"] = json_number(t.temporal_pending);
  j["temporal"] = json_number(t.temporal());
  j["combined"] = json_number(t.combined());
  j["duration_deviations"] = t.duration_deviations;
  j["distance_deviations"] = t.distance_deviations;
  if (!t.pending.empty()) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& p : t.pending)
      arr.push_back({{"activity", p.activity}, {"elapsed_s", p.elapsed}, {"z", json_number(p.z)},
                     {"cost", json_number(p.cost)}});
    j["pending"] = arr;
  }
  if (t.evicted) j["evicted"] = true;
  if (t.resurrected) j["resurrected"] = true;
  return j;
}

inline nlohmann::ordered_json report_to_json(const CostReport& r) {
  nlohmann::ordered_json j;
  j["counters"] = counters_to_json(r.counters);
  double structural = 0.0, temporal = 0.0;
  for (const auto& t : r.traces) {
    structural += t.structural;
    temporal += t.temporal();
  }
  j["totals"] = {{"traces", r.traces.size()},
                 {"records", r.records.size()},
                 {"structural", structural},
                 {"temporal", json_number(temporal)},
                 {"combined", json_number(structural + temporal)}};
  auto traces = nlohmann::ordered_json::array();
  for (const auto& t : r.traces) traces.push_back(trace_to_json(t));
  j["traces"] = std::move(traces);
  auto records = nlohmann::ordered_json::array();
  for (const auto& rec : r.records) records.push_back(record_to_json(rec));
  j["records"] = std::move(records);
  return j;
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string csv_number(double v) {
  if (std::isinf(v)) return "inf";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

/// Columns: trace,kind,key,observed_s,z,cost,at
inline void write_records_csv(std::ostream& out, const std::vector<DeviationRecord>& records) {
  out << "trace,kind,key,observed_s,z,cost,at\n";
  for (const auto& r : records) {
    out << csv_escape(r.trace_id) << ',' << to_string(r.kind) << ',' << csv_escape(r.key.to_string()) << ','
        << csv_number(r.observed) << ',' << csv_number(r.z) << ',' << csv_number(r.cost) << ','
        << format_timestamp(r.at) << '\n';
  }
}

}  // namespace tempograph
