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

// Line protocol: one JSON object per LF-terminated line,
//   {"trace":"t1","activity":"A","lifecycle":"start","ts":"2020-01-01T00:00:00Z","attrs":{...}}
// `attrs` is optional and holds string values only.

#include <functional>
#include <istream>
#include <ostream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>

#include "json.hpp"
#include "tempograph/event.hpp"

namespace tempograph {

inline std::string encode_line(const Event& e) {
  nlohmann::ordered_json j;
  j["trace"] = e.trace_id;
  j["activity"] = e.activity;
  j["lifecycle"] = e.lifecycle.raw();
  j["ts"] = format_timestamp(e.timestamp);
  if (!e.attrs.empty()) j["attrs"] = e.attrs;
  return j.dump();
}

/// Decodes one line. Throws Error describing the first problem found.
inline Event decode_line(std::string_view line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error("line is not a JSON object");

  auto str = [&](const char* key, bool required) -> std::string {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) {
      if (required) throw Error(std::string("missing field '") + key + "'");
      return {};
    }
    if (!it->is_string()) throw Error(std::string("field '") + key + "' must be a string");
    return it->get<std::string>();
  };

  Event e;
  e.trace_id = str("trace", true);
  e.activity = str("activity", true);
  if (e.activity.empty()) throw Error("empty activity");
  e.lifecycle = Lifecycle::parse(str("lifecycle", false));
  std::string ts = str("ts", true);
  auto parsed = parse_timestamp(ts);
  if (!parsed) throw Error("unparseable ts '" + ts + "'");
  e.timestamp = *parsed;
  if (auto it = j.find("attrs"); it != j.end() && !it->is_null()) {
    if (!it->is_object()) throw Error("field 'attrs' must be an object");
    for (auto& [k, v] : it->items()) {
      if (!v.is_string()) throw Error("attrs." + k + " must be a string");
      e.attrs[k] = v.get<std::string>();
    }
  }
  return e;
}

/// Pulls events from a line-protocol stream. Bad lines are reported through
/// the warning sink and skipped; memory use does not grow with stream length.
class LineReader {
 public:
  using WarningSink = std::function<void(const std::string&)>;

  explicit LineReader(std::istream& in, WarningSink warn = {}) : in_(in), warn_(std::move(warn)) {}

  std::optional<Event> next() {
    while (std::getline(in_, line_)) {
      ++line_no_;
      if (!line_.empty() && line_.back() == '\r') line_.pop_back();
      if (line_.find_first_not_of(" \t") == std::string::npos) {
        warn("line " + std::to_string(line_no_) + ": blank line skipped");
        continue;
      }
      try {
        return decode_line(line_);
      } catch (const Error& e) {
        warn("line " + std::to_string(line_no_) + ": " + e.what());
      }
    }
    return std::nullopt;
  }

  std::size_t lines_read() const noexcept { return line_no_; }
  std::size_t warnings() const noexcept { return warnings_; }

 private:
  void warn(const std::string& msg) {
    ++warnings_;
    if (warn_) warn_(msg);
  }

  std::istream& in_;
  WarningSink warn_;
  std::string line_;
  std::size_t line_no_ = 0;
  std::size_t warnings_ = 0;
};

/// Collects a finite line-protocol stream into a log: traces in order of
/// first appearance, events sorted by timestamp within each trace.
inline EventLog read_log_lines(std::istream& in, LineReader::WarningSink warn = {}) {
  EventLog log;
  std::unordered_map<std::string, std::size_t> slot;
  LineReader reader(in, std::move(warn));
  while (auto e = reader.next()) {
    auto [it, inserted] = slot.emplace(e->trace_id, log.traces.size());
    if (inserted) log.traces.push_back(Trace{e->trace_id, {}});
    log.traces[it->second].events.push_back(std::move(*e));
  }
  for (auto& t : log.traces) t.sort_events();
  return log;
}

/// Writes every event of `log`, trace by trace, one line each.
inline void write_log_lines(std::ostream& out, const EventLog& log) {
  for (const auto& t : log.traces)
    for (const auto& e : t.events) out << encode_line(e) << '\n';
}

}  // namespace tempograph
