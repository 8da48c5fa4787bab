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

#include <algorithm>
#include <cctype>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tempograph/time.hpp"

namespace tempograph {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line) : Error(format(what, line)), line_(line) {}

  /// 1-based input line, 0 if not applicable.
  std::size_t line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& what, std::size_t line) {
    return line ? "line " + std::to_string(line) + ": " + what : what;
  }
  std::size_t line_;
};

/// Lifecycle transition. `Other` keeps the raw value (e.g. "schedule", or ""
/// when the attribute was missing).
class Lifecycle {
 public:
  enum class Kind { Start, Complete, Other };

  Lifecycle() = default;
  static Lifecycle start() { return Lifecycle(Kind::Start, "start"); }
  static Lifecycle complete() { return Lifecycle(Kind::Complete, "complete"); }
  static Lifecycle other(std::string raw) { return Lifecycle(Kind::Other, std::move(raw)); }

  /// Case-insensitive: "START", "Start" and "start" all map to Start.
  static Lifecycle parse(std::string_view raw) {
    std::string lower(raw);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "start") return start();
    if (lower == "complete") return complete();
    return other(std::string(raw));
  }

  Kind kind() const noexcept { return kind_; }
  bool is_start() const noexcept { return kind_ == Kind::Start; }
  bool is_complete() const noexcept { return kind_ == Kind::Complete; }
  const std::string& raw() const noexcept { return raw_; }

  friend bool operator==(const Lifecycle& a, const Lifecycle& b) {
    return a.kind_ == b.kind_ && (a.kind_ != Kind::Other || a.raw_ == b.raw_);
  }

 private:
  Lifecycle(Kind k, std::string raw) : kind_(k), raw_(std::move(raw)) {}
  Kind kind_ = Kind::Other;
  std::string raw_;
};

using Attributes = std::map<std::string, std::string>;

struct Event {
  std::string trace_id;
  std::string activity;
  Lifecycle lifecycle;
  Timestamp timestamp;
  Attributes attrs;

  friend bool operator==(const Event&, const Event&) = default;
};

struct Trace {
  std::string trace_id;
  std::vector<Event> events;

  /// Stable sort by timestamp; ties keep log order.
  void sort_events() {
    std::stable_sort(events.begin(), events.end(),
                     [](const Event& a, const Event& b) { return a.timestamp < b.timestamp; });
  }

  friend bool operator==(const Trace&, const Trace&) = default;
};

struct EventLog {
  std::vector<Trace> traces;
  std::string source;

  std::size_t event_count() const {
    std::size_t n = 0;
    for (const auto& t : traces) n += t.events.size();
    return n;
  }

  /// Traces [first, last) as a new log, keeping the source name.
  EventLog slice(std::size_t first, std::size_t last) const {
    last = std::min(last, traces.size());
    first = std::min(first, last);
    EventLog out;
    out.source = source;
    out.traces.assign(traces.begin() + static_cast<std::ptrdiff_t>(first),
                      traces.begin() + static_cast<std::ptrdiff_t>(last));
    return out;
  }
};

/// Convenience for fixtures: an event `seconds` after the epoch.
inline Event make_event(std::string trace, std::string activity, Lifecycle lc, double seconds) {
  return Event{std::move(trace), std::move(activity), std::move(lc), at_seconds(seconds), {}};
}

}  // namespace tempograph
