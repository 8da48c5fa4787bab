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

// Helpers shared by the test suites: compact event builders and seeded
// generators for logs and models.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tempograph.hpp"

namespace tgt {

using namespace tempograph;

inline Event S(const std::string& trace, const std::string& act, double t) {
  return make_event(trace, act, Lifecycle::start(), t);
}
inline Event C(const std::string& trace, const std::string& act, double t) {
  return make_event(trace, act, Lifecycle::complete(), t);
}

/// Builds a log from events, grouping by trace id in order of appearance.
inline EventLog log_of(const std::vector<Event>& events) {
  EventLog log;
  for (const auto& e : events) {
    auto it = std::find_if(log.traces.begin(), log.traces.end(),
                           [&](const Trace& t) { return t.trace_id == e.trace_id; });
    if (it == log.traces.end()) {
      log.traces.push_back(Trace{e.trace_id, {}});
      it = log.traces.end() - 1;
    }
    it->events.push_back(e);
  }
  for (auto& t : log.traces) t.sort_events();
  return log;
}

/// The (mu, sigma) profile used by the worked example.
inline TimedProcessModel example_model() {
  TemporalProfile p;
  p.entries[DistanceKey::duration("A")] = {10, 20.0, 4.0, 14.0, 26.0};
  p.entries[DistanceKey::distance("A", "B")] = {10, 3.0, 0.5, 2.0, 4.0};
  p.entries[DistanceKey::duration("B")] = {10, 6.0, 0.5, 5.0, 7.0};
  p.entries[DistanceKey::duration("C")] = {10, 4.0, 1.0, 2.5, 5.5};
  std::map<DistanceKey, KeyOverride> ov;
  ov[DistanceKey::distance("A", "B")] = KeyOverride{2.0, std::nullopt};
  ov[DistanceKey::duration("B")] = KeyOverride{std::nullopt, 2.0};
  return TimedProcessModel(seq({task("A"), task("B"), task("C")}), {}, ov, {}, p);
}

inline std::vector<Event> example_t1() { return {S("t1", "A", 0), C("t1", "A", 19), S("t1", "B", 29)}; }
inline std::vector<Event> example_t2() {
  return {S("t2", "A", 0), C("t2", "A", 20), S("t2", "B", 23), S("t2", "C", 24), C("t2", "C", 28), C("t2", "B", 29)};
}

/// Random log with lifecycle noise: repeated starts, lone completes, lone
/// starts, "schedule" events, equal timestamps. Events are time-ordered.
inline EventLog random_log(std::mt19937_64& rng, std::size_t max_events, std::size_t traces,
                           const std::vector<std::string>& activities) {
  std::vector<Event> events;
  std::uniform_int_distribution<std::size_t> pick(0, activities.size() - 1);
  std::uniform_int_distribution<int> kind(0, 9);
  std::uniform_int_distribution<int> gap(0, 5);
  std::size_t budget = max_events;
  for (std::size_t t = 0; t < traces && budget > 0; ++t) {
    std::string id = "r" + std::to_string(t);
    double now = static_cast<double>(gap(rng));
    std::size_t n = std::uniform_int_distribution<std::size_t>(0, std::min<std::size_t>(budget, 14))(rng);
    for (std::size_t i = 0; i < n; ++i) {
      const std::string& a = activities[pick(rng)];
      int k = kind(rng);
      Lifecycle lc = k < 5 ? Lifecycle::start() : k < 9 ? Lifecycle::complete() : Lifecycle::other("schedule");
      events.push_back(make_event(id, a, lc, now));
      now += gap(rng);  // zero gaps give timestamp ties
    }
    budget -= n;
  }
  return log_of(events);
}

/// Random block-structured model over the given task names (each used once).
inline ModelNode random_tree(std::mt19937_64& rng, std::vector<std::string> names) {
  if (names.size() == 1) return task(names[0]);
  std::uniform_int_distribution<int> kd(0, 2);
  std::size_t parts = std::uniform_int_distribution<std::size_t>(2, std::min<std::size_t>(3, names.size()))(rng);
  std::vector<std::size_t> cuts;
  std::vector<std::size_t> all(names.size() - 1);
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i + 1;
  std::shuffle(all.begin(), all.end(), rng);
  cuts.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(parts - 1));
  std::sort(cuts.begin(), cuts.end());
  cuts.push_back(names.size());
  std::vector<ModelNode> children;
  std::size_t lo = 0;
  for (std::size_t hi : cuts) {
    children.push_back(random_tree(rng, std::vector<std::string>(names.begin() + static_cast<std::ptrdiff_t>(lo),
                                                                 names.begin() + static_cast<std::ptrdiff_t>(hi))));
    lo = hi;
  }
  int k = kd(rng);
  ModelNode n{k == 0 ? ModelNode::Kind::Sequence : k == 1 ? ModelNode::Kind::Xor : ModelNode::Kind::Parallel, {},
              std::move(children)};
  return n;
}

/// Clean synthetic process: a sequence of tasks with known mean durations and
/// gaps. Every sample deviates from its mean by at most `noise` times the
/// given spread, uniformly.
struct SyntheticProcess {
  std::vector<std::string> tasks;
  std::vector<double> duration_mean, duration_spread;
  std::vector<double> gap_mean, gap_spread;  // gap_*[i]: complete of i-1 to start of i (i >= 1)

  TimedProcessModel model() const {
    std::vector<ModelNode> c;
    for (const auto& t : tasks) c.push_back(task(t));
    return TimedProcessModel(seq(std::move(c)));
  }

  EventLog generate(std::size_t traces, std::uint64_t seed, double noise = 1.0) const {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    EventLog log;
    for (std::size_t i = 0; i < traces; ++i) {
      Trace t{"case-" + std::to_string(i), {}};
      double now = 1000.0 * static_cast<double>(i);
      for (std::size_t k = 0; k < tasks.size(); ++k) {
        if (k > 0) now += gap_mean[k] + noise * gap_spread[k] * u(rng);
        double start = now;
        now += duration_mean[k] + noise * duration_spread[k] * u(rng);
        // Millisecond grid keeps sample values exact through timestamps.
        start = std::round(start * 1000.0) / 1000.0;
        now = std::round(now * 1000.0) / 1000.0;
        t.events.push_back(make_event(t.trace_id, tasks[k], Lifecycle::start(), start));
        t.events.push_back(make_event(t.trace_id, tasks[k], Lifecycle::complete(), now));
      }
      log.traces.push_back(std::move(t));
    }
    return log;
  }
};

inline SyntheticProcess default_synthetic() {
  return SyntheticProcess{{"receive", "inspect", "machine", "measure", "ship"},
                          {30, 120, 600, 90, 45},
                          {3, 12, 40, 9, 5},
                          {0, 20, 60, 15, 30},
                          {0, 2, 6, 1.5, 3}};
}

inline std::string temp_path(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "tempograph-tests";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace tgt
