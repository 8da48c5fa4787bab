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

// Streaming conformance checker with a bounded trace table.

#include <algorithm>
#include <chrono>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "tempograph/alignment.hpp"
#include "tempograph/cost.hpp"
#include "tempograph/event.hpp"
#include "tempograph/model.hpp"
#include "tempograph/replay.hpp"

namespace tempograph {

struct DeviationRecord {
  enum class Kind { Duration, Distance, UnfinishedEstimate };
  std::string trace_id;
  DistanceKey key;
  double observed = 0.0;  // seconds
  double z = 0.0;
  double cost = 0.0;
  Timestamp at{};
  Kind kind = Kind::Duration;

  friend bool operator==(const DeviationRecord&, const DeviationRecord&) = default;
};

inline const char* to_string(DeviationRecord::Kind k) {
  switch (k) {
    case DeviationRecord::Kind::Duration: return "duration";
    case DeviationRecord::Kind::Distance: return "distance";
    case DeviationRecord::Kind::UnfinishedEstimate: return "unfinished";
  }
  return "?";
}

/// Provisional penalty of a task that is still running.
struct PendingPenalty {
  std::string activity;
  double elapsed = 0.0;
  double z = 0.0;
  double cost = 0.0;

  friend bool operator==(const PendingPenalty&, const PendingPenalty&) = default;
};

/// Final or current totals of one trace instance.
struct TraceResult {
  std::string trace_id;
  std::size_t events = 0;
  int structural = 0;        // optimal prefix alignment cost
  int structural_final = 0;  // cost if the trace ended here
  double temporal_committed = 0.0;
  double temporal_pending = 0.0;
  std::vector<PendingPenalty> pending;
  std::size_t duration_deviations = 0;
  std::size_t distance_deviations = 0;
  bool evicted = false;
  bool resurrected = false;

  double temporal() const { return temporal_committed + temporal_pending; }
  double combined() const { return structural + temporal(); }

  friend bool operator==(const TraceResult&, const TraceResult&) = default;
};

struct CheckCounters {
  std::size_t events = 0;
  std::size_t ignored_lifecycle = 0;  // neither start nor complete
  std::size_t durations_observed = 0;
  std::size_t durations_checked = 0;  // had profile statistics
  std::size_t duration_deviations = 0;
  std::size_t distances_observed = 0;
  std::size_t distances_checked = 0;
  std::size_t distance_deviations = 0;
  std::size_t unfinished_committed = 0;
  std::size_t evictions = 0;
  std::size_t resurrections = 0;
  std::size_t unknown_activity_events = 0;
  std::size_t repeated_starts = 0;
  std::size_t frontier_truncations = 0;
  std::size_t peak_live_traces = 0;

  friend bool operator==(const CheckCounters&, const CheckCounters&) = default;
};

struct CostReport {
  std::vector<TraceResult> traces;  // order of first appearance
  std::vector<DeviationRecord> records;
  CheckCounters counters;

  friend bool operator==(const CostReport&, const CostReport&) = default;
};

/// Per-event notification with the trace's running totals.
struct EventOutcome {
  const Event* event = nullptr;
  int structural = 0;
  double temporal = 0.0;
  double combined = 0.0;
};

struct CheckerCallbacks {
  std::function<void(const DeviationRecord&)> on_record;
  std::function<void(const EventOutcome&)> on_event;
  std::function<void(const TraceResult&)> on_evict;
};

namespace detail {

/// Temporal bookkeeping of one instance, shared by the streaming and batch paths.
class TemporalTracker {
 public:
  struct Open {
    Timestamp start{};
    std::optional<PendingPenalty> penalty;
  };

  /// Processes one event; emits committed deviations through `emit`.
  template <typename Emit>
  void observe(const Event& e, const TimedProcessModel& model, const CheckerConfig& cfg, CheckCounters& c,
               TraceResult& r, Emit&& emit) {
    if (e.lifecycle.is_complete()) {
      if (auto it = open_.find(e.activity); it != open_.end()) {
        double x = to_seconds(e.timestamp - it->second.start);
        DistanceKey key = DistanceKey::duration(e.activity);
        Assessment a = assess(x, key, model, cfg);
        ++c.durations_observed;
        c.durations_checked += a.has_stats;
        if (a.cost > 0.0) {
          ++c.duration_deviations;
          ++r.duration_deviations;
          commit(r, emit, {e.trace_id, std::move(key), x, a.z, a.cost, e.timestamp,
                           DeviationRecord::Kind::Duration});
        }
        open_.erase(it);
      }
      preceding_ = std::make_pair(e.activity, e.timestamp);
    } else if (e.lifecycle.is_start()) {
      if (preceding_) {
        double x = to_seconds(e.timestamp - preceding_->second);
        DistanceKey key = DistanceKey::distance(preceding_->first, e.activity);
        Assessment a = assess(x, key, model, cfg);
        ++c.distances_observed;
        c.distances_checked += a.has_stats;
        if (a.cost > 0.0) {
          ++c.distance_deviations;
          ++r.distance_deviations;
          commit(r, emit, {e.trace_id, std::move(key), x, a.z, a.cost, e.timestamp,
                           DeviationRecord::Kind::Distance});
        }
      }
      auto [it, inserted] = open_.insert_or_assign(e.activity, Open{e.timestamp, std::nullopt});
      if (!inserted) ++c.repeated_starts;
    }
  }

  /// Re-evaluates running tasks at `now`; a task past its mean gets its
  /// penalty replaced by the cost of the elapsed time.
  void tick(Timestamp now, const TimedProcessModel& model, const CheckerConfig& cfg) {
    for (auto& [activity, open] : open_) {
      double elapsed = to_seconds(now - open.start);
      DistanceKey key = DistanceKey::duration(activity);
      const DistanceStats* stats = model.profile().find(key);
      if (!stats || !(elapsed > stats->mean)) continue;
      Assessment a = assess(elapsed, key, model, cfg);
      open.penalty = PendingPenalty{activity, elapsed, a.z, a.cost};
    }
  }

  /// Turns pending penalties into committed cost (used on eviction).
  template <typename Emit>
  void commit_pending(const std::string& trace_id, Timestamp at, CheckCounters& c, TraceResult& r, Emit&& emit) {
    for (auto& [activity, open] : open_) {
      if (!open.penalty || open.penalty->cost <= 0.0) continue;
      ++c.unfinished_committed;
      commit(r, emit, {trace_id, DistanceKey::duration(activity), open.penalty->elapsed, open.penalty->z,
                       open.penalty->cost, at, DeviationRecord::Kind::UnfinishedEstimate});
      open.penalty.reset();
    }
  }

  void fill_pending(TraceResult& r) const {
    r.pending.clear();
    r.temporal_pending = 0.0;
    for (const auto& [activity, open] : open_) {
      if (!open.penalty || open.penalty->cost <= 0.0) continue;
      r.pending.push_back(*open.penalty);
      r.temporal_pending += open.penalty->cost;
    }
  }

  double pending_cost() const {
    double s = 0.0;
    for (const auto& [_, open] : open_)
      if (open.penalty) s += open.penalty->cost;
    return s;
  }

  const std::map<std::string, Open>& open_starts() const noexcept { return open_; }

 private:
  template <typename Emit>
  static void commit(TraceResult& r, Emit& emit, DeviationRecord rec) {
    r.temporal_committed += rec.cost;
    emit(std::move(rec));
  }

  std::map<std::string, Open> open_;
  std::optional<std::pair<std::string, Timestamp>> preceding_;
};

inline Timestamp wall_now() {
  return std::chrono::time_point_cast<std::chrono::microseconds>(std::chrono::system_clock::now());
}

}  // namespace detail

/// Per-instance runtime state of the streaming checker.
struct TraceState {
  TraceState(std::string id, const ModelIndex& index, std::size_t max_frontier)
      : aligner(index, max_frontier) {
    result.trace_id = std::move(id);
  }

  PrefixAligner aligner;
  detail::TemporalTracker temporal;
  std::deque<Event> prefix;  // most recent events, capped
  TraceResult result;
  std::size_t slot = 0;  // index into the report's trace list
  std::pair<Timestamp, std::uint64_t> last_seen{};
};

class StreamChecker {
 public:
  StreamChecker(const TimedProcessModel& model, CheckerConfig config, CheckerCallbacks callbacks = {},
                bool retain_report = true)
      : model_(std::make_shared<TimedProcessModel>(model)),
        index_(std::make_shared<ModelIndex>(model_->root())),
        config_(config),
        callbacks_(std::move(callbacks)),
        retain_(retain_report) {
    config_.validate();
  }

  void push(const Event& e) {
    ++report_.counters.events;
    if (!e.lifecycle.is_start() && !e.lifecycle.is_complete()) ++report_.counters.ignored_lifecycle;
    if (!any_ts_ || e.timestamp > max_ts_) max_ts_ = e.timestamp;
    any_ts_ = true;

    TraceState& st = state_for(e);
    eviction_order_.erase(st.last_seen);
    st.last_seen = {e.timestamp, seq_++};
    eviction_order_.emplace(st.last_seen, e.trace_id);

    st.prefix.push_back(e);
    if (st.prefix.size() > config_.prefix_cap) st.prefix.pop_front();
    ++st.result.events;

    std::size_t trunc_before = st.aligner.truncations();
    std::size_t unknown_before = st.aligner.unknown_events();
    st.aligner.step(e);
    report_.counters.frontier_truncations += st.aligner.truncations() - trunc_before;
    report_.counters.unknown_activity_events += st.aligner.unknown_events() - unknown_before;

    st.temporal.observe(e, *model_, config_, report_.counters, st.result,
                        [&](DeviationRecord r) { emit(std::move(r)); });

    if (config_.tick.kind == TickPolicy::Kind::PerEvent) {
      st.temporal.tick(now(), *model_, config_);
    } else {
      maybe_periodic_tick();
    }

    refresh(st);
    if (callbacks_.on_event) {
      callbacks_.on_event(EventOutcome{&e, st.result.structural, st.result.temporal(), st.result.combined()});
    }
  }

  /// Ticks every live trace at `now`.
  void tick(Timestamp now) {
    for (auto& [id, st] : states_) {
      st->temporal.tick(now, *model_, config_);
      refresh(*st);
    }
  }

  /// Report including live traces with their pending penalties.
  const CostReport& report() {
    for (auto& [id, st] : states_) refresh(*st);
    return report_;
  }

  CostReport finish() { return report(); }

  std::size_t live_traces() const noexcept { return states_.size(); }
  const TraceState* find(const std::string& trace_id) const {
    auto it = states_.find(trace_id);
    return it == states_.end() ? nullptr : it->second.get();
  }
  const CheckerConfig& config() const noexcept { return config_; }

  /// Rough bytes held by live trace state (prefixes and frontiers).
  std::size_t state_bytes() const {
    std::size_t bytes = 0;
    for (const auto& [id, st] : states_) {
      bytes += sizeof(TraceState) + id.size();
      for (const auto& e : st->prefix) bytes += sizeof(Event) + e.activity.size() + e.trace_id.size();
      for (const auto& s : st->aligner.frontier()) bytes += sizeof(s) + s.marking.size();
      bytes += st->temporal.open_starts().size() * 64;
    }
    return bytes;
  }

 private:
  Timestamp now() const {
    return config_.clock == Clock::Wall ? detail::wall_now() : max_ts_;
  }

  void maybe_periodic_tick() {
    Timestamp t = now();
    auto interval = from_seconds(config_.tick.interval_s);
    if (!next_tick_) next_tick_ = t + interval;
    if (t < *next_tick_) return;
    tick(t);
    while (*next_tick_ <= t) *next_tick_ += interval;
  }

  TraceState& state_for(const Event& e) {
    if (auto it = states_.find(e.trace_id); it != states_.end()) return *it->second;
    if (states_.size() >= config_.tsize) evict_oldest();
    auto st = std::make_unique<TraceState>(e.trace_id, *index_, config_.max_frontier);
    if (finished_ids_.count(e.trace_id)) {
      st->result.resurrected = true;
      ++report_.counters.resurrections;
    }
    st->slot = report_.traces.size();
    if (retain_) report_.traces.push_back(st->result);
    auto& ref = *st;
    states_.emplace(e.trace_id, std::move(st));
    report_.counters.peak_live_traces = std::max(report_.counters.peak_live_traces, states_.size());
    return ref;
  }

  void evict_oldest() {
    auto oldest = eviction_order_.begin();
    std::string id = oldest->second;
    eviction_order_.erase(oldest);
    auto it = states_.find(id);
    TraceState& st = *it->second;
    st.temporal.commit_pending(id, now(), report_.counters, st.result,
                               [&](DeviationRecord r) { emit(std::move(r)); });
    st.result.evicted = true;
    refresh(st);
    ++report_.counters.evictions;
    if (callbacks_.on_evict) callbacks_.on_evict(st.result);
    finished_ids_.insert(id);
    states_.erase(it);
  }

  void refresh(TraceState& st) {
    st.result.structural = st.aligner.prefix_cost();
    st.result.structural_final = st.aligner.final_cost();
    st.temporal.fill_pending(st.result);
    if (retain_) report_.traces[st.slot] = st.result;
  }

  void emit(DeviationRecord r) {
    if (callbacks_.on_record) callbacks_.on_record(r);
    if (retain_) report_.records.push_back(std::move(r));
  }

  std::shared_ptr<const TimedProcessModel> model_;
  std::shared_ptr<const ModelIndex> index_;
  CheckerConfig config_;
  CheckerCallbacks callbacks_;
  bool retain_;

  std::unordered_map<std::string, std::unique_ptr<TraceState>> states_;
  std::map<std::pair<Timestamp, std::uint64_t>, std::string> eviction_order_;
  std::unordered_set<std::string> finished_ids_;
  CostReport report_;
  Timestamp max_ts_{};
  bool any_ts_ = false;
  std::optional<Timestamp> next_tick_;
  std::uint64_t seq_ = 0;
};

/// Runs `events` through a fresh StreamChecker.
template <typename Range>
CostReport check_stream(const Range& events, const TimedProcessModel& model, const CheckerConfig& config,
                        CheckerCallbacks callbacks = {}) {
  StreamChecker checker(model, config, std::move(callbacks));
  for (const Event& e : events) checker.push(e);
  return checker.finish();
}

/// Offline check of a whole log. Traces are processed one at a time and the
/// deviation records are put in global timestamp order afterwards. Only the
/// per-event tick policy can be evaluated trace by trace; a periodic policy
/// goes through the streaming path. With `final_now`, every trace gets one
/// more tick at that instant before the report is built.
inline CostReport check_log(const EventLog& log, const TimedProcessModel& model, CheckerConfig config,
                            std::optional<Timestamp> final_now = std::nullopt) {
  config.validate();
  config.clock = Clock::StreamTime;
  config.tsize = std::max<std::size_t>(config.tsize, std::max<std::size_t>(log.traces.size(), 1));
  if (config.tick.kind != TickPolicy::Kind::PerEvent) {
    std::vector<Event> merged;
    merged.reserve(log.event_count());
    for (const auto& pos : merge_order(log)) merged.push_back(log.traces[pos.trace].events[pos.event]);
    StreamChecker checker(model, config);
    for (const Event& e : merged) checker.push(e);
    if (final_now) checker.tick(*final_now);
    return checker.finish();
  }

  ModelIndex index(model.root());
  CostReport report;
  struct Keyed {
    Timestamp ts;
    std::size_t trace, event;
    DeviationRecord rec;
  };
  std::vector<Keyed> keyed;
  std::unordered_map<std::string, std::size_t> slot_of;

  // Trace ids could repeat in a hand-built log; the stream sees them as one instance.
  std::vector<std::vector<LogPosition>> by_instance;
  std::vector<std::string> instance_ids;
  for (const auto& pos : merge_order(log)) {
    const Event& e = log.traces[pos.trace].events[pos.event];
    auto [it, inserted] = slot_of.emplace(e.trace_id, by_instance.size());
    if (inserted) {
      by_instance.emplace_back();
      instance_ids.push_back(e.trace_id);
    }
    by_instance[it->second].push_back(pos);
  }

  auto& c = report.counters;
  c.peak_live_traces = by_instance.size();
  for (std::size_t i = 0; i < by_instance.size(); ++i) {
    PrefixAligner aligner(index, config.max_frontier);
    detail::TemporalTracker temporal;
    TraceResult r;
    r.trace_id = instance_ids[i];
    for (const auto& pos : by_instance[i]) {
      const Event& e = log.traces[pos.trace].events[pos.event];
      ++c.events;
      if (!e.lifecycle.is_start() && !e.lifecycle.is_complete()) ++c.ignored_lifecycle;
      ++r.events;
      aligner.step(e);
      temporal.observe(e, model, config, c, r, [&](DeviationRecord rec) {
        keyed.push_back({e.timestamp, pos.trace, pos.event, std::move(rec)});
      });
      temporal.tick(e.timestamp, model, config);
    }
    if (final_now) temporal.tick(*final_now, model, config);
    r.structural = aligner.prefix_cost();
    r.structural_final = aligner.final_cost();
    temporal.fill_pending(r);
    c.unknown_activity_events += aligner.unknown_events();
    c.frontier_truncations += aligner.truncations();
    report.traces.push_back(std::move(r));
  }

  std::stable_sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
    if (a.ts != b.ts) return a.ts < b.ts;
    if (a.trace != b.trace) return a.trace < b.trace;
    return a.event < b.event;
  });
  report.records.reserve(keyed.size());
  for (auto& k : keyed) report.records.push_back(std::move(k.rec));
  return report;
}

}  // namespace tempograph
