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
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "tempograph/event.hpp"
#include "tempograph/model.hpp"
#include "tempograph/stats.hpp"

namespace tempograph {

struct MinerConfig {
  /// Distances seen fewer times than this are dropped. Durations are never filtered.
  std::size_t min_support = 0;
  StddevMode stddev_mode = StddevMode::Population;
};

struct MiningDiagnostics {
  std::size_t duration_samples = 0;
  std::size_t distance_samples = 0;  // before support filtering
  std::size_t filtered_distance_keys = 0;
  std::size_t repeated_starts = 0;  // start while the same activity was already open
  std::size_t negative_samples = 0;  // only possible for out-of-order input
};

/// Raw per-key samples, before statistics and filtering.
using SampleTable = std::map<DistanceKey, std::vector<double>>;

/// One pass over each trace:
///  - start: distance from the trace's last complete (if any) to this start;
///    the start is remembered as open (a repeated start overwrites).
///  - complete: duration since the open start of the same activity, if any;
///    either way this event becomes the trace's last complete.
inline SampleTable collect_samples(const EventLog& log, MiningDiagnostics* diag = nullptr) {
  SampleTable samples;
  MiningDiagnostics local;
  MiningDiagnostics& d = diag ? *diag : local;

  std::unordered_map<std::string, Timestamp> open_starts;
  for (const auto& trace : log.traces) {
    open_starts.clear();
    const Event* last_complete = nullptr;
    for (const auto& e : trace.events) {
      if (e.lifecycle.is_start()) {
        if (last_complete) {
          double x = to_seconds(e.timestamp - last_complete->timestamp);
          if (x < 0) ++d.negative_samples;
          samples[DistanceKey::distance(last_complete->activity, e.activity)].push_back(x);
          ++d.distance_samples;
        }
        auto [it, inserted] = open_starts.insert_or_assign(e.activity, e.timestamp);
        if (!inserted) ++d.repeated_starts;
      } else if (e.lifecycle.is_complete()) {
        if (auto it = open_starts.find(e.activity); it != open_starts.end()) {
          double x = to_seconds(e.timestamp - it->second);
          if (x < 0) ++d.negative_samples;
          samples[DistanceKey::duration(e.activity)].push_back(x);
          ++d.duration_samples;
          open_starts.erase(it);
        }
        last_complete = &e;
      }
    }
  }
  return samples;
}

/// Builds the temporal profile of `log`. Samples are sorted before the
/// statistics are taken, so the result does not depend on trace order.
inline TemporalProfile mine_profile(const EventLog& log, const MinerConfig& config = {},
                                    MiningDiagnostics* diag = nullptr) {
  MiningDiagnostics local;
  MiningDiagnostics& d = diag ? *diag : local;
  SampleTable samples = collect_samples(log, &d);

  TemporalProfile profile;
  for (auto& [key, xs] : samples) {
    if (!key.is_duration() && xs.size() < config.min_support) {
      ++d.filtered_distance_keys;
      continue;
    }
    std::sort(xs.begin(), xs.end());
    profile.entries.emplace(key, stats_of(xs, config.stddev_mode));
  }
  return profile;
}

}  // namespace tempograph
