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

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "tempograph/model.hpp"

namespace tempograph {

/// When open tasks are re-evaluated for their running-overdue penalty.
struct TickPolicy {
  enum class Kind { PerEvent, Periodic };
  Kind kind = Kind::PerEvent;
  double interval_s = 0.0;  // Periodic only

  static TickPolicy per_event() { return {}; }
  static TickPolicy periodic(double seconds) { return {Kind::Periodic, seconds}; }
};

/// Source of "now" for overdue penalties. StreamTime uses the largest
/// event timestamp seen so far, which keeps replays reproducible.
enum class Clock { Wall, StreamTime };

struct CheckerConfig {
  std::size_t tsize = 100000;       ///< TSIZE: max trace states held at once
  double phi = 1.0;                 ///< global cost modifier
  bool inclusive_threshold = false; ///< deviation at z >= kappa instead of z > kappa
  TickPolicy tick = TickPolicy::per_event();
  Clock clock = Clock::StreamTime;
  std::size_t prefix_cap = 10000;   ///< raw events retained per trace
  std::size_t max_frontier = 1 << 16;

  void validate() const {
    if (tsize < 1) throw Error("tsize must be >= 1");
    if (!(phi >= 0.0)) throw Error("phi must be >= 0");
    if (tick.kind == TickPolicy::Kind::Periodic && !(tick.interval_s > 0.0))
      throw Error("periodic tick interval must be > 0");
    if (max_frontier < 1) throw Error("max_frontier must be >= 1");
  }
};

/// |x - mean| / stddev. With stddev 0 the score is 0 at the mean and
/// +infinity anywhere else.
inline double z_score(double x, const DistanceStats& stats) {
  if (stats.stddev > 0.0) return std::abs(x - stats.mean) / stats.stddev;
  return x == stats.mean ? 0.0 : std::numeric_limits<double>::infinity();
}

inline bool exceeds_threshold(double z, double kappa, bool inclusive) {
  return inclusive ? z >= kappa : z > kappa;
}

/// Everything the checker needs to know about one observation.
struct Assessment {
  bool has_stats = false;
  double z = 0.0;
  Weighting weighting{1.0, 3.0};
  double cost = 0.0;
};

inline Assessment assess(double x, const DistanceKey& key, const TimedProcessModel& model,
                         const CheckerConfig& config) {
  Assessment a;
  a.weighting = model.weighting(key);
  const DistanceStats* stats = model.profile().find(key);
  if (!stats) return a;
  a.has_stats = true;
  a.z = z_score(x, *stats);
  if (exceeds_threshold(a.z, a.weighting.kappa, config.inclusive_threshold)) {
    double scale = a.weighting.omega * config.phi;
    // A zero weight silences the deviation even at infinite z.
    a.cost = scale == 0.0 ? 0.0 : scale * a.z;
  }
  return a;
}

/// Cost of observing `x` seconds for `key`: 0 without profile data or
/// within the threshold, otherwise omega * phi * z.
inline double temporal_cost(double x, const DistanceKey& key, const TimedProcessModel& model,
                            const CheckerConfig& config) {
  return assess(x, key, model, config).cost;
}

}  // namespace tempograph
