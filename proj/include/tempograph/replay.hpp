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
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <thread>
#include <vector>

#include "tempograph/event.hpp"

namespace tempograph {

/// Position of an event in its log: used to break timestamp ties.
struct LogPosition {
  std::size_t trace = 0;
  std::size_t event = 0;
  friend auto operator<=>(const LogPosition&, const LogPosition&) = default;
};

/// All events of `log` in global timestamp order, ties in log order.
inline std::vector<LogPosition> merge_order(const EventLog& log) {
  std::vector<LogPosition> order;
  order.reserve(log.event_count());
  for (std::size_t t = 0; t < log.traces.size(); ++t)
    for (std::size_t e = 0; e < log.traces[t].events.size(); ++e) order.push_back({t, e});
  std::stable_sort(order.begin(), order.end(), [&](const LogPosition& a, const LogPosition& b) {
    return log.traces[a.trace].events[a.event].timestamp < log.traces[b.trace].events[b.event].timestamp;
  });
  return order;
}

struct ReplayOptions {
  /// 0 emits as fast as possible; otherwise gaps between original
  /// timestamps are divided by `speed`.
  double speed = 0.0;
  /// Extra random pause per emission, uniform in [0, jitter_max_s] wall
  /// seconds. Affects pacing only, never timestamps.
  double jitter_max_s = 0.0;
  std::uint64_t seed = 0;
};

/// Replays a log as a timestamp-ordered stream. Emitted events keep their
/// original timestamps.
class Replayer {
 public:
  using Sleeper = std::function<void(std::chrono::microseconds)>;

  explicit Replayer(const EventLog& log, ReplayOptions opts = {}, Sleeper sleeper = {})
      : log_(log), opts_(opts), order_(merge_order(log)), rng_(opts.seed), sleep_(std::move(sleeper)) {
    if (!sleep_) sleep_ = [](std::chrono::microseconds d) { std::this_thread::sleep_for(d); };
  }

  /// Next event, pausing first if pacing is enabled.
  std::optional<Event> next() {
    if (pos_ >= order_.size()) return std::nullopt;
    const Event& e = at(pos_);
    auto pause = pause_before(pos_);
    if (pause.count() > 0) sleep_(pause);
    ++pos_;
    return e;
  }

  std::size_t size() const noexcept { return order_.size(); }
  const std::vector<LogPosition>& order() const noexcept { return order_; }

 private:
  const Event& at(std::size_t i) const {
    return log_.traces[order_[i].trace].events[order_[i].event];
  }

  std::chrono::microseconds pause_before(std::size_t i) {
    std::chrono::microseconds pause{0};
    if (opts_.speed > 0.0 && i > 0) {
      auto gap = at(i).timestamp - at(i - 1).timestamp;
      pause += std::chrono::microseconds(
          static_cast<std::int64_t>(static_cast<double>(gap.count()) / opts_.speed));
    }
    if (opts_.jitter_max_s > 0.0) {
      std::uniform_real_distribution<double> jitter(0.0, opts_.jitter_max_s);
      pause += from_seconds(jitter(rng_));
    }
    return pause;
  }

  const EventLog& log_;
  ReplayOptions opts_;
  std::vector<LogPosition> order_;
  std::size_t pos_ = 0;
  std::mt19937_64 rng_;
  Sleeper sleep_;
};

/// Drains a replay into a vector (speed 0 semantics regardless of options).
inline std::vector<Event> replay_all(const EventLog& log) {
  std::vector<Event> out;
  out.reserve(log.event_count());
  for (const auto& p : merge_order(log)) out.push_back(log.traces[p.trace].events[p.event]);
  return out;
}

}  // namespace tempograph
