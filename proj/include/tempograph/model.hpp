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

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tempograph/event.hpp"

namespace tempograph {

class ModelError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Temporal profile keys and statistics

/// Identifies one profile entry: the duration of a task, or the distance
/// from the completion of `from` to the start of `to`.
struct DistanceKey {
  enum class Kind { Duration, Distance };

  Kind kind = Kind::Duration;
  std::string from;
  std::string to;  // empty for Duration

  static DistanceKey duration(std::string activity) { return {Kind::Duration, std::move(activity), {}}; }
  static DistanceKey distance(std::string from, std::string to) {
    return {Kind::Distance, std::move(from), std::move(to)};
  }

  bool is_duration() const noexcept { return kind == Kind::Duration; }

  /// The task whose annotation governs this key: the task itself for
  /// durations, the target task for distances.
  const std::string& governing_task() const noexcept { return is_duration() ? from : to; }

  friend auto operator<=>(const DistanceKey&, const DistanceKey&) = default;
  friend bool operator==(const DistanceKey&, const DistanceKey&) = default;

  /// "duration:A" or "distance:A->B". Inside names, '\' and '>' are
  /// backslash-escaped so the arrow never occurs in an escaped name.
  std::string to_string() const {
    if (is_duration()) return "duration:" + escape(from);
    return "distance:" + escape(from) + "->" + escape(to);
  }

  static DistanceKey parse(std::string_view s) {
    auto fail = [&]() -> DistanceKey { throw ModelError("bad profile key '" + std::string(s) + "'"); };
    if (s.rfind("duration:", 0) == 0) {
      auto name = unescape(s.substr(9));
      if (!name || name->empty()) return fail();
      return duration(*name);
    }
    if (s.rfind("distance:", 0) == 0) {
      std::string_view body = s.substr(9);
      for (std::size_t i = 0; i + 1 < body.size(); ++i) {
        if (body[i] == '\\') {
          ++i;
          continue;
        }
        if (body[i] == '-' && body[i + 1] == '>') {
          auto a = unescape(body.substr(0, i));
          auto b = unescape(body.substr(i + 2));
          if (!a || !b || a->empty() || b->empty()) return fail();
          return distance(*a, *b);
        }
      }
    }
    return fail();
  }

 private:
  static std::string escape(std::string_view name) {
    std::string out;
    for (char c : name) {
      if (c == '\\' || c == '>') out.push_back('\\');
      out.push_back(c);
    }
    return out;
  }
  static std::optional<std::string> unescape(std::string_view s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '\\') {
        if (++i == s.size()) return std::nullopt;
      } else if (s[i] == '>') {
        return std::nullopt;
      }
      out.push_back(s[i]);
    }
    return out;
  }
};

/// Sample statistics for one key, in seconds.
struct DistanceStats {
  std::size_t n = 0;
  double mean = 0.0;
  double stddev = 0.0;
  double min = 0.0;
  double max = 0.0;

  friend bool operator==(const DistanceStats&, const DistanceStats&) = default;
};

struct TemporalProfile {
  std::map<DistanceKey, DistanceStats> entries;

  const DistanceStats* find(const DistanceKey& key) const {
    auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second;
  }
  std::size_t count(DistanceKey::Kind kind) const {
    std::size_t n = 0;
    for (const auto& [k, _] : entries) n += (k.kind == kind);
    return n;
  }
  bool empty() const noexcept { return entries.empty(); }

  friend bool operator==(const TemporalProfile&, const TemporalProfile&) = default;
};

// ---------------------------------------------------------------------------
// Block-structured control flow

struct ModelNode {
  enum class Kind { Task, Sequence, Xor, Parallel };

  Kind kind = Kind::Task;
  std::string name;  // tasks only
  std::vector<ModelNode> children;

  friend bool operator==(const ModelNode&, const ModelNode&) = default;
};

inline ModelNode task(std::string name) { return {ModelNode::Kind::Task, std::move(name), {}}; }
inline ModelNode seq(std::vector<ModelNode> c) { return {ModelNode::Kind::Sequence, {}, std::move(c)}; }
inline ModelNode xor_of(std::vector<ModelNode> c) { return {ModelNode::Kind::Xor, {}, std::move(c)}; }
inline ModelNode par(std::vector<ModelNode> c) { return {ModelNode::Kind::Parallel, {}, std::move(c)}; }

struct TaskAnnotation {
  double omega = 1.0;
  double kappa = 3.0;
  friend bool operator==(const TaskAnnotation&, const TaskAnnotation&) = default;
};

/// Per-key override; unset fields fall through to the task annotation.
struct KeyOverride {
  std::optional<double> omega;
  std::optional<double> kappa;
  friend bool operator==(const KeyOverride&, const KeyOverride&) = default;
};

/// Resolved (omega, kappa) pair for one key.
struct Weighting {
  double omega;
  double kappa;
};

/// Control flow, per-task significance annotations and the infused profile.
/// Immutable once constructed; infuse() returns a new model.
class TimedProcessModel {
 public:
  TimedProcessModel(ModelNode root, std::map<std::string, TaskAnnotation> annotations = {},
                    std::map<DistanceKey, KeyOverride> overrides = {}, TaskAnnotation defaults = {},
                    TemporalProfile profile = {})
      : root_(std::move(root)),
        annotations_(std::move(annotations)),
        overrides_(std::move(overrides)),
        defaults_(defaults),
        profile_(std::move(profile)) {
    validate();
  }

  const ModelNode& root() const noexcept { return root_; }
  const std::map<std::string, TaskAnnotation>& annotations() const noexcept { return annotations_; }
  const std::map<DistanceKey, KeyOverride>& overrides() const noexcept { return overrides_; }
  const TaskAnnotation& defaults() const noexcept { return defaults_; }
  const TemporalProfile& profile() const noexcept { return profile_; }

  /// Task names in depth-first order.
  const std::vector<std::string>& tasks() const noexcept { return tasks_; }
  bool has_task(std::string_view name) const { return task_set_.count(std::string(name)) > 0; }

  /// override -> governing task annotation -> model defaults, per field.
  Weighting weighting(const DistanceKey& key) const {
    Weighting w{defaults_.omega, defaults_.kappa};
    if (auto it = annotations_.find(key.governing_task()); it != annotations_.end()) {
      w.omega = it->second.omega;
      w.kappa = it->second.kappa;
    }
    if (auto it = overrides_.find(key); it != overrides_.end()) {
      if (it->second.omega) w.omega = *it->second.omega;
      if (it->second.kappa) w.kappa = *it->second.kappa;
    }
    return w;
  }

  /// Same model with `profile` replacing any previous one.
  TimedProcessModel infuse(TemporalProfile profile) const {
    TimedProcessModel m = *this;
    m.profile_ = std::move(profile);
    return m;
  }

  friend bool operator==(const TimedProcessModel& a, const TimedProcessModel& b) {
    return a.root_ == b.root_ && a.annotations_ == b.annotations_ && a.overrides_ == b.overrides_ &&
           a.defaults_ == b.defaults_ && a.profile_ == b.profile_;
  }

 private:
  static bool valid_weight(double v) { return v >= 0.0; }  // rejects NaN too

  void collect(const ModelNode& n) {
    if (n.kind == ModelNode::Kind::Task) {
      if (n.name.empty()) throw ModelError("task with empty name");
      if (!n.children.empty()) throw ModelError("task '" + n.name + "' has children");
      if (!task_set_.insert(n.name).second) throw ModelError("duplicate task name '" + n.name + "'");
      tasks_.push_back(n.name);
      return;
    }
    if (n.children.empty()) throw ModelError("control-flow block without children");
    for (const auto& c : n.children) collect(c);
  }

  void validate() {
    collect(root_);
    if (!valid_weight(defaults_.omega) || !valid_weight(defaults_.kappa))
      throw ModelError("default omega/kappa must be >= 0");
    for (const auto& [name, a] : annotations_) {
      if (!has_task(name)) throw ModelError("annotation references missing task '" + name + "'");
      if (!valid_weight(a.omega) || !valid_weight(a.kappa))
        throw ModelError("annotation of '" + name + "': omega/kappa must be >= 0");
    }
    for (const auto& [key, o] : overrides_) {
      if (key.is_duration() && !has_task(key.from))
        throw ModelError("override references missing task '" + key.from + "'");
      if ((o.omega && !valid_weight(*o.omega)) || (o.kappa && !valid_weight(*o.kappa)))
        throw ModelError("override " + key.to_string() + ": omega/kappa must be >= 0");
    }
  }

  ModelNode root_;
  std::map<std::string, TaskAnnotation> annotations_;
  std::map<DistanceKey, KeyOverride> overrides_;
  TaskAnnotation defaults_;
  TemporalProfile profile_;
  std::vector<std::string> tasks_;
  std::set<std::string> task_set_;
};

/// Counts of each node kind, handy for summaries.
struct ModelShape {
  std::size_t tasks = 0, sequences = 0, xors = 0, parallels = 0;
};

inline ModelShape shape_of(const ModelNode& n) {
  ModelShape s;
  switch (n.kind) {
    case ModelNode::Kind::Task: s.tasks = 1; return s;
    case ModelNode::Kind::Sequence: s.sequences = 1; break;
    case ModelNode::Kind::Xor: s.xors = 1; break;
    case ModelNode::Kind::Parallel: s.parallels = 1; break;
  }
  for (const auto& c : n.children) {
    auto cs = shape_of(c);
    s.tasks += cs.tasks;
    s.sequences += cs.sequences;
    s.xors += cs.xors;
    s.parallels += cs.parallels;
  }
  return s;
}

}  // namespace tempograph
