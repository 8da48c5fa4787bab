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

// Optimal prefix alignment of a lifecycle event stream against a
// block-structured model, at activity-instance granularity.
//
// A log instance is a start/complete pair of one activity (a complete closes
// the most recent open start of that activity; an earlier open start is left
// orphaned), or a lone complete. Each instance is either synchronous with the
// model task of the same name, or a log move costing 1. A model task executed
// without a log counterpart is a model move costing 1. A task start is
// synchronous only where the model enables that task; its complete then
// follows the log.
//
// The aligner keeps the set of reachable (marking, cost) pairs after each
// event. A marking holds one status per task. Model moves are inserted
// lazily, only when a synchronous start needs them, which is optimal because
// a task's model move costs the same whenever it is taken.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "tempograph/event.hpp"
#include "tempograph/model.hpp"

namespace tempograph {

enum class TaskStatus : char {
  Unstarted = 0,
  Started = 1,   // synchronous start, its log instance still open
  Orphaned = 2,  // synchronous start whose log instance was superseded
  Completed = 3,
};

/// Flattened model tree with contiguous task ranges per node.
class ModelIndex {
 public:
  struct Node {
    ModelNode::Kind kind;
    int parent = -1;
    std::vector<int> children;
    int task_lo = 0, task_hi = 0;  // tasks [lo, hi) in DFS order
  };

  explicit ModelIndex(const ModelNode& root) { build(root, -1); }
  explicit ModelIndex(const TimedProcessModel& model) : ModelIndex(model.root()) {}

  std::size_t task_count() const noexcept { return task_names_.size(); }
  const std::string& task_name(int t) const { return task_names_[static_cast<std::size_t>(t)]; }
  int task_id(std::string_view name) const {
    auto it = task_ids_.find(std::string(name));
    return it == task_ids_.end() ? -1 : it->second;
  }
  const Node& node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
  int task_node(int t) const { return task_nodes_[static_cast<std::size_t>(t)]; }
  static constexpr int root() { return 0; }

 private:
  int build(const ModelNode& n, int parent) {
    int id = static_cast<int>(nodes_.size());
    nodes_.push_back(Node{n.kind, parent, {}, static_cast<int>(task_names_.size()), 0});
    if (n.kind == ModelNode::Kind::Task) {
      task_ids_.emplace(n.name, static_cast<int>(task_names_.size()));
      task_names_.push_back(n.name);
      task_nodes_.push_back(id);
    } else {
      for (const auto& c : n.children) {
        int cid = build(c, id);
        nodes_[static_cast<std::size_t>(id)].children.push_back(cid);
      }
    }
    nodes_[static_cast<std::size_t>(id)].task_hi = static_cast<int>(task_names_.size());
    return id;
  }

  std::vector<Node> nodes_;
  std::vector<std::string> task_names_;
  std::vector<int> task_nodes_;
  std::unordered_map<std::string, int> task_ids_;
};

/// One status byte per task, indexed by ModelIndex task id.
using Marking = std::string;

namespace marking {

constexpr int kImpossible = std::numeric_limits<int>::max() / 4;

inline TaskStatus at(const Marking& m, int t) { return static_cast<TaskStatus>(m[static_cast<std::size_t>(t)]); }
inline void set(Marking& m, int t, TaskStatus s) { m[static_cast<std::size_t>(t)] = static_cast<char>(s); }

inline bool untouched(const ModelIndex& idx, int node, const Marking& m) {
  const auto& n = idx.node(node);
  for (int t = n.task_lo; t < n.task_hi; ++t)
    if (at(m, t) != TaskStatus::Unstarted) return false;
  return true;
}

/// The branch of an Xor node that has begun, or -1.
inline int active_branch(const ModelIndex& idx, int node, const Marking& m) {
  for (int c : idx.node(node).children)
    if (!untouched(idx, c, m)) return c;
  return -1;
}

/// Model moves needed to finish `node`. A started task costs 1 when
/// `started_cost` is set (closing an instance at trace end) and makes
/// completion impossible otherwise.
inline int completion_cost(const ModelIndex& idx, int node, const Marking& m, bool started_cost) {
  const auto& n = idx.node(node);
  switch (n.kind) {
    case ModelNode::Kind::Task:
      switch (at(m, n.task_lo)) {
        case TaskStatus::Unstarted: return 1;
        case TaskStatus::Completed: return 0;
        default: return started_cost ? 1 : kImpossible;
      }
    case ModelNode::Kind::Sequence:
    case ModelNode::Kind::Parallel: {
      int total = 0;
      for (int c : n.children) total = std::min(kImpossible, total + completion_cost(idx, c, m, started_cost));
      return total;
    }
    case ModelNode::Kind::Xor: {
      if (int a = active_branch(idx, node, m); a >= 0) return completion_cost(idx, a, m, started_cost);
      int best = kImpossible;
      for (int c : n.children) best = std::min(best, completion_cost(idx, c, m, started_cost));
      return best;
    }
  }
  return kImpossible;
}

/// Marks every task needed to finish `node` as completed (cheapest Xor
/// branch, first on ties). Caller has checked completion is possible.
inline void complete_subtree(const ModelIndex& idx, int node, Marking& m) {
  const auto& n = idx.node(node);
  switch (n.kind) {
    case ModelNode::Kind::Task:
      set(m, n.task_lo, TaskStatus::Completed);
      return;
    case ModelNode::Kind::Sequence:
    case ModelNode::Kind::Parallel:
      for (int c : n.children) complete_subtree(idx, c, m);
      return;
    case ModelNode::Kind::Xor: {
      int pick = active_branch(idx, node, m);
      if (pick < 0) {
        int best = kImpossible;
        for (int c : n.children) {
          int cost = completion_cost(idx, c, m, false);
          if (cost < best) {
            best = cost;
            pick = c;
          }
        }
      }
      complete_subtree(idx, pick, m);
      return;
    }
  }
}

/// True if task `t` can still start at some point: unstarted, no sibling
/// Xor branch has begun, and no later Sequence sibling has begun.
inline bool live(const ModelIndex& idx, int t, const Marking& m) {
  if (at(m, t) != TaskStatus::Unstarted) return false;
  int child = idx.task_node(t);
  for (int p = idx.node(child).parent; p >= 0; child = p, p = idx.node(p).parent) {
    const auto& pn = idx.node(p);
    if (pn.kind == ModelNode::Kind::Parallel) continue;
    bool after = false;
    for (int c : pn.children) {
      if (c == child) {
        after = true;
        continue;
      }
      if ((pn.kind == ModelNode::Kind::Xor || after) && !untouched(idx, c, m)) return false;
    }
  }
  return true;
}

/// Cost of the model moves that enable task `t`, applying them to `m`.
/// Returns kImpossible (leaving `m` unspecified) if `t` cannot be enabled.
inline int enable(const ModelIndex& idx, int t, Marking& m) {
  if (!live(idx, t, m)) return kImpossible;
  int cost = 0;
  int child = idx.task_node(t);
  for (int p = idx.node(child).parent; p >= 0; child = p, p = idx.node(p).parent) {
    const auto& pn = idx.node(p);
    if (pn.kind != ModelNode::Kind::Sequence) continue;
    for (int c : pn.children) {
      if (c == child) break;
      int k = completion_cost(idx, c, m, false);
      if (k >= kImpossible) return kImpossible;
      if (k > 0) {
        complete_subtree(idx, c, m);
        cost += k;
      }
    }
  }
  return cost;
}

}  // namespace marking

/// Incremental optimal prefix alignment for one trace.
class PrefixAligner {
 public:
  struct State {
    Marking marking;
    int cost = 0;
  };

  explicit PrefixAligner(const ModelIndex& index, std::size_t max_frontier = 1 << 16)
      : idx_(&index), max_frontier_(max_frontier) {
    frontier_.push_back(State{Marking(index.task_count(), static_cast<char>(TaskStatus::Unstarted)), 0});
  }

  /// Extends the alignment by one event. Lifecycle values other than
  /// start/complete are ignored.
  void step(const Event& e) {
    if (!e.lifecycle.is_start() && !e.lifecycle.is_complete()) return;
    const int t = idx_->task_id(e.activity);
    if (t < 0) ++unknown_events_;

    std::vector<State> next;
    next.reserve(frontier_.size() * 2);

    if (e.lifecycle.is_start()) {
      const bool reopened = !open_.insert(e.activity).second;
      for (auto& s : frontier_) {
        if (t < 0) {
          next.push_back({std::move(s.marking), s.cost + 1});
          continue;
        }
        if (reopened && marking::at(s.marking, t) == TaskStatus::Started)
          marking::set(s.marking, t, TaskStatus::Orphaned);
        Marking synced = s.marking;
        int k = marking::enable(*idx_, t, synced);
        if (k < marking::kImpossible) {
          marking::set(synced, t, TaskStatus::Started);
          next.push_back({std::move(synced), s.cost + k});
        }
        next.push_back({std::move(s.marking), s.cost + 1});
      }
    } else if (open_.erase(e.activity) > 0) {
      // Closes an open instance: synchronous where its start was, free otherwise.
      for (auto& s : frontier_) {
        if (t >= 0 && marking::at(s.marking, t) == TaskStatus::Started)
          marking::set(s.marking, t, TaskStatus::Completed);
        next.push_back(std::move(s));
      }
    } else {
      // A lone complete is a whole instance by itself.
      for (auto& s : frontier_) {
        if (t >= 0) {
          Marking synced = s.marking;
          int k = marking::enable(*idx_, t, synced);
          if (k < marking::kImpossible) {
            marking::set(synced, t, TaskStatus::Completed);
            next.push_back({std::move(synced), s.cost + k});
          }
        }
        next.push_back({std::move(s.marking), s.cost + 1});
      }
    }
    frontier_ = std::move(next);
    prune();
  }

  /// Minimal cost of aligning the events seen so far (trace may continue).
  int prefix_cost() const {
    int best = marking::kImpossible;
    for (const auto& s : frontier_) best = std::min(best, s.cost);
    return best;
  }

  /// Minimal cost if the trace ended now: the model must run to completion,
  /// and each synchronous instance still open costs 1.
  int final_cost() const {
    int best = marking::kImpossible;
    for (const auto& s : frontier_)
      best = std::min(best, s.cost + marking::completion_cost(*idx_, ModelIndex::root(), s.marking, true));
    return best;
  }

  const std::vector<State>& frontier() const noexcept { return frontier_; }
  std::size_t unknown_events() const noexcept { return unknown_events_; }
  /// Number of times the frontier exceeded max_frontier and was cut.
  std::size_t truncations() const noexcept { return truncations_; }

 private:
  int live_count(const Marking& m) const {
    int n = 0;
    for (int t = 0; t < static_cast<int>(idx_->task_count()); ++t) n += marking::live(*idx_, t, m);
    return n;
  }

  // `weak` (higher cost) is dominated by `strong` when the markings agree
  // except for tasks completed in `strong` but unstarted in `weak`, each of
  // which sits in an Xor branch that `weak` has already entered, and `weak`
  // costs at least one more per such task.
  bool dominates(const State& strong, const State& weak) const {
    int diff = 0;
    const Marking& a = strong.marking;
    const Marking& b = weak.marking;
    for (int t = 0; t < static_cast<int>(a.size()); ++t) {
      if (a[static_cast<std::size_t>(t)] == b[static_cast<std::size_t>(t)]) continue;
      if (marking::at(a, t) != TaskStatus::Completed || marking::at(b, t) != TaskStatus::Unstarted) return false;
      if (!branch_entered_elsewhere(t, b)) return false;
      if (weak.cost < strong.cost + ++diff) return false;
    }
    return diff > 0;
  }

  bool branch_entered_elsewhere(int t, const Marking& m) const {
    int child = idx_->task_node(t);
    for (int p = idx_->node(child).parent; p >= 0; child = p, p = idx_->node(p).parent) {
      if (idx_->node(p).kind != ModelNode::Kind::Xor) continue;
      const auto& branch = idx_->node(child);
      bool entered = false;
      for (int u = branch.task_lo; u < branch.task_hi && !entered; ++u)
        entered = u != t && marking::at(m, u) != TaskStatus::Unstarted;
      if (!entered) return false;
    }
    return true;
  }

  void prune() {
    // Keep the cheapest state per marking.
    std::unordered_map<std::string_view, std::size_t> seen;
    seen.reserve(frontier_.size() * 2);
    std::vector<State> unique;
    unique.reserve(frontier_.size());
    for (auto& s : frontier_) {
      auto it = seen.find(s.marking);
      if (it == seen.end()) {
        unique.push_back(std::move(s));
        seen.emplace(unique.back().marking, unique.size() - 1);
      } else if (s.cost < unique[it->second].cost) {
        unique[it->second].cost = s.cost;
      }
    }
    seen.clear();

    // Any state can finish by log-moving every future instance, so a state
    // whose cost exceeds the best completed cost by at least the number of
    // tasks it could still synchronise can never win.
    std::size_t witness = 0;
    int bound = marking::kImpossible;
    for (std::size_t i = 0; i < unique.size(); ++i) {
      int f = unique[i].cost + marking::completion_cost(*idx_, ModelIndex::root(), unique[i].marking, true);
      if (f < bound) {
        bound = f;
        witness = i;
      }
    }
    std::vector<State> kept;
    kept.reserve(unique.size());
    for (std::size_t i = 0; i < unique.size(); ++i) {
      if (i != witness && unique[i].cost >= bound + live_count(unique[i].marking)) continue;
      kept.push_back(std::move(unique[i]));
    }

    std::sort(kept.begin(), kept.end(), [](const State& a, const State& b) {
      return a.cost != b.cost ? a.cost < b.cost : a.marking < b.marking;
    });

    if (kept.size() <= kDominanceLimit) {
      std::vector<State> survivors;
      survivors.reserve(kept.size());
      for (auto& s : kept) {
        bool dominated = false;
        for (const auto& strong : survivors) {
          if (strong.cost < s.cost && dominates(strong, s)) {
            dominated = true;
            break;
          }
        }
        if (!dominated) survivors.push_back(std::move(s));
      }
      kept = std::move(survivors);
    }

    if (kept.size() > max_frontier_) {
      kept.resize(max_frontier_);
      ++truncations_;
    }
    frontier_ = std::move(kept);
  }

  static constexpr std::size_t kDominanceLimit = 2048;

  const ModelIndex* idx_;
  std::size_t max_frontier_;
  std::vector<State> frontier_;
  std::unordered_set<std::string> open_;
  std::size_t unknown_events_ = 0;
  std::size_t truncations_ = 0;
};

/// Aligns a whole event sequence. `complete_trace` selects the full
/// alignment (model must finish) instead of the prefix alignment.
inline int alignment_cost(const ModelIndex& index, const std::vector<Event>& events, bool complete_trace) {
  PrefixAligner aligner(index);
  for (const auto& e : events) aligner.step(e);
  return complete_trace ? aligner.final_cost() : aligner.prefix_cost();
}

}  // namespace tempograph
