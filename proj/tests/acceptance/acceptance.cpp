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

// Acceptance runner. Prints one PASS/FAIL/SKIP line per criterion.
//
//   tempograph_acceptance            run every criterion
//   tempograph_acceptance c3 c5b     run the named ones
//
// Exit status: 0 all run criteria passed, 1 a criterion failed, 77 every
// requested criterion was skipped (dataset unavailable).

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "oracles.hpp"
#include "support.hpp"

using namespace tempograph;
using tgt::C;
using tgt::S;

namespace {

struct Outcome {
  enum Status { Pass, Fail, Skip } status;
  std::string detail;
};

Outcome pass(std::string d) { return {Outcome::Pass, std::move(d)}; }
Outcome fail(std::string d) { return {Outcome::Fail, std::move(d)}; }
Outcome skip(std::string d) { return {Outcome::Skip, std::move(d)}; }

template <typename F>
double seconds_of(F&& f) {
  auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int prec = 6) {
  std::ostringstream os;
  os << std::setprecision(prec) << v;
  return os.str();
}

std::string data(const std::string& name) { return std::string(TEMPOGRAPH_DATA_DIR) + "/" + name; }

// ---------------------------------------------------------------------------
// Worked example

Outcome worked_example() {
  CheckerConfig cfg;
  cfg.inclusive_threshold = true;
  CostReport r;
  auto log = tgt::log_of([] {
    auto ev = tgt::example_t1();
    auto t2 = tgt::example_t2();
    ev.insert(ev.end(), t2.begin(), t2.end());
    return ev;
  }());
  double secs = seconds_of([&] { r = check_log(log, tgt::example_model(), cfg, at_seconds(36)); });
  const auto& t1 = r.traces.at(0);
  const auto& t2 = r.traces.at(1);
  double total = t1.combined();
  bool ok = total == 34.0 && t2.structural == 1 && t2.temporal() == 0.0 && secs < 1.0;
  std::string d = "t1 total " + fmt(total) + " (distance " + fmt(t1.temporal_committed) + " + unfinished " +
                  fmt(t1.temporal_pending) + ", expected 34); t2 structural " + std::to_string(t2.structural) +
                  " temporal " + fmt(t2.temporal()) + "; " + fmt(secs, 3) + " s";
  return ok ? pass(d) : fail(d);
}

// ---------------------------------------------------------------------------
// Alignment on the branching model

Outcome branching_alignment() {
  ModelIndex idx(load_model_file(data("branching.model.json")));
  auto trace = [](const std::string& acts) {
    std::vector<Event> ev;
    double t = 0;
    for (char a : acts) {
      ev.push_back(S("t", std::string(1, a), t++));
      ev.push_back(C("t", std::string(1, a), t++));
    }
    return ev;
  };
  int abed = alignment_cost(idx, trace("ABED"), true);
  int abce = alignment_cost(idx, trace("ABCE"), true);
  int abde = alignment_cost(idx, trace("ABDE"), true);
  std::string d = "ABED " + std::to_string(abed) + ", ABCE " + std::to_string(abce) + ", ABDE " + std::to_string(abde);
  return abed == 2 && abce == 0 && abde == 0 ? pass(d) : fail(d);
}

// ---------------------------------------------------------------------------
// Public dataset

std::optional<std::string> dataset_path() {
  if (const char* env = std::getenv("TEMPOGRAPH_BPIC12"); env && *env) return std::string(env);
  std::string local = data("BPI_Challenge_2012.xes.gz");
  if (std::filesystem::exists(local)) return local;
  return std::nullopt;
}

struct Dataset {
  EventLog log;
  LogSplit split;
  TimedProcessModel base{task("_")};
  nlohmann::json expected;
  TemporalProfile profile;  // population stddev, min_support 200
  double mine_seconds = 0.0;
};

std::optional<Dataset>& dataset_cache() {
  static std::optional<Dataset> d;
  return d;
}

const Dataset* dataset() {
  auto& cache = dataset_cache();
  if (cache) return &*cache;
  auto path = dataset_path();
  if (!path || !std::filesystem::exists(*path)) return nullptr;
  Dataset d;
  d.log = load_log_file(*path);
  std::ifstream spec_in(data("bpic12.experiment.json"));
  auto spec = experiment_from_json(nlohmann::json::parse(spec_in), TEMPOGRAPH_DATA_DIR);
  d.expected = *spec.expected;
  d.split = split_first(d.log, *spec.train_traces);
  d.mine_seconds = seconds_of([&] { d.profile = mine_profile(d.split.train, spec.miner); });
  d.base = flat_model(d.log);
  cache = std::move(d);
  return &*cache;
}

std::string failed_cells(const std::vector<CellCheck>& cells) {
  std::string s;
  std::size_t n = 0;
  for (const auto& c : cells) {
    if (c.pass) continue;
    if (n++ < 4) s += (s.empty() ? "" : "; ") + c.what + " expected " + fmt(c.expected) + " got " + fmt(c.actual);
  }
  if (n > 4) s += "; +" + std::to_string(n - 4) + " more";
  return s;
}

Outcome profile_reproduction() {
  const Dataset* d = dataset();
  if (!d) return skip("dataset unavailable (set TEMPOGRAPH_BPIC12 or place data/BPI_Challenge_2012.xes.gz)");
  auto cells = check_profile(d->profile, d->expected, 0.02);
  std::string timing = "mining " + fmt(d->mine_seconds, 3) + " s";
  if (d->mine_seconds >= 60.0) return fail(timing + " exceeds 60 s");
  if (all_pass(cells)) return pass("population stddev: all cells within 2%; " + timing);
  TemporalProfile alt = mine_profile(d->split.train, MinerConfig{200, StddevMode::Sample});
  auto alt_cells = check_profile(alt, d->expected, 0.02);
  std::string both = "population: " + failed_cells(cells) + " | sample: " +
                     (all_pass(alt_cells) ? std::string("all cells within 2%") : failed_cells(alt_cells));
  return all_pass(alt_cells) ? pass(both + "; " + timing) : fail(both);
}

Outcome checking_reproduction() {
  const Dataset* d = dataset();
  if (!d) return skip("dataset unavailable");
  auto model = d->base.infuse(d->profile);
  std::string notes;
  bool relaxed_ok = false;
  for (bool inclusive : {false, true}) {
    CheckerConfig cfg;
    cfg.phi = 1.0;
    cfg.inclusive_threshold = inclusive;
    auto s = summarize(check_log(d->split.test, model, cfg));
    auto exact = check_summary(s, d->expected, 0.0);
    std::string mode = inclusive ? "inclusive" : "strict";
    if (all_pass(exact)) return pass(mode + " threshold: exact match");
    auto relaxed = check_summary(s, d->expected, 0.05);
    relaxed_ok = relaxed_ok || all_pass(relaxed);
    notes += (notes.empty() ? "" : " | ") + mode + ": " + failed_cells(exact);
  }
  return relaxed_ok ? pass("degraded to 5% counts and max-z instance; " + notes) : fail(notes);
}

// ---------------------------------------------------------------------------
// Streaming vs batch

bool same_reports(const CostReport& a, const CostReport& b, std::string& why) {
  if (a.traces != b.traces) why = "trace results differ";
  else if (a.records != b.records) why = "records differ";
  else if (a.counters != b.counters) why = "counters differ";
  else return true;
  return false;
}

EventLog noisy_synthetic(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto proc = tgt::default_synthetic();
  auto log = proc.generate(20, seed, 3.0);
  for (auto& t : log.traces) {
    std::vector<Event> out;
    for (const auto& e : t.events) {
      auto r = rng() % 20;
      if (r == 0) continue;  // dropped event
      out.push_back(e);
      if (r == 1 && e.lifecycle.is_start()) out.push_back(e);  // repeated start
      if (r == 2) out.push_back(make_event(t.trace_id, "unknown", Lifecycle::start(), to_seconds(e.timestamp.time_since_epoch())));
    }
    t.events = std::move(out);
    t.sort_events();
  }
  return log;
}

Outcome stream_batch_synthetic() {
  auto proc = tgt::default_synthetic();
  auto model = proc.model().infuse(mine_profile(proc.generate(200, 999)));
  auto example = tgt::example_model();
  std::size_t records = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    CheckerConfig cfg;
    cfg.inclusive_threshold = seed % 3 == 0;
    EventLog log;
    const TimedProcessModel* m = &model;
    if (seed % 2 == 0) {
      log = noisy_synthetic(seed);
    } else {
      std::mt19937_64 rng(seed);
      log = tgt::random_log(rng, 150, 15, {"A", "B", "C", "X"});
      m = &example;
    }
    auto batch = check_log(log, *m, cfg);
    auto stream = check_stream(replay_all(log), *m, cfg);
    std::string why;
    if (!same_reports(batch, stream, why)) return fail("seed " + std::to_string(seed) + ": " + why);
    records += batch.records.size();
  }
  return pass("200 logs identical, " + std::to_string(records) + " records compared");
}

Outcome stream_batch_dataset() {
  const Dataset* d = dataset();
  if (!d) return skip("dataset unavailable");
  auto model = d->base.infuse(d->profile);
  CheckerConfig cfg;
  auto batch = check_log(d->split.test, model, cfg);
  auto stream = check_stream(replay_all(d->split.test), model, cfg);
  std::string why;
  if (!same_reports(batch, stream, why)) return fail(why);
  return pass(std::to_string(batch.records.size()) + " records identical");
}

// ---------------------------------------------------------------------------
// Reference implementations

Outcome miner_reference() {
  std::size_t logs = 0, keys = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    std::mt19937_64 rng(seed);
    EventLog log = tgt::random_log(rng, 100, 1 + seed % 12, {"A", "B", "C", "D"});
    auto want = tgt::oracle::naive_samples(log);
    auto got = collect_samples(log);
    for (auto& [k, xs] : want) std::sort(xs.begin(), xs.end());
    for (auto& [k, xs] : got) std::sort(xs.begin(), xs.end());
    if (got != want) return fail("seed " + std::to_string(seed) + ": sample sets differ");
    for (auto mode : {StddevMode::Population, StddevMode::Sample}) {
      auto p = mine_profile(log, {0, mode});
      if (p.entries.size() != want.size()) return fail("seed " + std::to_string(seed) + ": key count");
      for (const auto& [k, xs] : want) {
        auto ref = tgt::oracle::naive_stats(xs, mode == StddevMode::Sample);
        const auto& s = p.entries.at(k);
        double scale = std::max(1.0, std::abs(ref.mean));
        if (s.n != ref.n || s.min != ref.min || s.max != ref.max || std::abs(s.mean - ref.mean) > 1e-12 * scale ||
            std::abs(s.stddev - ref.stddev) > 1e-12 * std::max(1.0, ref.stddev))
          return fail("seed " + std::to_string(seed) + ": " + k.to_string());
        ++keys;
      }
    }
    ++logs;
  }
  return pass(std::to_string(logs) + " logs, " + std::to_string(keys) +
              " entries: identical samples, n/min/max exact, mean/stddev within 1e-12");
}

Outcome alignment_reference() {
  std::mt19937_64 rng(2024);
  const std::vector<std::string> all = {"A", "B", "C", "D", "E", "F"};
  const std::vector<std::string> acts = {"A", "B", "C", "D", "E", "F", "X"};
  constexpr std::size_t kRunCap = 2500;
  std::size_t cases = 0, prefixes = 0, too_large = 0;
  std::map<std::size_t, std::size_t> by_size;
  while (cases < 300) {
    std::vector<std::string> names(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(1 + rng() % 6));
    auto tree = tgt::random_tree(rng, names);
    auto runs = tgt::oracle::runs_of(tree);
    if (runs.size() > kRunCap) {
      ++too_large;
      continue;
    }
    std::set<std::string> tasks(names.begin(), names.end());
    ModelIndex idx(tree);
    std::vector<Event> ev;
    for (std::size_t k = 0, n = rng() % 14; k < n; ++k) {
      int kind = static_cast<int>(rng() % 10);
      ev.push_back(make_event("t", acts[rng() % acts.size()],
                              kind < 5 ? Lifecycle::start() : kind < 9 ? Lifecycle::complete() : Lifecycle::other("x"),
                              static_cast<double>(k)));
      if (tgt::oracle::instances_of(ev).size() > 8) {
        ev.pop_back();
        break;
      }
    }
    PrefixAligner aligner(idx);
    std::vector<Event> prefix;
    for (const auto& e : ev) {
      aligner.step(e);
      prefix.push_back(e);
      int want = tgt::oracle::oracle_cost(runs, tasks, prefix, false);
      if (aligner.prefix_cost() != want)
        return fail("case " + std::to_string(cases) + " prefix " + std::to_string(prefix.size()) + ": got " +
                    std::to_string(aligner.prefix_cost()) + " want " + std::to_string(want));
      ++prefixes;
    }
    int want = tgt::oracle::oracle_cost(runs, tasks, prefix, true);
    if (aligner.final_cost() != want)
      return fail("case " + std::to_string(cases) + " full: got " + std::to_string(aligner.final_cost()) + " want " +
                  std::to_string(want));
    ++by_size[names.size()];
    ++cases;
  }
  std::string sizes;
  for (auto [k, v] : by_size) sizes += (sizes.empty() ? "" : ", ") + std::to_string(k) + ":" + std::to_string(v);
  return pass(std::to_string(cases) + " models (tasks:count " + sizes + "), " + std::to_string(prefixes) +
              " prefixes exact; " + std::to_string(too_large) + " models with > " + std::to_string(kRunCap) +
              " runs not enumerated");
}

Outcome cost_reference() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double inf = std::numeric_limits<double>::infinity();
  double worst = 0.0;
  std::size_t zero_sigma = 0;
  for (int i = 0; i < 1000; ++i) {
    double mean = 500 * u(rng), x = 700 * u(rng), omega = 2 * u(rng), kappa = 4 * u(rng), phi = 2 * u(rng);
    double sd = 0.01 + 30 * u(rng);
    if (i % 10 == 0) {
      sd = 0.0;
      if (i % 20 == 0) x = mean;
      ++zero_sigma;
    }
    if (i % 50 == 1) omega = 0.0;
    bool inclusive = i % 2 == 1;
    TemporalProfile p;
    p.entries[DistanceKey::distance("P", "Q")] = {3, mean, sd, 0, 0};
    TimedProcessModel m(seq({task("P"), task("Q")}), {{"Q", {omega, kappa}}}, {}, {}, p);
    CheckerConfig cfg;
    cfg.phi = phi;
    cfg.inclusive_threshold = inclusive;
    double z = sd > 0 ? std::abs(x - mean) / sd : (x == mean ? 0.0 : inf);
    double cost = (inclusive ? z >= kappa : z > kappa) ? (omega * phi == 0 ? 0.0 : omega * phi * z) : 0.0;
    auto a = assess(x, DistanceKey::distance("P", "Q"), m, cfg);
    for (auto [got, want] : {std::pair{a.z, z}, std::pair{a.cost, cost}}) {
      if (std::isinf(want)) {
        if (got != want) return fail("tuple " + std::to_string(i) + ": expected inf");
        continue;
      }
      double err = want == 0.0 ? std::abs(got) : std::abs(got - want) / std::abs(want);
      worst = std::max(worst, err);
    }
  }
  std::string d = "1000 tuples (" + std::to_string(zero_sigma) + " with sigma 0), max relative error " + fmt(worst, 3);
  return worst <= 1e-12 ? pass(d) : fail(d);
}

// ---------------------------------------------------------------------------
// Bounded memory

Outcome bounded_memory() {
  constexpr std::size_t tsize = 50;
  TemporalProfile p;
  p.entries[DistanceKey::duration("a1")] = {100, 2.0, 0.5, 1.0, 3.0};
  p.entries[DistanceKey::distance("a1", "a2")] = {100, 1.0, 0.5, 0.0, 2.0};
  p.entries[DistanceKey::duration("a2")] = {100, 10.0, 1.0, 8.0, 12.0};
  TimedProcessModel model(seq({task("a1"), task("a2")}), {}, {}, {}, p);
  CheckerConfig cfg;
  cfg.tsize = tsize;
  cfg.tick = TickPolicy::periodic(1.0);

  std::vector<Event> stream;
  for (std::size_t i = 0; i < 10 * tsize; ++i) {
    std::string id = "case-" + std::to_string(i);
    double t0 = 5.0 * static_cast<double>(i);
    stream.push_back(S(id, "a1", t0));
    stream.push_back(C(id, "a1", t0 + 2));
    stream.push_back(S(id, "a2", t0 + 3));  // never completes
  }
  std::sort(stream.begin(), stream.end(), [](const Event& a, const Event& b) { return a.timestamp < b.timestamp; });

  std::size_t max_live = 0;
  std::vector<std::size_t> steady;
  StreamChecker c(model, cfg);
  for (const auto& e : stream) {
    c.push(e);
    max_live = std::max(max_live, c.live_traces());
    if (c.live_traces() == tsize) steady.push_back(c.state_bytes());
  }
  const auto& r = c.report();
  std::size_t evicted_with_penalty = 0, evicted = 0;
  std::set<std::string> unfinished;
  for (const auto& rec : r.records)
    if (rec.kind == DeviationRecord::Kind::UnfinishedEstimate) unfinished.insert(rec.trace_id);
  for (const auto& t : r.traces) {
    if (!t.evicted) continue;
    ++evicted;
    evicted_with_penalty += t.temporal_committed > 0 && unfinished.count(t.trace_id);
  }
  std::size_t half = steady.size() / 2;
  auto first = *std::max_element(steady.begin(), steady.begin() + static_cast<std::ptrdiff_t>(half));
  auto second = *std::max_element(steady.begin() + static_cast<std::ptrdiff_t>(half), steady.end());
  double growth = static_cast<double>(second) / static_cast<double>(first);
  std::string d = "max live " + std::to_string(max_live) + "/" + std::to_string(tsize) + ", evicted " +
                  std::to_string(evicted) + " (" + std::to_string(evicted_with_penalty) +
                  " with committed unfinished penalty), steady-state bytes " + std::to_string(first) + " -> " +
                  std::to_string(second);
  bool ok = max_live <= tsize && evicted == 9 * tsize && evicted_with_penalty == evicted && growth <= 1.05 &&
            r.counters.peak_live_traces == tsize;
  return ok ? pass(d) : fail(d);
}

// ---------------------------------------------------------------------------
// Inject then detect

Outcome inject_then_detect() {
  auto proc = tgt::default_synthetic();
  auto profile = mine_profile(proc.generate(200, 1, 1.0));
  auto model = proc.model().infuse(profile);
  EventLog clean = proc.generate(50, 2, 1.0);

  struct Expect {
    std::string trace;
    DistanceKey key;
    double z;
  };
  std::vector<Anomaly> plan;
  std::vector<Expect> expect;
  auto duration_of = [](const Trace& t, const std::string& a) {
    Timestamp s{};
    for (const auto& e : t.events) {
      if (e.activity != a) continue;
      if (e.lifecycle.is_start()) s = e.timestamp;
      else return to_seconds(e.timestamp - s);
    }
    return 0.0;
  };
  auto gap_before = [](const Trace& t, std::size_t k) {
    // Events alternate start/complete per task in a clean trace.
    return to_seconds(t.events[2 * k].timestamp - t.events[2 * k - 1].timestamp);
  };
  for (std::size_t i = 0; i < 5; ++i) {
    const Trace& t = clean.traces[i];
    const auto& act = proc.tasks[i % proc.tasks.size()];
    Anomaly a;
    a.selector = t.trace_id;
    a.activity = act;
    a.kind = Anomaly::Kind::StretchDuration;
    a.factor = 20.0;
    plan.push_back(a);
    auto key = DistanceKey::duration(act);
    const auto& st = profile.entries.at(key);
    expect.push_back({t.trace_id, key, std::abs(20.0 * duration_of(t, act) - st.mean) / st.stddev});
  }
  for (std::size_t i = 5; i < 10; ++i) {
    const Trace& t = clean.traces[i];
    std::size_t k = 1 + (i - 5) % (proc.tasks.size() - 1);
    auto key = DistanceKey::distance(proc.tasks[k - 1], proc.tasks[k]);
    const auto& st = profile.entries.at(key);
    Anomaly a;
    a.selector = t.trace_id;
    a.activity = proc.tasks[k];
    a.kind = Anomaly::Kind::DelayStart;
    a.offset_s = 10.0 * st.stddev;
    plan.push_back(a);
    expect.push_back({t.trace_id, key, std::abs(gap_before(t, k) + 10.0 * st.stddev - st.mean) / st.stddev});
  }

  auto report = check_log(inject_anomalies(clean, plan), model, {});
  std::size_t flagged = 0;
  double worst = 0.0;
  for (const auto& x : expect) {
    for (const auto& r : report.records) {
      if (r.trace_id != x.trace || r.key != x.key || r.kind == DeviationRecord::Kind::UnfinishedEstimate) continue;
      worst = std::max(worst, std::abs(r.z - x.z) / x.z);
      ++flagged;
      break;
    }
  }
  std::set<std::string> injected;
  for (const auto& x : expect) injected.insert(x.trace);
  std::size_t false_positives = 0;
  for (const auto& r : report.records) false_positives += !injected.count(r.trace_id);
  std::string d = std::to_string(flagged) + "/" + std::to_string(expect.size()) + " anomalies flagged, max z error " +
                  fmt(worst, 3) + ", false positives " + std::to_string(false_positives) + " in " +
                  std::to_string(clean.traces.size() - injected.size()) + " clean traces";
  return flagged == expect.size() && worst <= 1e-6 && false_positives == 0 ? pass(d) : fail(d);
}

struct Criterion {
  const char* id;
  const char* title;
  std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list = {
      {"c1", "worked example exactness", worked_example},
      {"c2", "alignment costs on the branching model", branching_alignment},
      {"c3", "BPIC-2012 profile reproduction", profile_reproduction},
      {"c4", "BPIC-2012 checking reproduction", checking_reproduction},
      {"c5a", "stream/batch equivalence, 200 synthetic logs", stream_batch_synthetic},
      {"c5b", "stream/batch equivalence, BPIC-2012", stream_batch_dataset},
      {"c6a", "miner vs quadratic reference", miner_reference},
      {"c6b", "aligner vs exhaustive enumeration", alignment_reference},
      {"c6c", "z-score and cost vs direct formula", cost_reference},
      {"c7", "bounded memory and eviction", bounded_memory},
      {"c8", "inject then detect", inject_then_detect},
  };
  return list;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> wanted(argv + 1, argv + argc);
  std::size_t ran = 0, failed = 0, skipped = 0;
  for (const auto& c : criteria()) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end()) continue;
    Outcome o;
    double secs = seconds_of([&] {
      try {
        o = c.run();
      } catch (const std::exception& e) {
        o = fail(std::string("exception: ") + e.what());
      }
    });
    const char* tag = o.status == Outcome::Pass ? "PASS" : o.status == Outcome::Fail ? "FAIL" : "SKIP";
    std::cout << tag << "  " << std::left << std::setw(4) << c.id << " " << c.title << ": " << o.detail << " ["
              << fmt(secs, 3) << " s]" << std::endl;
    ++ran;
    failed += o.status == Outcome::Fail;
    skipped += o.status == Outcome::Skip;
  }
  if (ran == 0) {
    std::cerr << "unknown criterion; choose from:";
    for (const auto& c : criteria()) std::cerr << ' ' << c.id;
    std::cerr << '\n';
    return 2;
  }
  if (failed) return 1;
  return skipped == ran ? 77 : 0;
}
