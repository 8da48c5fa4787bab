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

// tempograph command-line tool: mine, check, replay, report, experiment.

#include <atomic>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <thread>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "tempograph.hpp"

namespace tg = tempograph;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBudget = 1;
constexpr int kExitError = 2;
constexpr int kExitUnavailable = 77;

std::atomic<bool> g_interrupted{false};

void on_signal(int) { g_interrupted = true; }

// ---------------------------------------------------------------------------
// Run configuration: JSON file first, explicit flags on top.

struct RunConfig {
  std::string config_file;
  std::string log_level;

  std::string log;
  std::string model;
  std::string profile;
  std::optional<std::size_t> take_traces;
  std::optional<std::size_t> skip_traces;
  std::optional<double> split;

  tg::MinerConfig miner{0, tg::StddevMode::Population};
  std::string stddev_mode = "population";

  tg::CheckerConfig checker;
  std::string tick = "per-event";
  double tick_interval = 60.0;
  std::string clock = "stream";
  std::optional<double> omega;
  std::optional<double> kappa;

  std::string stream;
  std::string out;
  std::string out_model;
  std::string report;
  std::string records;
  std::string csv;
  std::optional<std::size_t> budget;
  std::optional<std::size_t> max_events;
  std::optional<double> idle_exit;
  std::string now;
};

template <typename T>
void read_field(const nlohmann::json& j, const char* key, T& dst) {
  if (auto it = j.find(key); it != j.end() && !it->is_null()) dst = it->get<T>();
}
template <typename T>
void read_field(const nlohmann::json& j, const char* key, std::optional<T>& dst) {
  if (auto it = j.find(key); it != j.end() && !it->is_null()) dst = it->get<T>();
}

void apply_config_file(RunConfig& c) {
  if (c.config_file.empty()) return;
  std::ifstream in(c.config_file);
  if (!in) throw tg::Error("cannot open config file " + c.config_file);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw tg::Error(c.config_file + ": " + e.what());
  }
  read_field(j, "log_level", c.log_level);
  read_field(j, "log", c.log);
  read_field(j, "model", c.model);
  read_field(j, "profile", c.profile);
  read_field(j, "take_traces", c.take_traces);
  read_field(j, "skip_traces", c.skip_traces);
  read_field(j, "split", c.split);
  if (auto m = j.find("miner"); m != j.end()) {
    read_field(*m, "min_support", c.miner.min_support);
    read_field(*m, "stddev_mode", c.stddev_mode);
  }
  if (auto k = j.find("checker"); k != j.end()) {
    read_field(*k, "tsize", c.checker.tsize);
    read_field(*k, "phi", c.checker.phi);
    read_field(*k, "inclusive_threshold", c.checker.inclusive_threshold);
    read_field(*k, "tick", c.tick);
    read_field(*k, "tick_interval", c.tick_interval);
    read_field(*k, "clock", c.clock);
    read_field(*k, "prefix_cap", c.checker.prefix_cap);
    read_field(*k, "max_frontier", c.checker.max_frontier);
    read_field(*k, "omega", c.omega);
    read_field(*k, "kappa", c.kappa);
    read_field(*k, "budget", c.budget);
  }
  if (auto o = j.find("output"); o != j.end()) {
    read_field(*o, "profile", c.out);
    read_field(*o, "model", c.out_model);
    read_field(*o, "report", c.report);
    read_field(*o, "records", c.records);
    read_field(*o, "csv", c.csv);
  }
}

// Options are registered against scratch storage and copied over the file
// values only when given on the command line.
struct Overrides {
  std::vector<std::function<void(RunConfig&)>> apply;
};

template <typename T, typename Setter>
CLI::Option* flag(CLI::App* app, Overrides& ov, const std::string& name, const std::string& help, Setter set) {
  auto storage = std::make_shared<T>();
  CLI::Option* opt = app->add_option(name, *storage, help);
  ov.apply.push_back([opt, storage, set](RunConfig& c) {
    if (opt->count() > 0) set(c, *storage);
  });
  return opt;
}

CLI::Option* bool_flag(CLI::App* app, Overrides& ov, const std::string& name, const std::string& help,
                       std::function<void(RunConfig&)> set) {
  CLI::Option* opt = app->add_flag(name, help);
  ov.apply.push_back([opt, set](RunConfig& c) {
    if (opt->count() > 0) set(c);
  });
  return opt;
}

void add_common(CLI::App* app, Overrides& ov) {
  flag<std::string>(app, ov, "--config", "JSON run configuration; flags override its values",
                    [](RunConfig& c, const std::string& v) { c.config_file = v; });
  flag<std::string>(app, ov, "--log-level", "trace|debug|info|warn|error|off (env TEMPOGRAPH_LOG_LEVEL)",
                    [](RunConfig& c, const std::string& v) { c.log_level = v; });
}

void add_log_selection(CLI::App* app, Overrides& ov) {
  flag<std::string>(app, ov, "--log", "event log: .xes, .xes.gz or line-protocol .jsonl",
                    [](RunConfig& c, const std::string& v) { c.log = v; });
  flag<std::size_t>(app, ov, "--take-traces", "use only the first N traces",
                    [](RunConfig& c, std::size_t v) { c.take_traces = v; });
  flag<std::size_t>(app, ov, "--skip-traces", "drop the first N traces",
                    [](RunConfig& c, std::size_t v) { c.skip_traces = v; });
}

void add_checker_options(CLI::App* app, Overrides& ov) {
  flag<std::size_t>(app, ov, "--tsize", "TSIZE: maximum number of process instances held at once (default 100000)",
                    [](RunConfig& c, std::size_t v) { c.checker.tsize = v; });
  flag<double>(app, ov, "--phi", "φ: global cost modifier applied to every temporal deviation (default 1)",
               [](RunConfig& c, double v) { c.checker.phi = v; });
  flag<double>(app, ov, "--omega", "ω: default deviation weight for tasks without an annotation (default 1)",
               [](RunConfig& c, double v) { c.omega = v; });
  flag<double>(app, ov, "--kappa", "κ: default z-score threshold for tasks without an annotation (default 3)",
               [](RunConfig& c, double v) { c.kappa = v; });
  bool_flag(app, ov, "--inclusive", "count a deviation at z >= κ instead of z > κ",
            [](RunConfig& c) { c.checker.inclusive_threshold = true; });
  flag<std::string>(app, ov, "--tick", "when running tasks are re-evaluated: per-event|periodic",
                    [](RunConfig& c, const std::string& v) { c.tick = v; })
      ->check(CLI::IsMember({"per-event", "periodic"}));
  flag<double>(app, ov, "--tick-interval", "seconds between periodic ticks",
               [](RunConfig& c, double v) { c.tick_interval = v; });
  flag<std::string>(app, ov, "--clock", "source of 'now' for running tasks: stream (max event time) | wall",
                    [](RunConfig& c, const std::string& v) { c.clock = v; })
      ->check(CLI::IsMember({"stream", "wall"}));
  flag<std::size_t>(app, ov, "--prefix-cap", "raw events retained per instance (default 10000)",
                    [](RunConfig& c, std::size_t v) { c.checker.prefix_cap = v; });
  flag<std::size_t>(app, ov, "--max-frontier", "alignment states kept per instance (default 65536)",
                    [](RunConfig& c, std::size_t v) { c.checker.max_frontier = v; });
}

void setup_logging(const RunConfig& c) {
  if (!spdlog::get("tempograph")) {
    spdlog::set_default_logger(spdlog::stderr_color_mt("tempograph"));
    spdlog::set_pattern("[%l] %v");
  }
  std::string level = c.log_level;
  if (level.empty())
    if (const char* env = std::getenv("TEMPOGRAPH_LOG_LEVEL")) level = env;
  spdlog::set_level(level.empty() ? spdlog::level::info : spdlog::level::from_str(level));
}

tg::EventLog load_selected_log(const RunConfig& c) {
  if (c.log.empty()) throw tg::Error("no --log given");
  std::vector<std::string> warnings;
  tg::EventLog log = tg::load_log_file(c.log, &warnings);
  for (const auto& w : warnings) spdlog::warn("{}: {}", c.log, w);
  spdlog::info("read {} traces, {} events from {}", log.traces.size(), log.event_count(), c.log);
  std::size_t first = c.skip_traces.value_or(0);
  std::size_t last = log.traces.size();
  if (c.take_traces) last = std::min(last, first + *c.take_traces);
  if (first != 0 || last != log.traces.size()) {
    log = log.slice(first, last);
    spdlog::info("selected traces [{}, {}): {} traces, {} events", first, last, log.traces.size(),
                 log.event_count());
  }
  return log;
}

tg::TimedProcessModel load_checked_model(const RunConfig& c) {
  if (c.model.empty()) throw tg::Error("no --model given");
  tg::TimedProcessModel m = tg::load_model_file(c.model);
  if (!c.profile.empty()) m = m.infuse(tg::load_profile_file(c.profile));
  if (c.omega || c.kappa) {
    tg::TaskAnnotation d = m.defaults();
    if (c.omega) d.omega = *c.omega;
    if (c.kappa) d.kappa = *c.kappa;
    m = tg::TimedProcessModel(m.root(), m.annotations(), m.overrides(), d, m.profile());
  }
  if (m.profile().empty()) spdlog::warn("model has no temporal profile: temporal costs will be 0");
  return m;
}

tg::CheckerConfig checker_config(const RunConfig& c) {
  tg::CheckerConfig k = c.checker;
  k.tick = c.tick == "periodic" ? tg::TickPolicy::periodic(c.tick_interval) : tg::TickPolicy::per_event();
  k.clock = c.clock == "wall" ? tg::Clock::Wall : tg::Clock::StreamTime;
  k.validate();
  return k;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw tg::Error("cannot write " + path);
  out << content;
  if (!out) throw tg::Error("write failed for " + path);
}

// ---------------------------------------------------------------------------
// mine

int cmd_mine(RunConfig c) {
  tg::EventLog log = load_selected_log(c);
  if (c.split) log = tg::split_log(log, *c.split).train;
  if (c.stddev_mode == "sample") c.miner.stddev_mode = tg::StddevMode::Sample;
  else if (c.stddev_mode != "population") throw tg::Error("stddev mode must be population or sample");

  tg::MiningDiagnostics diag;
  tg::TemporalProfile profile = tg::mine_profile(log, c.miner, &diag);
  spdlog::info("mined from {} traces: {} duration samples, {} distance samples, {} distance keys below support",
               log.traces.size(), diag.duration_samples, diag.distance_samples, diag.filtered_distance_keys);
  if (diag.repeated_starts) spdlog::warn("{} repeated starts (last one wins)", diag.repeated_starts);
  if (diag.negative_samples) spdlog::warn("{} negative samples: log is not time-ordered", diag.negative_samples);

  std::cout << tg::render_table(tg::profile_rows(profile, tg::DistanceKey::Kind::Duration), "Task durations (s)")
            << "\n"
            << tg::render_table(tg::profile_rows(profile, tg::DistanceKey::Kind::Distance),
                                "Temporal distances (s)");

  if (!c.out.empty()) write_file(c.out, tg::save_profile(profile));
  if (!c.out_model.empty()) {
    tg::TimedProcessModel base = c.model.empty() ? tg::flat_model(log) : tg::load_model_file(c.model);
    write_file(c.out_model, tg::save_model(base.infuse(profile)));
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// check

void write_outputs(const RunConfig& c, const tg::CostReport& report) {
  if (!c.report.empty()) write_file(c.report, tg::report_to_json(report).dump(2) + "\n");
  if (!c.csv.empty()) {
    std::ofstream out(c.csv);
    if (!out) throw tg::Error("cannot write " + c.csv);
    tg::write_records_csv(out, report.records);
  }
}

std::size_t total_deviations(const tg::CostReport& r) { return r.records.size(); }

void print_summary(std::ostream& os, const tg::CostReport& r) {
  const auto& k = r.counters;
  double structural = 0, temporal = 0;
  for (const auto& t : r.traces) {
    structural += t.structural;
    temporal += t.temporal();
  }
  os << "instances " << r.traces.size() << ", events " << k.events << "\n"
     << "durations checked " << k.durations_checked << " (deviating " << k.duration_deviations << ")\n"
     << "distances checked " << k.distances_checked << " (deviating " << k.distance_deviations << ")\n"
     << "structural cost " << structural << ", temporal cost " << temporal << ", combined "
     << structural + temporal << "\n"
     << "deviation records " << r.records.size() << ", evictions " << k.evictions << "\n";
}

int budget_status(const RunConfig& c, const tg::CostReport& r) {
  std::size_t n = total_deviations(r);
  if (c.budget && n > *c.budget) {
    spdlog::warn("{} deviations exceed the budget of {}", n, *c.budget);
    return kExitBudget;
  }
  return kExitOk;
}

int check_offline(const RunConfig& c, const tg::TimedProcessModel& model, const tg::CheckerConfig& cfg) {
  tg::EventLog log = load_selected_log(c);
  if (c.split) log = tg::split_log(log, *c.split).test;
  std::optional<tg::Timestamp> now;
  if (!c.now.empty()) {
    now = tg::parse_timestamp(c.now);
    if (!now) throw tg::Error("--now: not an RFC 3339 timestamp: " + c.now);
  }
  tg::CostReport report = tg::check_log(log, model, cfg, now);
  if (!c.records.empty()) {
    std::ofstream out(c.records);
    if (!out) throw tg::Error("cannot write " + c.records);
    for (const auto& r : report.records) out << tg::record_line(r) << "\n";
  }
  write_outputs(c, report);
  print_summary(std::cout, report);
  return budget_status(c, report);
}

int check_stream(const RunConfig& c, const tg::TimedProcessModel& model, const tg::CheckerConfig& cfg) {
  std::unique_ptr<std::ofstream> records_file;
  std::ostream* records = &std::cout;
  if (!c.records.empty() && c.records != "-") {
    records_file = std::make_unique<std::ofstream>(c.records);
    if (!*records_file) throw tg::Error("cannot write " + c.records);
    records = records_file.get();
  }

  tg::CheckerCallbacks cb;
  cb.on_record = [records](const tg::DeviationRecord& r) { *records << tg::record_line(r) << std::endl; };
  cb.on_evict = [](const tg::TraceResult& t) {
    spdlog::info("evicted {}: structural {}, temporal {}", t.trace_id, t.structural, t.temporal());
  };
  tg::StreamChecker checker(model, cfg, cb);

  tg::Channel<tg::Event> channel(4096);
  auto warn = [](const std::string& m) { spdlog::warn("{}", m); };
  std::unique_ptr<tg::net::TcpEventSource> tcp;
  std::thread stdin_reader;
  if (c.stream == "stdin" || c.stream == "-") {
    stdin_reader = std::thread([&channel, warn] {
      tg::LineReader reader(std::cin, warn);
      while (auto e = reader.next())
        if (!channel.push(std::move(*e))) break;
      channel.close();
    });
  } else {
    tg::net::Endpoint ep = tg::net::parse_endpoint(c.stream);
    tcp = std::make_unique<tg::net::TcpEventSource>(ep, channel, warn);
    spdlog::info("listening on {}:{}", ep.host, tcp->port());
  }

  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);

  std::size_t seen = 0;
  auto last_event = std::chrono::steady_clock::now();
  auto next_wall_tick = std::chrono::steady_clock::now();
  while (!g_interrupted) {
    bool timed_out = false;
    auto e = channel.pop_for(std::chrono::milliseconds(100), &timed_out);
    auto now = std::chrono::steady_clock::now();
    if (e) {
      checker.push(*e);
      last_event = now;
      if (c.max_events && ++seen >= *c.max_events) break;
    } else if (!timed_out) {
      break;  // producer finished
    }
    if (cfg.clock == tg::Clock::Wall && cfg.tick.kind == tg::TickPolicy::Kind::Periodic &&
        now >= next_wall_tick) {
      checker.tick(tg::detail::wall_now());
      next_wall_tick = now + std::chrono::microseconds(tg::from_seconds(cfg.tick.interval_s));
    }
    if (c.idle_exit && now - last_event > std::chrono::duration<double>(*c.idle_exit)) break;
  }
  if (tcp) tcp->stop();
  channel.close();
  if (stdin_reader.joinable()) {
    if (g_interrupted) stdin_reader.detach();
    else stdin_reader.join();
  }

  tg::CostReport report = checker.finish();
  write_outputs(c, report);
  print_summary(std::cerr, report);
  return budget_status(c, report);
}

int cmd_check(const RunConfig& c) {
  tg::TimedProcessModel model = load_checked_model(c);
  tg::CheckerConfig cfg = checker_config(c);
  if (!c.stream.empty()) {
    if (!c.log.empty()) throw tg::Error("--log and --stream are mutually exclusive");
    return check_stream(c, model, cfg);
  }
  return check_offline(c, model, cfg);
}

// ---------------------------------------------------------------------------
// replay

struct ReplayArgs {
  double speed = 0.0;
  double jitter = 0.0;
  std::uint64_t seed = 0;
  std::string sink = "stdout";
};

int cmd_replay(const RunConfig& c, const ReplayArgs& a) {
  tg::EventLog log = load_selected_log(c);
  if (c.split) log = tg::split_log(log, *c.split).test;
  tg::Replayer replayer(log, tg::ReplayOptions{a.speed, a.jitter, a.seed});

  std::optional<tg::net::Socket> sock;
  if (a.sink != "stdout" && a.sink != "-") sock = tg::net::connect_tcp(tg::net::parse_endpoint(a.sink));

  std::size_t n = 0;
  while (auto e = replayer.next()) {
    std::string line = tg::encode_line(*e) + "\n";
    if (sock) sock->write_all(line);
    else std::cout << line;
    ++n;
  }
  std::cout.flush();
  spdlog::info("replayed {} events", n);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// report

int cmd_report(const RunConfig& c, const std::string& input, std::size_t top) {
  std::ifstream in(input);
  if (!in) throw tg::Error("cannot open " + input);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw tg::Error(input + ": " + e.what());
  }

  if (!j.contains("counters")) {
    // A profile file.
    tg::TemporalProfile p = tg::profile_from_json(j);
    std::cout << tg::render_table(tg::profile_rows(p, tg::DistanceKey::Kind::Duration), "Task durations (s)")
              << "\n"
              << tg::render_table(tg::profile_rows(p, tg::DistanceKey::Kind::Distance), "Temporal distances (s)");
    return kExitOk;
  }

  const auto& k = j.at("counters");
  std::cout << "events " << k.value("events", 0) << "\n"
            << "durations checked " << k.value("durations_checked", 0) << " (deviating "
            << k.value("duration_deviations", 0) << ")\n"
            << "distances checked " << k.value("distances_checked", 0) << " (deviating "
            << k.value("distance_deviations", 0) << ")\n"
            << "evictions " << k.value("evictions", 0) << ", resurrections " << k.value("resurrections", 0)
            << ", unknown activity events " << k.value("unknown_activity_events", 0) << "\n";

  std::vector<nlohmann::json> traces(j.at("traces").begin(), j.at("traces").end());
  auto combined = [](const nlohmann::json& t) {
    const auto& v = t.at("combined");
    return v.is_string() ? std::numeric_limits<double>::infinity() : v.get<double>();
  };
  std::stable_sort(traces.begin(), traces.end(),
                   [&](const nlohmann::json& a, const nlohmann::json& b) { return combined(a) > combined(b); });
  std::cout << "\ntop " << std::min(top, traces.size()) << " instances by combined cost\n";
  for (std::size_t i = 0; i < traces.size() && i < top; ++i) {
    const auto& t = traces[i];
    std::cout << "  " << t.at("trace").get<std::string>() << "  structural " << t.at("structural")
              << "  temporal " << t.at("temporal") << "  combined " << t.at("combined") << "\n";
  }

  if (!c.csv.empty()) {
    std::ofstream out(c.csv);
    if (!out) throw tg::Error("cannot write " + c.csv);
    out << "trace,kind,key,observed_s,z,cost,at\n";
    for (const auto& r : j.at("records")) {
      auto num = [](const nlohmann::json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
      out << tg::csv_escape(r.at("trace").get<std::string>()) << ',' << r.at("kind").get<std::string>() << ','
          << tg::csv_escape(r.at("key").get<std::string>()) << ',' << num(r.at("observed_s")) << ','
          << num(r.at("z")) << ',' << num(r.at("cost")) << ',' << r.at("at").get<std::string>() << '\n';
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// experiment

int cmd_experiment(const std::string& spec_path, const std::string& out, bool quiet) {
  std::ifstream in(spec_path);
  if (!in) throw tg::Error("cannot open " + spec_path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw tg::Error(spec_path + ": " + e.what());
  }
  if (std::string var = j.value("dataset_env", std::string()); !var.empty())
    if (const char* env = std::getenv(var.c_str()); env && *env) j["dataset"] = env;
  std::string base = std::filesystem::path(spec_path).parent_path().string();
  tg::ExperimentSpec spec = tg::experiment_from_json(j, base);
  tg::ExperimentResult r = tg::run_experiment(spec);
  if (!out.empty()) write_file(out, r.report.dump(2) + "\n");
  if (r.status == tg::ExperimentResult::Status::DatasetUnavailable) {
    std::cout << r.message << "\n";
    return kExitUnavailable;
  }
  if (!quiet) std::cout << r.text;
  bool ok = r.profile_pass.value_or(true) && r.checks_pass.value_or(true);
  return ok ? kExitOk : kExitBudget;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tempograph: temporal profiles and streaming conformance checking for process event logs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "tempograph 1.0.0");
  app.footer(
      "Parameters:\n"
      "  κ (kappa)  mine: minimum support of a temporal distance (--min-support);\n"
      "             check: z-score threshold above which an observation deviates (--kappa, per task in the model)\n"
      "  ω (omega)  weight of a deviation (--omega default, per task or per distance in the model)\n"
      "  φ (phi)    global modifier of every temporal deviation cost (--phi)\n"
      "  TSIZE      maximum number of process instances the checker holds (--tsize)\n"
      "Exit status: 0 ok, 1 deviation budget exceeded or assertions failed, 2 error, 77 dataset unavailable.");

  RunConfig cfg;
  Overrides ov;

  auto* mine = app.add_subcommand("mine", "mine a temporal profile from an event log");
  add_common(mine, ov);
  add_log_selection(mine, ov);
  flag<std::string>(mine, ov, "--model", "model file; the output model gets the profile embedded",
                    [](RunConfig& c, const std::string& v) { c.model = v; });
  flag<std::size_t>(mine, ov, "--min-support",
                    "κ: minimum number of samples for a temporal distance to be kept (durations are always kept)",
                    [](RunConfig& c, std::size_t v) { c.miner.min_support = v; });
  flag<std::string>(mine, ov, "--stddev-mode", "population|sample",
                    [](RunConfig& c, const std::string& v) { c.stddev_mode = v; })
      ->check(CLI::IsMember({"population", "sample"}));
  flag<double>(mine, ov, "--split", "train on the first ceil(f*N) traces", [](RunConfig& c, double v) { c.split = v; });
  flag<std::string>(mine, ov, "--out,-o", "profile output file",
                    [](RunConfig& c, const std::string& v) { c.out = v; });
  flag<std::string>(mine, ov, "--out-model", "model output file with the profile embedded",
                    [](RunConfig& c, const std::string& v) { c.out_model = v; });

  auto* check = app.add_subcommand("check", "check a log or an event stream against a time-infused model");
  add_common(check, ov);
  add_log_selection(check, ov);
  flag<std::string>(check, ov, "--model", "model file (may embed a profile)",
                    [](RunConfig& c, const std::string& v) { c.model = v; });
  flag<std::string>(check, ov, "--profile", "profile file, replaces any embedded profile",
                    [](RunConfig& c, const std::string& v) { c.profile = v; });
  flag<double>(check, ov, "--split", "check only the traces after the first ceil(f*N)",
               [](RunConfig& c, double v) { c.split = v; });
  flag<std::string>(check, ov, "--stream", "stream source: stdin or tcp:HOST:PORT",
                    [](RunConfig& c, const std::string& v) { c.stream = v; });
  add_checker_options(check, ov);
  flag<std::string>(check, ov, "--report", "JSON report file",
                    [](RunConfig& c, const std::string& v) { c.report = v; });
  flag<std::string>(check, ov, "--records", "deviation records, one JSON object per line",
                    [](RunConfig& c, const std::string& v) { c.records = v; });
  flag<std::string>(check, ov, "--csv", "deviation records as CSV",
                    [](RunConfig& c, const std::string& v) { c.csv = v; });
  flag<std::size_t>(check, ov, "--budget", "exit with status 1 when more deviations than this are found",
                    [](RunConfig& c, std::size_t v) { c.budget = v; });
  flag<std::string>(check, ov, "--now", "offline mode: evaluate running tasks once more at this instant",
                    [](RunConfig& c, const std::string& v) { c.now = v; });
  flag<std::size_t>(check, ov, "--max-events", "stream mode: stop after N events",
                    [](RunConfig& c, std::size_t v) { c.max_events = v; });
  flag<double>(check, ov, "--idle-exit", "stream mode: stop after this many seconds without events",
               [](RunConfig& c, double v) { c.idle_exit = v; });

  ReplayArgs replay_args;
  auto* replay = app.add_subcommand("replay", "replay a log as a line-protocol event stream");
  add_common(replay, ov);
  add_log_selection(replay, ov);
  flag<double>(replay, ov, "--split", "replay only the traces after the first ceil(f*N)",
               [](RunConfig& c, double v) { c.split = v; });
  replay->add_option("--speed", replay_args.speed, "0 = as fast as possible, else time gaps divided by this")
      ->check(CLI::NonNegativeNumber);
  replay->add_option("--jitter", replay_args.jitter, "random extra pause per event, up to this many seconds")
      ->check(CLI::NonNegativeNumber);
  replay->add_option("--seed", replay_args.seed, "seed for the jitter");
  replay->add_option("--sink", replay_args.sink, "stdout or tcp:HOST:PORT");

  std::string report_input;
  std::size_t report_top = 10;
  auto* report = app.add_subcommand("report", "summarise a report or profile file");
  add_common(report, ov);
  report->add_option("input", report_input, "report or profile JSON")->required();
  report->add_option("--top", report_top, "instances to list");
  flag<std::string>(report, ov, "--csv", "export deviation records as CSV",
                    [](RunConfig& c, const std::string& v) { c.csv = v; });

  std::string spec_path, exp_out;
  bool exp_quiet = false;
  auto* experiment = app.add_subcommand("experiment", "run an experiment spec (split, mine, check, assert)");
  add_common(experiment, ov);
  experiment->add_option("spec", spec_path, "experiment spec JSON")->required();
  experiment->add_option("--out,-o", exp_out, "JSON experiment report");
  experiment->add_flag("--quiet,-q", exp_quiet, "do not print tables");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    // The config file path itself may come from a flag, so apply flags twice.
    for (auto& f : ov.apply) f(cfg);
    setup_logging(cfg);
    apply_config_file(cfg);
    for (auto& f : ov.apply) f(cfg);
    setup_logging(cfg);

    if (*mine) return cmd_mine(cfg);
    if (*check) return cmd_check(cfg);
    if (*replay) return cmd_replay(cfg, replay_args);
    if (*report) return cmd_report(cfg, report_input, report_top);
    if (*experiment) return cmd_experiment(spec_path, exp_out, exp_quiet);
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitError;
  }
  return kExitError;
}
