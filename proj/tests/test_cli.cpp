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

// End-to-end runs of the command-line tool.

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <thread>

#include "support.hpp"

using namespace tempograph;

namespace {

struct Run {
  int status;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string(TEMPOGRAPH_CLI) + " " + args;
  Run r{-1, {}};
  FILE* p = ::popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int st = ::pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string data(const std::string& name) { return std::string(TEMPOGRAPH_DATA_DIR) + "/" + name; }

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    proc_ = tgt::default_synthetic();
    prefix_ = std::string("cli_") + ::testing::UnitTest::GetInstance()->current_test_info()->name() + "_";
    log_path_ = tmp("log.jsonl");
    std::ofstream out(log_path_);
    auto log = proc_.generate(60, 12, 2.5);
    write_log_lines(out, log);
  }
  std::string tmp(const std::string& name) const { return tgt::temp_path(prefix_ + name); }

  tgt::SyntheticProcess proc_;
  std::string prefix_;
  std::string log_path_;
};

TEST_F(Cli, MineWritesTheSameProfileAsTheLibrary) {
  auto prof = tmp("profile.json");
  auto model = tmp("model.json");
  auto r = run("mine --log " + log_path_ + " --min-support 0 --out " + prof + " --out-model " + model);
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("Task durations"), std::string::npos);
  EXPECT_EQ(load_profile_file(prof), mine_profile(load_log_file(log_path_)));
  EXPECT_EQ(load_model_file(model).profile(), load_profile_file(prof));
}

TEST_F(Cli, WorkedExampleThroughTheTool) {
  auto r = run("check --log " + data("example.jsonl") + " --model " + data("example.model.json") +
               " --now 2020-01-01T00:00:36Z");
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("structural cost 1, temporal cost 28"), std::string::npos) << r.out;
  r = run("check --log " + data("example.jsonl") + " --model " + data("example.model.json") +
          " --now 2020-01-01T00:00:36Z --inclusive");
  EXPECT_NE(r.out.find("temporal cost 30"), std::string::npos) << r.out;
}

TEST_F(Cli, BudgetControlsExitStatus) {
  auto prof = tmp("budget_profile.json");
  {
    std::ofstream out(tmp("train.jsonl"));
    write_log_lines(out, proc_.generate(100, 1));
  }
  ASSERT_EQ(run("mine --log " + tmp("train.jsonl") + " --out " + prof + " --min-support 0").status, 0);
  auto model = tmp("flat.json");
  tgt::write_text(model, save_model(proc_.model()));
  std::string base = "check --log " + log_path_ + " --model " + model + " --profile " + prof;
  EXPECT_EQ(run(base + " --budget 0").status, 1);
  EXPECT_EQ(run(base + " --budget 1000000").status, 0);
}

TEST_F(Cli, ReplayPipedIntoStreamMatchesOffline) {
  auto model = tmp("model2.json");
  tgt::write_text(model, save_model(proc_.model().infuse(mine_profile(proc_.generate(100, 1)))));
  auto offline = tmp("offline.json"), online = tmp("online.json");
  ASSERT_EQ(run("check --log " + log_path_ + " --model " + model + " --report " + offline).status, 0);
  auto r = run("replay --log " + log_path_ + " | " + TEMPOGRAPH_CLI + " check --stream stdin --model " + model +
               " --report " + online + " --log-level off");
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_EQ(tgt::read_text(offline), tgt::read_text(online));
  auto lines = std::count(r.out.begin(), r.out.end(), '\n');
  auto j = nlohmann::json::parse(tgt::read_text(online));
  EXPECT_EQ(static_cast<std::size_t>(lines), j["records"].size());
}

TEST_F(Cli, ReportsAreByteIdentical) {
  auto model = tmp("model3.json");
  tgt::write_text(model, save_model(proc_.model().infuse(mine_profile(proc_.generate(50, 4)))));
  auto a = tmp("a.json"), b = tmp("b.json");
  auto ca = tmp("a.csv"), cb = tmp("b.csv");
  run("check --log " + log_path_ + " --model " + model + " --report " + a + " --csv " + ca);
  run("check --log " + log_path_ + " --model " + model + " --report " + b + " --csv " + cb);
  EXPECT_FALSE(tgt::read_text(a).empty());
  EXPECT_EQ(tgt::read_text(a), tgt::read_text(b));
  EXPECT_EQ(tgt::read_text(ca), tgt::read_text(cb));

  auto summary = run("report " + a + " --top 3");
  EXPECT_EQ(summary.status, 0);
  EXPECT_NE(summary.out.find("top 3 instances"), std::string::npos) << summary.out;
  auto exported = tmp("export.csv");
  run("report " + a + " --csv " + exported);
  EXPECT_EQ(tgt::read_text(exported), tgt::read_text(ca));
}

TEST_F(Cli, HelpDocumentsParameters) {
  auto r = run("--help");
  EXPECT_EQ(r.status, 0);
  for (const char* s : {"κ", "ω", "φ", "TSIZE", "mine", "check", "replay", "report"})
    EXPECT_NE(r.out.find(s), std::string::npos) << s;
  EXPECT_NE(run("check --help").out.find("--tsize"), std::string::npos);
}

TEST_F(Cli, ErrorsExitWithTwo) {
  EXPECT_EQ(run("check --log /nonexistent.jsonl --model " + data("example.model.json") + " 2>/dev/null").status, 2);
  EXPECT_EQ(run("frobnicate 2>/dev/null").status, 2);
  EXPECT_EQ(run("check --log " + log_path_ + " --model " + data("example.model.json") +
                " --tsize 0 2>/dev/null").status, 2);
}

TEST_F(Cli, ExperimentWithoutDatasetExits77) {
  auto spec = tmp("spec.json");
  tgt::write_text(spec, R"({"dataset": "/nonexistent/bpic.xes.gz"})");
  auto r = run("experiment " + spec);
  EXPECT_EQ(r.status, 77);
  EXPECT_NE(r.out.find("dataset unavailable"), std::string::npos);
}

TEST_F(Cli, TcpStreamWithIdleExit) {
  std::uint16_t port;
  {
    net::Listener l(net::parse_endpoint("tcp:127.0.0.1:0"));
    port = l.port();
  }
  auto model = tmp("model4.json");
  tgt::write_text(model, save_model(proc_.model().infuse(mine_profile(proc_.generate(100, 1)))));
  auto online = tmp("tcp.json"), offline = tmp("tcp_offline.json");
  std::string ep = "tcp:127.0.0.1:" + std::to_string(port);
  ::Run server;
  std::thread t([&] {
    server = run("check --stream " + ep + " --idle-exit 1.5 --model " + model + " --report " + online +
                 " --log-level off");
  });
  int replay_status = -1;
  for (int attempt = 0; attempt < 50 && replay_status != 0; ++attempt) {
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
    replay_status = run("replay --log " + log_path_ + " --sink " + ep + " --log-level off 2>/dev/null").status;
  }
  t.join();
  ASSERT_EQ(replay_status, 0);
  ASSERT_EQ(server.status, 0) << server.out;
  ASSERT_EQ(run("check --log " + log_path_ + " --model " + model + " --report " + offline).status, 0);
  EXPECT_EQ(tgt::read_text(online), tgt::read_text(offline));
}

}  // namespace
