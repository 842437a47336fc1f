/* Copyright 2026 The Muzzleprint Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <gtest/gtest.h>

#include <csignal>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "muzzleprint/audio.hpp"
#include "muzzleprint/error.hpp"
#include "muzzleprint/nn/checkpoint.hpp"
#include "muzzleprint/pipeline.hpp"
#include "synth.hpp"

namespace muzzleprint::pipeline {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome cli(std::vector<std::string> args) {
  args.insert(args.begin(), "muzzleprint");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

// Exactly one line of the form "error: <code>: ...".
void expect_error_line(const Outcome& o, const std::string& code) {
  EXPECT_NE(o.code, 0);
  EXPECT_EQ(o.err.rfind("error: " + code + ": ", 0), 0u) << o.err;
  EXPECT_EQ(std::count(o.err.begin(), o.err.end(), '\n'), 1) << o.err;
}

// Three burst classes mapped onto one pistol, one rifle and one shotgun caliber.
fs::path burst_project(const std::string& name, std::size_t per_class = 8) {
  const fs::path root = testing::fresh_dir(name);
  Rng rng(31);
  const auto classes = testing::burst_classes(3);
  const std::size_t calibers[] = {0, 4, 6};
  std::vector<testing::ProjectSample> samples;
  for (std::size_t i = 0; i < per_class; ++i) {
    for (std::size_t c = 0; c < 3; ++c) {
      samples.push_back({"s" + std::to_string(c) + "_" + std::to_string(i),
                         testing::burst_clip(classes[c], rng), calibers[c]});
    }
  }
  testing::write_project(root, samples);
  return root;
}

TEST(Cli, DetectWritesStoresIdempotently) {
  const fs::path root = testing::fresh_dir("cli_detect");
  Rng rng(1);
  write_wav_file(root / "range.wav", testing::impulse_trace(5.0, 48000, {1.0, 2.2, 3.9}, rng));
  write_wav_file(root / "quiet.wav", AudioClip(std::vector<float>(48000, 0.0f), 48000));

  const Outcome first = cli({"detect", "--project", root.string(), (root / "range.wav").string(),
                             (root / "quiet.wav").string()});
  ASSERT_EQ(first.code, 0) << first.err;
  EXPECT_NE(first.out.find("3 events"), std::string::npos) << first.out;
  EXPECT_NE(first.out.find("0 events"), std::string::npos) << first.out;
  const fs::path store = root / "candidates" / "range";
  const std::string jsonl = slurp(store / "candidates.jsonl");
  EXPECT_EQ(std::count(jsonl.begin(), jsonl.end(), '\n'), 3);
  EXPECT_TRUE(fs::exists(root / "candidates" / "quiet" / "candidates.jsonl"));

  const Outcome second = cli({"detect", "--project", root.string(), (root / "range.wav").string()});
  ASSERT_EQ(second.code, 0);
  EXPECT_EQ(slurp(store / "candidates.jsonl"), jsonl);
  std::size_t wavs = 0;
  for (const auto& e : fs::directory_iterator(store)) wavs += e.path().extension() == ".wav";
  EXPECT_EQ(wavs, 3u);
}

TEST(Cli, ErrorsAreOneMachineParsableLine) {
  const fs::path root = testing::fresh_dir("cli_errors");
  expect_error_line(cli({"detect", "--project", root.string(), (root / "absent.wav").string()}),
                    "file");
  expect_error_line(cli({"frobnicate"}), "argument");
  expect_error_line(cli({"train", "--task", "colour"}), "argument");
  expect_error_line(cli({"train", "--project", root.string()}), "file");
  expect_error_line(cli({"train", "--project", root.string(), "--epochs", "0"}), "configuration");
  expect_error_line(cli({"eval", "--project", root.string(), "--checkpoint",
                         (root / "none.mzpt").string()}),
                    "file");
  expect_error_line(cli({"infer", "--checkpoint", (root / "none.mzpt").string(),
                         (root / "none.wav").string()}),
                    "file");
  const Outcome empty = cli({});
  EXPECT_EQ(empty.code, 2);
}

TEST(Cli, ProjectLockExcludesSecondCommand) {
  const fs::path root = testing::fresh_dir("cli_lock");
  const ProjectLock held(ProjectLayout{root});
  expect_error_line(cli({"train", "--project", root.string()}), "locked");
}

TEST(Cli, TrainDefaultsMatchTrainingOptions) {
  const nn::TrainConfig defaults;
  EXPECT_EQ(defaults.max_epochs, 50u);
  EXPECT_EQ(defaults.batch_size, 8u);
  EXPECT_DOUBLE_EQ(defaults.initial_lr, 2e-4);
  const Outcome help = cli({"train", "--help"});
  EXPECT_EQ(help.code, 0);
  for (const char* needle : {"--epochs", "--batch", "--lr", "--seed", "50", "8", "0.0002"}) {
    EXPECT_NE(help.out.find(needle), std::string::npos) << needle;
  }
}

class Trained : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    root_ = new fs::path(burst_project("cli_trained"));
    const Outcome o = cli({"train", "--project", root_->string(), "--epochs", "4", "--seed", "7"});
    ASSERT_EQ(o.code, 0) << o.err;
    EXPECT_EQ(o.err.find("warning"), std::string::npos) << o.err;
  }
  static void TearDownTestSuite() { delete root_; }
  static fs::path checkpoint() { return *root_ / "checkpoints" / "category.mzpt"; }
  static fs::path* root_;
};
fs::path* Trained::root_ = nullptr;

TEST_F(Trained, ReportRecordsFlagsAndDigest) {
  const json r = read_json(*root_ / "reports" / "train-category.json");
  EXPECT_EQ(r["command"], "train");
  EXPECT_EQ(r["flags"]["epochs"], "4");
  EXPECT_EQ(r["flags"]["seed"], "7");
  EXPECT_EQ(r["flags"]["batch"], "8");
  EXPECT_EQ(r["classes"], (json{"Pistol", "Rifle", "Shotgun"}));
  EXPECT_EQ(r["train_size"].get<int>() + r["val_size"].get<int>(), 24);
  EXPECT_EQ(r["checkpoint_digest"], nn::file_digest(checkpoint()));
  // 24 examples: 5 validation, 19 training, 3 mini-batches per epoch.
  EXPECT_EQ(r["val_size"], 5);
  EXPECT_EQ(r["history"].size(), 4u * 3u);
  EXPECT_FALSE(r["toolkit_version"].get<std::string>().empty());
}

TEST_F(Trained, SameSeedSameBytes) {
  const fs::path other = *root_ / "again.mzpt";
  const Outcome o = cli({"train", "--project", root_->string(), "--epochs", "4", "--seed", "7",
                         "--out", other.string()});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(slurp(other), slurp(checkpoint()));
  EXPECT_NE(o.out.find("digest " + nn::file_digest(checkpoint())), std::string::npos);
}

TEST_F(Trained, EvalJsonExport) {
  const Outcome o = cli({"eval", "--project", root_->string(), "--checkpoint",
                         checkpoint().string(), "--json"});
  ASSERT_EQ(o.code, 0) << o.err;
  const json j = json::parse(o.out);
  EXPECT_EQ(j["classes"].size(), 3u);
  std::size_t total = 0;
  for (const auto& row : j["counts"]) {
    for (const auto& v : row) total += v.get<std::size_t>();
  }
  EXPECT_EQ(total, 24u);
  EXPECT_TRUE(j["accuracy"].is_number());
  const json report = read_json(*root_ / "reports" / "eval-category.json");
  EXPECT_EQ(report["n"], 24);
  EXPECT_EQ(report["checkpoint_digest"], nn::file_digest(checkpoint()));

  const Outcome grid = cli({"eval", "--project", root_->string(), "--checkpoint",
                            checkpoint().string()});
  EXPECT_NE(grid.out.find("(N=24)"), std::string::npos) << grid.out;
}

TEST_F(Trained, EvalRejectsOtherTask) {
  expect_error_line(cli({"eval", "--project", root_->string(), "--checkpoint",
                         checkpoint().string(), "--task", "caliber"}),
                    "argument");
}

TEST_F(Trained, InferGivesRankedDistribution) {
  const fs::path quiet = *root_ / "silence.wav";
  write_wav_file(quiet, AudioClip(std::vector<float>(4800, 0.0f), 48000));
  for (const fs::path wav : {*root_ / "audio" / "s1_0.wav", quiet}) {
    const Outcome o = cli({"infer", "--checkpoint", checkpoint().string(), wav.string()});
    ASSERT_EQ(o.code, 0) << o.err;
    std::istringstream lines(o.out);
    std::string name;
    double p = 0.0, sum = 0.0, last = 2.0;
    int rows = 0;
    while (lines >> name >> p) {
      EXPECT_GE(p, 0.0);
      EXPECT_LE(p, last);
      last = p;
      sum += p;
      ++rows;
    }
    EXPECT_EQ(rows, 3);
    EXPECT_NEAR(sum, 1.0, 1e-5);
  }
  const auto ranked = cmd_infer(checkpoint(), quiet);
  double sum = 0.0;
  for (const auto& [n, q] : ranked) sum += q;
  EXPECT_NEAR(sum, 1.0, 1e-6);
}

TEST(Cli, LearningRateOutsideAdvisedRangeWarns) {
  const fs::path root = burst_project("cli_lr", 6);
  const Outcome o = cli({"train", "--project", root.string(), "--epochs", "1", "--lr", "1e-3"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_NE(o.err.find("warning: learning rate"), std::string::npos) << o.err;
}

TEST(Cli, ConfigFileFillsUnsetFlagsOnly) {
  const fs::path root = burst_project("cli_config", 3);
  const fs::path cfg = root / "muzzleprint.toml";
  std::ofstream(cfg) << "seed = 11\n[train]\nepochs = 1\nval_fraction = 0.25\nbatch = 4\n";
  const Outcome o = cli({"--config", cfg.string(), "train", "--project", root.string(), "--seed",
                         "3"});
  ASSERT_EQ(o.code, 0) << o.err;
  const json r = read_json(root / "reports" / "train-category.json");
  EXPECT_EQ(r["flags"]["seed"], "3");
  EXPECT_EQ(r["flags"]["epochs"], "1");
  EXPECT_EQ(r["flags"]["batch"], "4");
  EXPECT_EQ(r["flags"]["val_fraction"], "0.25");
  EXPECT_EQ(r["history"].size(), 2u);  // 7 training examples at batch 4

  std::ofstream(cfg) << "colour = 3\n";
  expect_error_line(cli({"--config", cfg.string(), "train", "--project", root.string()}),
                    "configuration");
}

// Thread-safe sink so the test can wait for the listening line.
class SharedLog : public std::stringbuf {
 public:
  std::string snapshot() {
    std::lock_guard lock(m_);
    return str();
  }

 protected:
  int sync() override { return 0; }
  std::streamsize xsputn(const char* s, std::streamsize n) override {
    std::lock_guard lock(m_);
    return std::stringbuf::xsputn(s, n);
  }
  int_type overflow(int_type c) override {
    std::lock_guard lock(m_);
    return std::stringbuf::overflow(c);
  }

 private:
  std::recursive_mutex m_;
};

TEST(Cli, ReviewServeRoundTrip) {
  const fs::path root = testing::fresh_dir("cli_review");
  Rng rng(5);
  write_wav_file(root / "range.wav", testing::impulse_trace(4.0, 48000, {1.0, 2.5}, rng));
  ASSERT_EQ(cli({"detect", "--project", root.string(), (root / "range.wav").string()}).code, 0);

  for (int round = 0; round < 2; ++round) {
    SharedLog buf;
    std::ostream log(&buf);
    std::thread serve([&] { cmd_review_serve(ProjectLayout{root}, 0, "127.0.0.1", {}, log); });
    int port = 0;
    for (int i = 0; i < 400 && port == 0; ++i) {
      const std::string text = buf.snapshot();
      const auto colon = text.rfind(':');
      if (text.find("listening") != std::string::npos && text.back() == '\n') {
        port = std::stoi(text.substr(colon + 1));
      } else {
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
      }
    }
    ASSERT_GT(port, 0);
    httplib::Client client("127.0.0.1", port);
    httplib::Result health;
    for (int i = 0; i < 200 && !health; ++i) {
      health = client.Get("/api/health");
      if (!health) std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    ASSERT_TRUE(health);
    EXPECT_EQ(json::parse(health->body)["status"], "ok");
    const json list = json::parse(client.Get("/api/candidates?state=unreviewed")->body);
    if (round == 0) {
      ASSERT_EQ(list.size(), 2u);
      const std::string id = list[0]["id"];
      auto res = client.Post("/api/candidates/" + id + "/verdict", R"({"verdict":"shot"})",
                             "application/json");
      ASSERT_EQ(res->status, 200);
      const std::string labels = slurp(root / "trainset" / "labels.jsonl");
      EXPECT_NE(labels.find(id), std::string::npos);
    } else {
      EXPECT_EQ(list.size(), 1u);  // restart resumes the unreviewed queue
    }
    std::raise(SIGINT);
    serve.join();
  }
}

}  // namespace
}  // namespace muzzleprint::pipeline
