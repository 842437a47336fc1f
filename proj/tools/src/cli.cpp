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

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "muzzleprint/error.hpp"
#include "muzzleprint/pipeline.hpp"

namespace muzzleprint::pipeline {

namespace fs = std::filesystem;

namespace {

// TOML-style key = value file; keys mirror the long flag names and apply
// only where the flag was not given. A [section] limits keys to the
// subcommand of that name.
void apply_config(const fs::path& path, CLI::App& sub, FlagSet& flags) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kFile, "cannot open config " + path.string());
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigTOML().from_config(in);
  } catch (const CLI::Error& e) {
    throw Error(ErrorCode::kConfiguration, path.string() + ": " + e.what());
  }
  for (const CLI::ConfigItem& item : items) {
    if (!item.parents.empty() && item.parents.front() != sub.get_name()) continue;
    if (item.name == "++" || item.name == "--") continue;
    std::string name = item.name;
    std::replace(name.begin(), name.end(), '-', '_');
    std::string flag = name;
    std::replace(flag.begin(), flag.end(), '_', '-');
    CLI::Option* opt = sub.get_option_no_throw("--" + flag);
    if (!opt) {
      throw Error(ErrorCode::kConfiguration,
                  path.string() + ": unknown key '" + item.name + "' for " + sub.get_name());
    }
    if (opt->count() > 0) continue;
    for (const std::string& v : item.inputs) opt->add_result(v);
    try {
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw Error(ErrorCode::kConfiguration, path.string() + ": " + item.name + ": " + e.what());
    }
    flags[name] = item.inputs.empty() ? "" : item.inputs.front();
  }
}

// Flags given on the command line, by long name.
FlagSet given_flags(const CLI::App& sub) {
  FlagSet flags;
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->count() == 0 || opt->get_lnames().empty()) continue;
    std::string name = opt->get_lnames().front();
    if (name == "help" || name == "config") continue;
    std::replace(name.begin(), name.end(), '-', '_');
    const auto& results = opt->results();
    flags[name] = results.empty() ? "true" : results.back();
  }
  return flags;
}

Task task_from(const std::string& text) { return parse_task(text); }

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gunshot detection and firearm classification toolkit", "muzzleprint"};
  app.require_subcommand(1);
  app.set_version_flag("--version", toolkit_version());
  std::string config;
  app.add_option("--config", config, "TOML key = value file mirroring the flags");

  std::string project = ".";
  std::string task = "category";

  CLI::App* detect = app.add_subcommand("detect", "Find abrupt changes and write candidate stores");
  std::vector<std::string> detect_inputs;
  std::string detect_out;
  DetectorConfig dcfg;
  detect->add_option("--project", project, "Project root")->capture_default_str();
  detect->add_option("audio", detect_inputs, "WAV recordings")->required();
  detect->add_option("--out", detect_out, "Output directory (default <project>/candidates)");
  detect->add_option("--window", dcfg.variance_window_s, "Moving-variance window, seconds")
      ->capture_default_str();
  detect->add_option("--prominence", dcfg.min_prominence, "Minimum peak prominence")
      ->capture_default_str();
  detect->add_option("--separation", dcfg.min_separation_s, "Minimum peak separation, seconds")
      ->capture_default_str();

  CLI::App* review = app.add_subcommand("review", "Serve the human review API");
  int port = 8080;
  std::string host = "127.0.0.1";
  std::string static_dir;
  review->add_option("--project", project, "Project root")->capture_default_str();
  review->add_option("--port", port, "TCP port")->check(CLI::Range(0, 65535))->capture_default_str();
  review->add_option("--host", host, "Bind address")->capture_default_str();
  review->add_option("--static-dir", static_dir, "Directory of UI assets to serve at /");

  CLI::App* train = app.add_subcommand("train", "Train the CNN on the project manifest");
  nn::TrainConfig tcfg;
  std::string train_manifest;
  std::string train_out;
  train->add_option("--project", project, "Project root")->capture_default_str();
  train->add_option("--task", task, "category, caliber or model")
      ->check(CLI::IsMember({"category", "caliber", "model"}))
      ->capture_default_str();
  train->add_option("--seed", tcfg.seed, "Seed for every random draw")->capture_default_str();
  train->add_option("--lr", tcfg.initial_lr, "Initial learning rate")->capture_default_str();
  train->add_option("--epochs", tcfg.max_epochs, "Epochs")->capture_default_str();
  train->add_option("--batch", tcfg.batch_size, "Mini-batch size")->capture_default_str();
  train->add_option("--val-fraction", tcfg.val_fraction, "Validation fraction")
      ->capture_default_str();
  train->add_option("--manifest", train_manifest, "Manifest (default <project>/manifest.jsonl)");
  train->add_option("--out", train_out, "Checkpoint path (default <project>/checkpoints/<task>.mzpt)");

  CLI::App* eval = app.add_subcommand("eval", "Confusion matrix of a checkpoint on a manifest");
  std::string eval_checkpoint;
  std::string eval_manifest;
  bool eval_json = false;
  eval->add_option("--project", project, "Project root")->capture_default_str();
  eval->add_option("--checkpoint", eval_checkpoint, "Checkpoint file")->required();
  eval->add_option("--manifest", eval_manifest, "Manifest (default <project>/manifest.jsonl)");
  eval->add_option("--task", task, "category, caliber or model")
      ->check(CLI::IsMember({"category", "caliber", "model"}))
      ->capture_default_str();
  eval->add_flag("--json", eval_json, "Print the JSON export instead of the grid");

  CLI::App* infer = app.add_subcommand("infer", "Class probabilities for one WAV slice");
  std::string infer_checkpoint;
  std::string infer_wav;
  infer->add_option("--checkpoint", infer_checkpoint, "Checkpoint file")->required();
  infer->add_option("wav", infer_wav, "Onset-aligned WAV slice")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: argument: " << e.what() << '\n';
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    FlagSet flags = given_flags(*sub);
    if (!config.empty()) apply_config(config, *sub, flags);
    const ProjectLayout layout{project};

    if (sub == detect) {
      std::vector<fs::path> inputs(detect_inputs.begin(), detect_inputs.end());
      const ProjectLock lock(layout);
      const fs::path dir = detect_out.empty() ? layout.candidates() : fs::path(detect_out);
      for (const DetectResult& r : cmd_detect(inputs, dir, dcfg)) {
        out << r.store.string() << '\t' << r.events << " events\n";
      }
    } else if (sub == review) {
      const ProjectLock lock(layout);
      cmd_review_serve(layout, port, host, static_dir, out);
    } else if (sub == train) {
      const ProjectLock lock(layout);
      TrainOptions opts{layout, task_from(task), train_manifest, train_out, tcfg, flags};
      const TrainSummary s = cmd_train(opts, err);
      out << "checkpoint " << s.checkpoint.string() << '\n'
          << "digest " << s.checkpoint_digest << '\n'
          << "report " << s.report.string() << '\n'
          << "final_val_accuracy " << s.final_val_accuracy << '\n';
    } else if (sub == eval) {
      const ProjectLock lock(layout);
      EvalOptions opts{layout, eval_checkpoint, eval_manifest, task_from(task), flags};
      const EvalSummary s = cmd_eval(opts);
      if (eval_json) {
        out << to_json(s.matrix) << '\n';
      } else {
        out << render_grid(s.matrix) << "report " << s.report.string() << '\n';
      }
    } else if (sub == infer) {
      for (const auto& [name, p] : cmd_infer(infer_checkpoint, infer_wav)) {
        out << name << '\t' << std::fixed << std::setprecision(6) << p << '\n';
      }
    }
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace muzzleprint::pipeline
