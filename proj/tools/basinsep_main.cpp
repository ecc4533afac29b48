// Copyright 2026 The Basinsep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "basinsep/cli.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::string mode;
  std::string scaling;
  std::uint64_t seed = 0;
  bool seed_set = false;
  long seeds = 0;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path,
                  "config file of key = value lines");
  cmd->add_option("--out", flags.out_dir, "output directory");
  cmd->add_option("--seed", flags.seed, "root seed")
      ->each([&flags](const std::string&) { flags.seed_set = true; });
  cmd->add_option("--seeds", flags.seeds, "number of trials");
  cmd->add_option("--set", flags.overrides,
                  "dotted config override, e.g. dp.epsilon=1")
      ->take_all();
}

int run(basinsep::Command command, const CommonFlags& flags) {
  basinsep::RunConfig config = basinsep::RunConfig::defaults(command);
  if (!flags.config_path.empty()) {
    basinsep::apply_config_file(config, flags.config_path);
  }
  for (const std::string& kv : flags.overrides) {
    basinsep::apply_override(config, kv);
  }
  if (!flags.mode.empty()) {
    basinsep::apply_override(config, "task.mode=" + flags.mode);
  }
  if (!flags.scaling.empty()) {
    basinsep::apply_override(config, "run.scaling=" + flags.scaling);
  }
  if (flags.seed_set) {
    basinsep::apply_override(config,
                             "run.root_seed=" + std::to_string(flags.seed));
  }
  if (flags.seeds > 0) {
    basinsep::apply_override(config, "run.seeds=" + std::to_string(flags.seeds));
  }
  if (!flags.out_dir.empty()) config.out_dir = flags.out_dir;
  return basinsep::run_command(config, std::cout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "basinsep: public-pretraining / private-fine-tuning separation "
      "experiments on synthetic basin losses"};
  app.require_subcommand(1);

  struct Sub {
    basinsep::Command command;
    CLI::App* cmd;
    CommonFlags flags;
  };
  std::vector<Sub> subs;
  subs.push_back({basinsep::Command::separation,
                  app.add_subcommand("separation",
                                     "three-arm separation experiment"),
                  {}});
  subs.push_back({basinsep::Command::quadratic,
                  app.add_subcommand(
                      "quadratic", "constrained quadratic variant, projected"),
                  {}});
  subs.push_back({basinsep::Command::schedule,
                  app.add_subcommand("schedule",
                                     "equal-budget noise schedule comparison"),
                  {}});
  subs.push_back({basinsep::Command::landscape,
                  app.add_subcommand("landscape",
                                     "loss slices, heatmaps, and planes"),
                  {}});
  subs.push_back({basinsep::Command::calibrate,
                  app.add_subcommand("calibrate",
                                     "basin-landing rate calibration"),
                  {}});
  subs.push_back({basinsep::Command::selftest,
                  app.add_subcommand("selftest", "run all invariant checks"),
                  {}});
  for (Sub& sub : subs) {
    add_common(sub.cmd, sub.flags);
    if (sub.command == basinsep::Command::separation ||
        sub.command == basinsep::Command::quadratic) {
      sub.cmd->add_option("--mode", sub.flags.mode, "id or ood")
          ->check(CLI::IsMember({"id", "ood"}));
      sub.cmd->add_option("--scaling", sub.flags.scaling, "desk or theorem")
          ->check(CLI::IsMember({"desk", "theorem"}));
    }
  }

  CLI11_PARSE(app, argc, argv);

  for (const Sub& sub : subs) {
    if (sub.cmd->parsed()) {
      try {
        return run(sub.command, sub.flags);
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
      }
    }
  }
  return 1;
}
