// Copyright 2026 The clustered-fu Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: cfu <command> --config PATH [flags].

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "absl/strings/str_cat.h"
#include "cfu/cli.h"
#include "cfu/config.h"
#include "cfu/status.h"

namespace {

struct Flags {
  std::string config;
  uint64_t seed = 0;
  std::string out;
  int64_t trials = 0;
  std::string mode;
  int threads = 1;
};

bool IsSimulate(cfu::RunMode m) {
  return m == cfu::RunMode::kSimulateSeq || m == cfu::RunMode::kSimulateBat;
}

int Fail(const absl::Status& status) {
  std::cerr << status.message() << "\n";
  std::cout << "summary status=error exit=" << cfu::kExitInternal
            << " reason=\"" << status.message() << "\"\n";
  return cfu::kExitInternal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clustered federated unlearning simulator"};
  app.require_subcommand(1);
  Flags flags;
  for (const char* name :
       {"pargen", "simulate", "montecarlo", "sweep", "train"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", flags.config, "key=value config file")
        ->required();
    sub->add_option("--seed", flags.seed, "master seed");
    sub->add_option("--out", flags.out, "output directory");
    sub->add_option("--trials", flags.trials, "Monte Carlo trials")
        ->check(CLI::PositiveNumber);
    sub->add_option("--mode", flags.mode, "seq or bat (simulate only)")
        ->check(CLI::IsMember({"seq", "bat"}));
    sub->add_option("--threads", flags.threads, "worker threads")
        ->check(CLI::PositiveNumber);
  }
  CLI11_PARSE(app, argc, argv);
  const CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();

  std::ifstream in(flags.config, std::ios::binary);
  if (!in) {
    return Fail(cfu::MakeError(cfu::ErrorKind::kInvalidArgument,
                               absl::StrCat("cannot read ", flags.config)));
  }
  std::stringstream text;
  text << in.rdbuf();
  absl::StatusOr<cfu::RunConfig> config = cfu::ParseConfig(text.str());
  if (!config.ok()) return Fail(config.status());

  absl::StatusOr<cfu::RunMode> mode =
      cfu::ModeForCommand(command, flags.mode, config->mode);
  if (!mode.ok()) return Fail(mode.status());
  if (*mode != config->mode &&
      !(IsSimulate(*mode) && IsSimulate(config->mode))) {
    return Fail(cfu::MakeError(
        cfu::ErrorKind::kInvalidArgument,
        absl::StrCat("command ", command, " does not match config mode ",
                     cfu::RunModeName(config->mode))));
  }
  config->mode = *mode;
  if (sub->count("--seed") > 0) config->seed = flags.seed;
  if (!flags.out.empty()) config->out = flags.out;
  if (sub->count("--trials") > 0) {
    config->trials = flags.trials;
    config->has_trials = true;
  }

  const cfu::RunOutcome outcome = cfu::Run(*config, {flags.threads});
  std::cout << outcome.summary << "\n";
  return outcome.exit_code;
}
