// Copyright 2026 The glrt-rmt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// glrt: run the detection experiments from a config file and verify their
// outputs.
//
//   glrt moments_vs_L --config configs/moments_vs_L.cfg --out results/moments_vs_L
//   glrt verify --out results/moments_vs_L

#include <algorithm>
#include <iostream>
#include <limits>
#include <thread>

#include "CLI11.hpp"
#include "glrt/cli.hpp"
#include "glrt/errors.hpp"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

struct Flags {
  std::string config;
  std::string out;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  std::size_t trials = 0;
};

int run(glrt::Experiment experiment, const Flags& flags) {
  glrt::ExperimentConfig config = glrt::parse_config(flags.config);
  if (config.experiment != experiment) {
    throw glrt::ConfigError(flags.config + ": experiment is " + glrt::to_string(config.experiment) +
                            " but the subcommand is " + glrt::to_string(experiment));
  }
  glrt::RunOptions options;
  options.threads = flags.threads;
  if (flags.trials > 0) options.trials_override = flags.trials;
  for (const auto& path : glrt::run_experiment(config, flags.out, options)) {
    std::cout << path.string() << "\n";
  }
  return 0;
}

int verify(const Flags& flags) {
  if (!flags.config.empty()) {
    glrt::ExperimentConfig expected = glrt::parse_config(flags.config);
    const glrt::ExperimentConfig recorded = glrt::load_manifest_config(flags.out);
    expected.trials = recorded.trials;  // may have been overridden with --trials
    if (expected.canonical_text() != recorded.canonical_text()) {
      std::cerr << "config mismatch: " << flags.out << " was produced from a different config\n";
      return kExitFailure;
    }
  }
  const glrt::VerifyReport report = glrt::verify_outputs(flags.out);
  for (const std::string& m : report.mismatches) std::cerr << m << "\n";
  std::cout << report.rows_checked << " theoretical rows checked, " << report.mismatches.size()
            << " mismatches\n";
  return report.ok() ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Training-sequence GLRT detection experiments"};
  app.require_subcommand(1);
  Flags flags;

  std::vector<std::pair<CLI::App*, glrt::Experiment>> experiments;
  for (const glrt::Experiment e : glrt::all_experiments()) {
    CLI::App* sub = app.add_subcommand(glrt::to_string(e), "Run the " +
                                                               std::string(glrt::to_string(e)) +
                                                               " experiment");
    sub->add_option("--config", flags.config, "Experiment config file")->required()->check(
        CLI::ExistingFile);
    sub->add_option("--out", flags.out, "Output directory")->required();
    sub->add_option("--threads", flags.threads, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--trials", flags.trials, "Override the configured trial count")
        ->check(CLI::Range(std::size_t{2}, std::numeric_limits<std::size_t>::max()));
    experiments.emplace_back(sub, e);
  }
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "Recompute the theoretical columns of an output directory");
  verify_cmd->add_option("--out", flags.out, "Output directory to check")->required()->check(
      CLI::ExistingDirectory);
  verify_cmd->add_option("--config", flags.config, "Config the outputs should match")
      ->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify_cmd->parsed()) {
      return verify(flags);
    }
    for (const auto& [sub, experiment] : experiments) {
      if (sub->parsed()) return run(experiment, flags);
    }
  } catch (const glrt::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}
