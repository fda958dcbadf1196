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

#pragma once

// Configuration-driven experiments: parsing of the flat key/value config,
// execution of each experiment family and replay verification of outputs.
//
// Config syntax, one `key = value` per line, `#` starts a comment:
//
//   experiment  = moments_vs_L
//   M           = 150
//   N           = 300
//   L           = 1..30
//   trials      = 10000
//   master_seed = 1
//
// M, N and L accept a single value, a comma list or an inclusive range a..b.
// M and N may also be written as a multiple of L, e.g. M = 15L. Lists of
// equal length are zipped and single values are broadcast.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "glrt/asymptotics.hpp"
#include "glrt/matkernel.hpp"

namespace glrt {

enum class Experiment {
  kMomentsVsC,
  kMomentsVsL,
  kRocHybrid,
  kRocTheoretical,
  kRocGrowingLmn,
  kMpValidation,
  kTraceLemma,
};

const char* to_string(Experiment e) noexcept;
// Throws ConfigError for unknown tags.
Experiment parse_experiment(std::string_view tag);
const std::vector<Experiment>& all_experiments();

struct RunDims {
  Index m = 0;
  Index n = 0;
  Index l = 0;
};

struct ExperimentConfig {
  Experiment experiment = Experiment::kMomentsVsC;
  std::vector<RunDims> runs;
  double sigma2 = 1.0;
  std::size_t trials = 0;
  std::uint64_t master_seed = 0;
  std::vector<double> pfa_grid;
  std::vector<Model> models;
  std::uint64_t channel_seed = 0;
  long zc_root = 1;

  // Canonical `key = value` text with defaults filled in; parsing it again
  // yields the same config.
  std::string canonical_text() const;
};

std::vector<double> default_pfa_grid();

// Throws ConfigError naming the line and key on any syntax, schema or
// invariant violation.
ExperimentConfig parse_config_text(std::string_view text, std::string_view source = "<config>");
ExperimentConfig parse_config(const std::filesystem::path& path);

struct RunOptions {
  unsigned threads = 1;
  std::optional<std::size_t> trials_override;
};

// Writes the artifacts of `config` into `out_dir` and returns their paths.
// On failure every file written so far is removed and the error is rethrown
// with the experiment and run in its message.
std::vector<std::filesystem::path> run_experiment(const ExperimentConfig& config,
                                                  const std::filesystem::path& out_dir,
                                                  const RunOptions& options = {});

struct VerifyReport {
  std::size_t rows_checked = 0;
  std::vector<std::string> mismatches;
  bool ok() const { return mismatches.empty(); }
};

// The config echoed in `out_dir`/manifest.json.
ExperimentConfig load_manifest_config(const std::filesystem::path& out_dir);

// Re-derives every theoretical column in `out_dir` from the config echoed in
// its manifest and reports cells that differ from what is on disk.
VerifyReport verify_outputs(const std::filesystem::path& out_dir);

}  // namespace glrt
