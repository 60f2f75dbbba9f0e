// Copyright 2026 The Cascade Authors
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

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "cascade/evolve.hpp"
#include "cascade/grid.hpp"
#include "cascade/hilbert.hpp"
#include "cascade/liouvillian.hpp"
#include "cascade/sources.hpp"

namespace cascade::experiment {

/// Malformed or invalid configuration; the CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InitialSpec {
  enum class Source { Default, Vacuum, Fock, Coherent };
  Source source = Source::Default;
  int n = 0;           ///< Fock
  Complex alpha{0.0};  ///< Coherent
  Complex qubit_ground{1.0};
  Complex qubit_excited{0.0};
};

struct GridSpec {
  double t0 = 0.0;
  double t1 = 10.0;
  double dt = 0.01;
  int sample_every = 10;
};

struct ExperimentConfig {
  std::string scenario = "unnamed";
  CouplingConfig coupling;
  SourceModel source = CoherentDrive{};
  InitialSpec initial;
  GridSpec grid;
  int n_max = 20;
  std::uint64_t seed = 1;
  int trajectories = 1;
  /// Trajectories (lowest indices first) that also get an observables file.
  int trajectory_files = 10;
  NoJumpOrder no_jump_order = NoJumpOrder::First;
  std::string output_dir = "out";

  [[nodiscard]] TimeGrid time_grid() const { return TimeGrid(grid.t0, grid.t1, grid.dt); }
  [[nodiscard]] FockSpec fock() const { return FockSpec(n_max); }
};

/// Parses and validates; `origin` prefixes error messages.
[[nodiscard]] ExperimentConfig parse_config(std::string_view text, std::string_view origin = "config");
[[nodiscard]] ExperimentConfig load_config(const std::filesystem::path& path);

/// Re-checks every module precondition; throws ConfigError.
void validate(const ExperimentConfig& config);

/// Fully resolved config, defaults included.
[[nodiscard]] nlohmann::ordered_json to_json(const ExperimentConfig& config);

struct RunSummary {
  std::filesystem::path output_dir;
  std::vector<std::string> files;  ///< relative to output_dir
};

/// Master-equation run: observables.csv, final_state.json, manifest.json.
[[nodiscard]] RunSummary run_master(const ExperimentConfig& config);

/// Trajectory run: records/, trajectories/, ensemble_observables.csv,
/// ensemble_final_state.json, manifest.json.
[[nodiscard]] RunSummary run_trajectories(const ExperimentConfig& config, int workers = 1);

// Output helpers, exposed for tests.

/// Writes `content` to a sibling temp file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);

/// Shortest round-trip decimal form of `value`.
[[nodiscard]] std::string format_number(double value);

/// Row-major nested [re, im] pairs with an explicit basis ordering.
[[nodiscard]] nlohmann::ordered_json state_dump(const Matrix& rho, const FockSpec& fock, double time);

}  // namespace cascade::experiment
