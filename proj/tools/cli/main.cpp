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

// cascade: batch front-end.
//
//   cascade run-master <config> [--out DIR]
//   cascade run-trajectories <config> [--out DIR]
//   cascade verify [--suite all|A1..A9] [--out DIR]
//
// Exit codes: 0 success, 1 failure (including failed criteria), 2 config or
// usage error, 3 invariant violation during a run. CASCADE_WORKERS sets the
// trajectory worker count.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "cascade/acceptance.hpp"
#include "cascade/evolve.hpp"
#include "cascade/experiment.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kConfigError = 2;
constexpr int kInvariantViolation = 3;

template <typename Run>
int guarded(Run&& run) {
  try {
    return run();
  } catch (const cascade::experiment::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const cascade::InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kInvariantViolation;
  } catch (const cascade::StepProbabilityError& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kInvariantViolation;
  } catch (const cascade::InvalidState& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kInvariantViolation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
}

cascade::experiment::ExperimentConfig load(const std::string& path, const std::string& out) {
  auto config = cascade::experiment::load_config(path);
  if (!out.empty()) config.output_dir = out;
  return config;
}

int verify(const std::string& suite, const std::string& out) {
  namespace acc = cascade::acceptance;
  std::vector<const acc::Criterion*> selected;
  try {
    selected = acc::select(suite);
  } catch (const acc::UnknownSuite& e) {
    std::cerr << e.what() << '\n';
    return kConfigError;
  }
  std::vector<acc::CriterionResult> results;
  for (const auto* criterion : selected) {
    results.push_back(acc::run(*criterion));
    std::cerr << acc::summary_line(results.back()) << std::endl;
  }
  std::cout << acc::verdict_table(results);
  const std::filesystem::path path = std::filesystem::path(out) / "verdicts.json";
  cascade::experiment::write_atomic(path, acc::verdict_json(results).dump(2) + "\n");
  std::cout << "verdicts written to " << path.string() << '\n';
  for (const auto& r : results)
    if (!r.passed) return kFailure;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cascade: source-to-qubit cascaded simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  auto* master = app.add_subcommand("run-master", "Integrate the master equation for a config");
  master->add_option("config", config_path, "Experiment config (JSON)")->required();
  master->add_option("--out", out_dir, "Override the config's output_dir");

  auto* trajectories = app.add_subcommand("run-trajectories", "Run a quantum-trajectory ensemble for a config");
  trajectories->add_option("config", config_path, "Experiment config (JSON)")->required();
  trajectories->add_option("--out", out_dir, "Override the config's output_dir");

  std::string suite = "all";
  std::string verify_out = "verify_out";
  auto* check = app.add_subcommand("verify", "Run the acceptance criteria");
  check->add_option("--suite", suite, "all or one of A1..A9");
  check->add_option("--out", verify_out, "Directory for verdicts.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  if (*master) {
    return guarded([&] {
      const auto summary = cascade::experiment::run_master(load(config_path, out_dir));
      std::cout << "wrote " << summary.files.size() << " files to " << summary.output_dir.string() << '\n';
      return kOk;
    });
  }
  if (*trajectories) {
    return guarded([&] {
      const auto summary =
          cascade::experiment::run_trajectories(load(config_path, out_dir), cascade::workers_from_env());
      std::cout << "wrote " << summary.files.size() << " files to " << summary.output_dir.string() << '\n';
      return kOk;
    });
  }
  return guarded([&] { return verify(suite, verify_out); });
}
