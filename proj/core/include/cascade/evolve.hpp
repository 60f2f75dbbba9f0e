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
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cascade/channels.hpp"
#include "cascade/grid.hpp"
#include "cascade/hilbert.hpp"
#include "cascade/liouvillian.hpp"
#include "cascade/sources.hpp"

namespace cascade {

/// A state left its trace/positivity envelope during integration.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The per-step jump probability exceeded the hard limit.
class StepProbabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kStabilityLimit = 0.05;

struct MasterOptions {
  int sample_every = 1;
  /// When positive, dt * rate_scale must not exceed kStabilityLimit.
  double rate_scale = 0.0;
  double trace_tolerance = 1e-8;
  double negativity_tolerance = 1e-8;
  double hermitian_tolerance = 1e-10;
};

/// Fourth-order Runge-Kutta integration of d rho/dt = L rho. Returns the
/// states at grid.sample_steps(sample_every). Throws InvariantViolation when a
/// sampled state drifts out of the trace/positivity envelope.
[[nodiscard]] std::vector<DensityOperator> evolve_master(const DensityOperator& rho0, const Superoperator& generator,
                                                         const TimeGrid& grid, const MasterOptions& options = {});

struct RecordEvent {
  double time = 0.0;
  ChannelLabel label = ChannelLabel::Forward;

  friend bool operator==(const RecordEvent&, const RecordEvent&) = default;
};

/// Time-ordered environmental record of one trajectory.
struct Record {
  std::vector<RecordEvent> events;
  std::uint64_t seed = 0;

  [[nodiscard]] int count(ChannelLabel label) const;
};

struct TrajectoryResult {
  Record record;
  std::vector<double> times;                 ///< sample times
  std::vector<PureState> states;             ///< normalized conditional states at `times`
  std::vector<BirthDeathState> classical;    ///< carrier register at `times`
  double max_step_probability = 0.0;
};

enum class NoJumpOrder { First, Second };

/// Read-only view handed to the per-step observer after every step.
struct StepView {
  int step = 0;
  double time = 0.0;
  const Vector& psi;
  int carriers = 0;
  std::optional<ChannelLabel> event;
};

struct TrajectoryOptions {
  int sample_every = 1;
  NoJumpOrder order = NoJumpOrder::First;
  double warn_probability = 0.01;
  double max_probability = 0.1;
  std::function<void(const StepView&)> observer;
};

/// Assembled no-jump Hamiltonian and jump channels for one (config, source) pair.
class TrajectoryModel {
 public:
  TrajectoryModel(const CouplingConfig& config, const SourceModel& source, const FockSpec& spec);

  [[nodiscard]] const FockSpec& fock() const { return fock_; }
  [[nodiscard]] const std::vector<JumpChannel>& channels() const { return channels_; }
  [[nodiscard]] int initial_carriers() const { return initial_carriers_; }
  /// Non-Hermitian Hamiltonian including -(i/2) N C^dag C for carrier-scaled channels.
  [[nodiscard]] Matrix nonhermitian_hamiltonian(int carriers) const;

 private:
  friend TrajectoryResult mcwf_run(const PureState&, const TrajectoryModel&, const TimeGrid&, std::uint64_t,
                                   const TrajectoryOptions&);
  FockSpec fock_;
  std::vector<JumpChannel> channels_;
  Matrix base_hamiltonian_;
  Matrix carrier_hamiltonian_;  ///< per-carrier part, multiplied by N
  int initial_carriers_ = 0;
};

/// First-order Monte-Carlo wavefunction trajectory. One uniform variate per
/// step decides whether an event happens; a second selects the channel.
/// Deterministic given `seed`.
[[nodiscard]] TrajectoryResult mcwf_run(const PureState& psi0, const TrajectoryModel& model, const TimeGrid& grid,
                                        std::uint64_t seed, const TrajectoryOptions& options = {});
[[nodiscard]] TrajectoryResult mcwf_run(const PureState& psi0, const CouplingConfig& config, const SourceModel& source,
                                        const TimeGrid& grid, std::uint64_t seed,
                                        const TrajectoryOptions& options = {});

/// Running sum of |psi><psi| per sample index.
class EnsembleAccumulator {
 public:
  EnsembleAccumulator() = default;
  EnsembleAccumulator(std::vector<double> times, Index dim, FockSpec spec);

  void add(const TrajectoryResult& result);
  void add(std::size_t sample, const Vector& psi);
  /// Adds another accumulator's sums; both must share the sample grid.
  void merge(const EnsembleAccumulator& other);
  void finish_trajectory() { ++count_; }

  [[nodiscard]] std::size_t count() const { return count_; }
  [[nodiscard]] const std::vector<double>& times() const { return times_; }
  [[nodiscard]] std::vector<DensityOperator> average() const;

 private:
  std::vector<double> times_;
  std::vector<Matrix> sums_;
  FockSpec fock_{1};
  std::size_t count_ = 0;
};

/// (1/M) sum_m |psi_m(t)><psi_m(t)|. Throws DimensionError on sample grid mismatch.
[[nodiscard]] std::vector<DensityOperator> ensemble_average(const std::vector<TrajectoryResult>& results);

struct EnsembleOptions {
  int workers = 1;
  /// Trajectories summed per block; blocks are merged in index order so the
  /// result does not depend on the worker count.
  int block_size = 32;
  TrajectoryOptions trajectory;
  /// Called with each finished trajectory; may run concurrently.
  std::function<void(int index, const TrajectoryResult&)> on_result;
};

/// Runs `count` trajectories with seeds derive_seed(base_seed, m) and returns the accumulated ensemble.
/// `initial_state(m, rng_seed)` provides each trajectory's starting state.
[[nodiscard]] EnsembleAccumulator run_ensemble(const std::function<PureState(int, std::uint64_t)>& initial_state,
                                               const TrajectoryModel& model, const TimeGrid& grid, int count,
                                               std::uint64_t base_seed, const EnsembleOptions& options = {});

/// Worker count from the CASCADE_WORKERS environment variable (default 1).
[[nodiscard]] int workers_from_env();

[[nodiscard]] Complex expectation(const Matrix& rho, const Operator& op);
[[nodiscard]] Complex expectation(const DensityOperator& rho, const Operator& op);
[[nodiscard]] Complex expectation(const PureState& psi, const Operator& op);

}  // namespace cascade
