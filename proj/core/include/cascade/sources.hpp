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
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "cascade/channels.hpp"
#include "cascade/grid.hpp"
#include "cascade/hilbert.hpp"
#include "cascade/liouvillian.hpp"

namespace cascade {

/// Laser mode driven by a classical field, H_S = i (eps a^dag - eps^* a).
struct CoherentDrive {
  Complex epsilon{0.5, 0.0};
  /// Starting amplitude of the classical path; defaults to the steady amplitude.
  std::optional<Complex> initial_alpha;
};

struct WeightedAmplitude {
  Complex alpha;
  double weight = 1.0;
};

/// Undriven mode prepared in a classical mixture of coherent states. Its L_S is
/// zero; all dynamics come from the output damping.
struct FreeDecayMixture {
  std::vector<WeightedAmplitude> initial_amplitudes;
};

/// Birth-death laser: pump N -> N+1 at rate pump_rate, stimulated emission
/// (N, n) -> (N-1, n+1) at rate gain * N * (n+1), non-lasing loss N -> N-1 at
/// rate nonlasing_rate * N. Trajectory-only.
struct BirthDeathLaser {
  double pump_rate = 2.0;
  double gain = 1.0;
  double nonlasing_rate = 0.5;
  int N0 = 5;
  int n0 = 3;
};

using SourceModel = std::variant<CoherentDrive, FreeDecayMixture, BirthDeathLaser>;

class UnsupportedSource : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Carrier register of a birth-death trajectory.
struct BirthDeathState {
  int N = 0;
};

/// Sampled classical amplitude alpha_t with its statistical weight.
struct ClassicalPath {
  std::vector<double> times;
  std::vector<Complex> alphas;
  double weight = 1.0;

  [[nodiscard]] std::size_t size() const { return times.size(); }
};

/// Weighted sample set standing in for a positive, nonsingular P function.
struct PDistribution {
  std::vector<WeightedAmplitude> samples;

  void validate(double tol = 1e-12) const;
  /// sum_k w_k |alpha_k><alpha_k| on the source factor.
  [[nodiscard]] DensityOperator source_state(const FockSpec& spec) const;
};

[[nodiscard]] PDistribution p_distribution_at(const std::vector<ClassicalPath>& paths, std::size_t index);

/// Throws std::invalid_argument on negative rates or weights that do not sum to 1.
void validate(const SourceModel& model);

[[nodiscard]] std::string_view source_name(const SourceModel& model);

/// Alpha_ss = 2 eps / gamma_S.
[[nodiscard]] Complex steady_amplitude(const CoherentDrive& drive, const CouplingConfig& config);

/// Source Hamiltonian on the composite space (zero except for CoherentDrive).
[[nodiscard]] Operator source_hamiltonian(const SourceModel& model, const FockSpec& spec);

/// Model-specific L_S on the composite space. Throws UnsupportedSource for BirthDeathLaser.
[[nodiscard]] Superoperator build_L_S(const SourceModel& model, const FockSpec& spec);

/// Pump, gain and non-lasing channels of a BirthDeathLaser. Throws UnsupportedSource otherwise.
[[nodiscard]] std::vector<JumpChannel> source_jump_channels(const SourceModel& model, const CouplingConfig& config,
                                                            const FockSpec& spec);

/// Deterministic amplitude paths of the source. CoherentDrive follows
/// d alpha/dt = eps - gamma_S alpha / 2 and FreeDecayMixture decays as
/// alpha_0 exp(-gamma_S t / 2). `count` and `seed` are unused for these families.
[[nodiscard]] std::vector<ClassicalPath> classical_paths(const SourceModel& model, const CouplingConfig& config,
                                                         const TimeGrid& grid, int count = 1, std::uint64_t seed = 0);

/// Decaying ring with Brownian phase: alpha_t = r0 exp(-gamma_S t/2) exp(i phi_t),
/// phi_0 uniform on [0, 2 pi), phase increments of variance 2 D dt.
[[nodiscard]] std::vector<ClassicalPath> ring_paths(double r0, double phase_diffusion, double gamma_S,
                                                    const TimeGrid& grid, int count, std::uint64_t seed);

/// D (2 n . n - n^2 . - . n^2), the number-basis dephasing that matches Brownian phase spreading.
[[nodiscard]] Superoperator phase_diffusion_generator(double phase_diffusion, const FockSpec& spec);

/// Largest elementary rate in play; the integrators require dt * max_rate <= 0.05.
[[nodiscard]] double max_rate(const CouplingConfig& config, const SourceModel& model);

}  // namespace cascade
