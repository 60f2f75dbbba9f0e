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

#include <vector>

#include "cascade/hilbert.hpp"
#include "cascade/liouvillian.hpp"
#include "cascade/sources.hpp"

namespace cascade {

/// Classical-field drive of the target, i sqrt(gamma_S gamma_Tf) (alpha^* b - alpha b^dag).
struct DriveHamiltonian {
  Complex alpha;
  double prefactor = 0.0;

  DriveHamiltonian(Complex amplitude, const CouplingConfig& config)
      : alpha(amplitude), prefactor(config.coupling()) {}

  [[nodiscard]] Matrix matrix() const;
};

/// Target state conditioned on one classical amplitude path.
struct ConditionalTargetState {
  std::vector<double> times;
  std::vector<Matrix> rhos;  ///< 2x2, qubit basis (|->, |+>)
};

/// RK4 solution of d rho_T/dt = L'_T rho_T - i [H_drive(alpha_t), rho_T] on the
/// path's own time grid, with alpha_t linear between samples.
[[nodiscard]] ConditionalTargetState solve_separated_target(const ClassicalPath& path, const CouplingConfig& config,
                                                            const Matrix& rho_target0);

/// sum_m w_m |alpha_m(t)><alpha_m(t)| (x) rho_{T|alpha_m}(t) at sample `t_index`.
[[nodiscard]] DensityOperator build_ansatz_state(const std::vector<ClassicalPath>& paths,
                                                 const std::vector<ConditionalTargetState>& conditionals,
                                                 std::size_t t_index, const FockSpec& fock);

/// Solves every path and returns the conditionals in path order.
[[nodiscard]] std::vector<ConditionalTargetState> solve_all(const std::vector<ClassicalPath>& paths,
                                                            const CouplingConfig& config, const Matrix& rho_target0);

struct ComparisonPoint {
  double trace_distance = 0.0;
  double max_block_deviation = 0.0;  ///< largest Frobenius norm of a 2x2 (m, n) source block of the difference
};

struct ComparisonReport {
  std::vector<ComparisonPoint> points;
  double tolerance = 0.0;
  double max_trace_distance = 0.0;
  double max_block_deviation = 0.0;
  bool within_tolerance = true;
};

[[nodiscard]] ComparisonPoint compare_states(const Matrix& ansatz, const Matrix& full, const FockSpec& fock);

/// Pointwise comparison of two equally sampled state series.
[[nodiscard]] ComparisonReport compare_to_full(const std::vector<DensityOperator>& ansatz,
                                               const std::vector<DensityOperator>& full, double tolerance = 1e-6);

/// Frobenius norm of (rho(t_{k+1}) - rho(t_{k-1})) / (t_{k+1} - t_{k-1}) - L rho(t_k)
/// for the ansatz built from `paths` and `conditionals`.
[[nodiscard]] double generator_residual(const std::vector<ClassicalPath>& paths,
                                        const std::vector<ConditionalTargetState>& conditionals, std::size_t k,
                                        const Superoperator& generator, const FockSpec& fock);

}  // namespace cascade
