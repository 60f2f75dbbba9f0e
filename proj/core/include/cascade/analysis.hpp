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

#include <utility>
#include <vector>

#include "cascade/hilbert.hpp"

namespace cascade {

/// Squared Schmidt coefficients of a composite pure state, descending.
[[nodiscard]] std::vector<double> schmidt_weights(const PureState& psi);

/// Entanglement entropy (bits) of a normalized composite pure state.
/// Throws InvalidState when the state is not normalized to 1e-10.
[[nodiscard]] double schmidt_entropy(const PureState& psi);

/// Sum of |negative eigenvalues| of the partial transpose over the qubit.
[[nodiscard]] double negativity(const DensityOperator& rho, const StateTolerance& tol = {});
[[nodiscard]] Matrix partial_transpose_target(const Matrix& rho, const FockSpec& spec);

/// Half the trace norm of rho1 - rho2.
[[nodiscard]] double trace_distance(const Matrix& rho1, const Matrix& rho2);
[[nodiscard]] double trace_distance(const DensityOperator& rho1, const DensityOperator& rho2);

/// Total excitation number of a composite basis index: n for |n,->, n+1 for |n,+>.
[[nodiscard]] inline Index excitation_number(Index composite) { return composite / kQubitDim + composite % kQubitDim; }

struct SupportEntry {
  Index row = 0;
  Index col = 0;
  double magnitude = 0.0;
};

struct SupportReport {
  bool passed = true;
  double max_violation = 0.0;
  std::vector<SupportEntry> offending;  ///< upper-triangle entries above tol, largest first
};

/// Allowed entries pair |n,-> and |n-1,+> with each other and themselves, i.e.
/// the state is block diagonal in the total excitation number.
[[nodiscard]] SupportReport support_pattern_check(const Matrix& rho, double tol, std::size_t max_reported = 32);
[[nodiscard]] SupportReport support_pattern_check(const DensityOperator& rho, double tol,
                                                  std::size_t max_reported = 32);

/// Out-of-span weight of a pure state relative to span{|n,->, |n-1,+>}.
[[nodiscard]] double out_of_span_amplitude(const PureState& psi, int n);

struct RadialWeight {
  double r = 0.0;
  double weight = 1.0;
};

/// Radial distribution, target amplitudes and phase quadrature resolution of a
/// phase-averaged coherent-state mixture.
struct PhaseAveragedSpec {
  std::vector<RadialWeight> radial_weights;
  double a_prime = 1.0;
  double b_prime = 0.0;
  int phase_points = 0;

  void validate(const FockSpec& fock) const;
};

/// Target state a' e^{-i phi/2} |-> + b' e^{i phi/2} |+>.
[[nodiscard]] Vector phase_target_state(double a_prime, double b_prime, double phi);

/// sum_r w_r (1/K) sum_k |r e^{i phi_k}><r e^{i phi_k}| (x) |T_phi_k><T_phi_k|, phi_k = 2 pi k / K.
/// Throws std::invalid_argument when K < 4 n_max.
[[nodiscard]] DensityOperator phase_averaged_state(const PhaseAveragedSpec& spec, const FockSpec& fock);

}  // namespace cascade
