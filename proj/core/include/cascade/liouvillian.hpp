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

#include <string>
#include <vector>

#include "cascade/hilbert.hpp"

namespace cascade {

/// Rates of the one-way source -> target coupling. hbar = 1.
struct CouplingConfig {
  double gamma_S = 1.0;   ///< source output bandwidth
  double gamma_Tf = 0.5;  ///< target forward (input) channel
  double gamma_Ts = 0.5;  ///< target side channel
  double delta = 0.0;     ///< target detuning, H_T = delta b^dag b

  [[nodiscard]] double gamma_T() const { return gamma_Tf + gamma_Ts; }
  /// sqrt(gamma_S gamma_Tf), the cascaded coupling strength.
  [[nodiscard]] double coupling() const;
  /// Throws std::invalid_argument when a rate is negative or not finite.
  void validate() const;
};

/// One sandwich term rho -> coeff * left * rho * right.
struct SuperoperatorTerm {
  Operator left;
  Operator right;
  Complex coeff{1.0, 0.0};
};

/// Superoperator stored as a list of sandwich terms, so that non-Lindblad
/// pieces of a regrouped generator are representable uniformly.
class Superoperator {
 public:
  Superoperator() = default;
  Superoperator(Index dim, std::string label);

  [[nodiscard]] Index dim() const { return dim_; }
  [[nodiscard]] const std::string& label() const { return label_; }
  [[nodiscard]] const std::vector<SuperoperatorTerm>& terms() const { return terms_; }
  [[nodiscard]] bool empty() const { return terms_.empty(); }

  Superoperator& add(Operator left, Operator right, Complex coeff);
  /// Adds -i [H, .].
  Superoperator& add_hamiltonian(const Operator& h);
  /// Adds rate * (C . C^dag - 1/2 C^dag C . - 1/2 . C^dag C).
  Superoperator& add_dissipator(const Operator& c, double rate = 1.0);

  [[nodiscard]] Superoperator with_label(std::string label) const;
  friend Superoperator operator+(const Superoperator& a, const Superoperator& b);

  /// sum_k coeff_k L_k rho R_k.
  [[nodiscard]] Matrix apply(const Matrix& rho) const;

 private:
  Index dim_ = 0;
  std::string label_;
  std::vector<SuperoperatorTerm> terms_;
};

/// Pre-multiplied form A rho + rho B + sum_k L_k rho R_k used by the integrators.
class CompiledGenerator {
 public:
  CompiledGenerator() = default;
  explicit CompiledGenerator(const Superoperator& superop);

  [[nodiscard]] Index dim() const { return dim_; }
  void apply(const Matrix& rho, Matrix& out) const;
  [[nodiscard]] Matrix apply(const Matrix& rho) const;

 private:
  struct Sandwich {
    Matrix left;
    Matrix right;
  };
  Index dim_ = 0;
  Matrix pre_;
  Matrix post_;
  std::vector<Sandwich> sandwiches_;
};

[[nodiscard]] Matrix apply(const Superoperator& superop, const Matrix& rho);

/// Column-stacking matrix representation, sum_k coeff_k (R_k^T (x) L_k).
/// Throws DimensionError when superop.dim() exceeds `max_dim`.
[[nodiscard]] Matrix to_matrix(const Superoperator& superop, Index max_dim = 64);

[[nodiscard]] Vector vectorize(const Matrix& rho);
[[nodiscard]] Matrix unvectorize(const Vector& v, Index dim);

[[nodiscard]] Operator build_H_T(const CouplingConfig& config, const FockSpec& spec);
[[nodiscard]] Operator build_H_ST(const CouplingConfig& config, const FockSpec& spec);

struct JumpOperators {
  Operator forward;  ///< f = sqrt(gamma_S) a + sqrt(gamma_Tf) b
  Operator side;     ///< s = sqrt(gamma_Ts) b
};
[[nodiscard]] JumpOperators build_jump_ops(const CouplingConfig& config, const FockSpec& spec);

[[nodiscard]] Superoperator build_L_T(const CouplingConfig& config, const FockSpec& spec);
[[nodiscard]] Superoperator build_L_ST(const CouplingConfig& config, const FockSpec& spec);

struct RegroupedGenerators {
  Superoperator source;    ///< L_S plus the gamma_S damping of a
  Superoperator target;    ///< qubit damping at the total rate gamma_T
  Superoperator coupling;  ///< cross terms only; not of Lindblad form on its own

  [[nodiscard]] Superoperator total() const;
};

/// Redistributes L_S + L_T + L_ST into source-only, target-only and cross parts.
/// `source_generator` must act on the source factor only.
[[nodiscard]] RegroupedGenerators regroup(const Superoperator& source_generator, const CouplingConfig& config,
                                          const FockSpec& spec);

/// Target-local (2x2) generator -i[H_T, .] + gamma_T D[b].
[[nodiscard]] Superoperator target_local_generator(const CouplingConfig& config);

/// H_ST - (i/2) s^dag s - (i/2) f^dag f, written in its simplified form with H_T added.
[[nodiscard]] Operator build_nonhermitian_H(const CouplingConfig& config, const FockSpec& spec);

/// True iff `op` has the form A (x) 1 on the composite space.
[[nodiscard]] bool acts_on_source_only(const Operator& op, const FockSpec& spec, double tol = 0.0);

}  // namespace cascade
