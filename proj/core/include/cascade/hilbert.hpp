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

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace cascade {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

inline constexpr Complex kI{0.0, 1.0};

/// Raised when operand dimensions or subsystem layouts do not fit together.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a state violates its trace, norm, Hermiticity or positivity invariants.
class InvalidState : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fock truncation of the laser mode. The source factor has n_max + 1 levels
/// and the composite source (x) qubit space has 2 (n_max + 1).
struct FockSpec {
  int n_max = 1;

  explicit FockSpec(int n = 1);
  [[nodiscard]] Index source_dim() const { return n_max + 1; }
  [[nodiscard]] Index composite_dim() const { return 2 * (n_max + 1); }
};

/// Qubit basis order is (|->, |+>). Composite index = fock * 2 + qubit.
inline constexpr Index kGround = 0;
inline constexpr Index kExcited = 1;
inline constexpr Index kQubitDim = 2;

[[nodiscard]] inline Index composite_index(Index fock, Index qubit) { return fock * kQubitDim + qubit; }

enum class Factor { Source, Target };
enum class Layout { Source, Target, Composite };

[[nodiscard]] std::string_view to_string(Layout layout);

/// Dense operator with a human-readable label.
class Operator {
 public:
  Operator() = default;
  explicit Operator(Matrix matrix, std::string label = {});

  [[nodiscard]] Index dim() const { return matrix_.rows(); }
  [[nodiscard]] const Matrix& matrix() const { return matrix_; }
  [[nodiscard]] const std::string& label() const { return label_; }

  [[nodiscard]] Operator adjoint() const;
  [[nodiscard]] Operator with_label(std::string label) const;
  [[nodiscard]] bool is_zero(double tol = 0.0) const;

  [[nodiscard]] Vector operator*(const Vector& v) const;
  friend Operator operator*(const Operator& a, const Operator& b);
  friend Operator operator+(const Operator& a, const Operator& b);
  friend Operator operator-(const Operator& a, const Operator& b);
  friend Operator operator*(Complex s, const Operator& a);
  friend Operator operator*(double s, const Operator& a);

 private:
  Matrix matrix_;
  std::string label_;
};

[[nodiscard]] Operator identity(Index dim);
[[nodiscard]] Operator zero_operator(Index dim);

/// Truncated annihilation operator, <n-1|a|n> = sqrt(n).
[[nodiscard]] Operator annihilation(const FockSpec& spec);
[[nodiscard]] Operator creation(const FockSpec& spec);
[[nodiscard]] Operator number(const FockSpec& spec);

/// Qubit lowering operator, <-|b|+> = 1.
[[nodiscard]] Operator qubit_lowering();

/// Kronecker product, left factor major.
[[nodiscard]] Operator tensor(const Operator& left, const Operator& right);

/// Lifts a source- or target-factor operator to the composite space.
[[nodiscard]] Operator embed(const Operator& op, Factor which, const FockSpec& spec);

/// Normalized state vector tagged with its subsystem layout.
class PureState {
 public:
  PureState(Vector amplitudes, Layout layout, FockSpec spec);

  [[nodiscard]] const Vector& amplitudes() const { return amplitudes_; }
  [[nodiscard]] Layout layout() const { return layout_; }
  [[nodiscard]] const FockSpec& fock() const { return fock_; }
  [[nodiscard]] Index dim() const { return amplitudes_.size(); }
  [[nodiscard]] double norm() const { return amplitudes_.norm(); }

  /// Rescales to unit norm; throws InvalidState on a zero vector.
  void normalize();
  [[nodiscard]] Matrix projector() const;

 private:
  Vector amplitudes_;
  Layout layout_;
  FockSpec fock_;
};

struct StateTolerance {
  double hermitian = 1e-12;
  double trace = 1e-10;
  double min_eigenvalue = -1e-10;
};

/// Density operator on the source, the target or the composite space.
class DensityOperator {
 public:
  /// Checks every invariant of `tol`; throws InvalidState otherwise.
  DensityOperator(Matrix matrix, Layout layout, FockSpec spec, StateTolerance tol = {});

  /// Skips the invariant checks; callers take responsibility.
  [[nodiscard]] static DensityOperator unchecked(Matrix matrix, Layout layout, FockSpec spec);
  [[nodiscard]] static DensityOperator from_pure(const PureState& psi);

  [[nodiscard]] const Matrix& matrix() const { return matrix_; }
  [[nodiscard]] Layout layout() const { return layout_; }
  [[nodiscard]] const FockSpec& fock() const { return fock_; }
  [[nodiscard]] Index dim() const { return matrix_.rows(); }

  [[nodiscard]] Complex trace() const { return matrix_.trace(); }
  [[nodiscard]] double purity() const;
  [[nodiscard]] double min_eigenvalue() const;
  [[nodiscard]] double hermiticity_residual() const;

  /// Describes the first violated invariant, or returns an empty string.
  [[nodiscard]] std::string check(const StateTolerance& tol = {}) const;

 private:
  DensityOperator(Matrix matrix, Layout layout, FockSpec spec, bool);

  Matrix matrix_;
  Layout layout_;
  FockSpec fock_;
};

[[nodiscard]] Index layout_dim(Layout layout, const FockSpec& spec);

[[nodiscard]] PureState fock_state(int n, const FockSpec& spec);
[[nodiscard]] PureState qubit_state(Complex ground, Complex excited);
[[nodiscard]] PureState product(const PureState& source, const PureState& target);
[[nodiscard]] DensityOperator product(const DensityOperator& source, const DensityOperator& target);

/// Smallest n_max that keeps the Poisson tail of |alpha> below the factorization tolerances.
[[nodiscard]] int required_n_max(Complex alpha);
[[nodiscard]] bool coherent_truncation_adequate(Complex alpha, const FockSpec& spec);

/// Truncated coherent state, renormalized on the kept levels. Emits a warning
/// through the installed handler when the truncation is inadequate for alpha.
[[nodiscard]] PureState coherent_state(Complex alpha, const FockSpec& spec);

/// Reduced state on the kept factor of a composite density operator.
[[nodiscard]] DensityOperator partial_trace(const DensityOperator& rho, Factor keep);
[[nodiscard]] Matrix partial_trace(const Matrix& rho, Factor keep, const FockSpec& spec);

using WarningHandler = std::function<void(std::string_view)>;

/// Installs a process-wide warning sink and returns the previous one.
/// The default handler prints to std::clog.
WarningHandler set_warning_handler(WarningHandler handler);
void warn(std::string_view message);

}  // namespace cascade
