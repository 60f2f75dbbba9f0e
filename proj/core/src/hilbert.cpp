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

#include "cascade/hilbert.hpp"

#include <cmath>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>
#include <utility>

#include <Eigen/Eigenvalues>

namespace cascade {

namespace {

std::mutex& warning_mutex() {
  static std::mutex m;
  return m;
}

WarningHandler& warning_handler() {
  // Repeated messages are printed once.
  static WarningHandler handler = [](std::string_view msg) {
    static std::set<std::string, std::less<>> seen;
    if (seen.emplace(msg).second) std::clog << "warning: " << msg << '\n';
  };
  return handler;
}

void require_same_dim(const Operator& a, const Operator& b, const char* what) {
  if (a.dim() != b.dim()) {
    std::ostringstream os;
    os << what << ": dimension mismatch (" << a.dim() << " vs " << b.dim() << ")";
    throw DimensionError(os.str());
  }
}

}  // namespace

WarningHandler set_warning_handler(WarningHandler handler) {
  std::lock_guard lock(warning_mutex());
  return std::exchange(warning_handler(), std::move(handler));
}

void warn(std::string_view message) {
  std::lock_guard lock(warning_mutex());
  if (warning_handler()) warning_handler()(message);
}

FockSpec::FockSpec(int n) : n_max(n) {
  if (n < 1) throw std::invalid_argument("FockSpec: n_max must be >= 1");
}

std::string_view to_string(Layout layout) {
  switch (layout) {
    case Layout::Source:
      return "source";
    case Layout::Target:
      return "target";
    case Layout::Composite:
      return "source(x)target";
  }
  return "unknown";
}

Index layout_dim(Layout layout, const FockSpec& spec) {
  switch (layout) {
    case Layout::Source:
      return spec.source_dim();
    case Layout::Target:
      return kQubitDim;
    case Layout::Composite:
      return spec.composite_dim();
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Operator

Operator::Operator(Matrix matrix, std::string label) : matrix_(std::move(matrix)), label_(std::move(label)) {
  if (matrix_.rows() != matrix_.cols()) throw DimensionError("Operator: matrix must be square");
}

Operator Operator::adjoint() const { return Operator(matrix_.adjoint(), label_ + "^dag"); }

Operator Operator::with_label(std::string label) const { return Operator(matrix_, std::move(label)); }

bool Operator::is_zero(double tol) const { return matrix_.size() == 0 || matrix_.cwiseAbs().maxCoeff() <= tol; }

Vector Operator::operator*(const Vector& v) const {
  if (v.size() != dim()) throw DimensionError("Operator * vector: dimension mismatch");
  return matrix_ * v;
}

Operator operator*(const Operator& a, const Operator& b) {
  require_same_dim(a, b, "Operator product");
  return Operator(a.matrix_ * b.matrix_, a.label_ + " " + b.label_);
}

Operator operator+(const Operator& a, const Operator& b) {
  require_same_dim(a, b, "Operator sum");
  return Operator(a.matrix_ + b.matrix_, a.label_ + " + " + b.label_);
}

Operator operator-(const Operator& a, const Operator& b) {
  require_same_dim(a, b, "Operator difference");
  return Operator(a.matrix_ - b.matrix_, a.label_ + " - " + b.label_);
}

Operator operator*(Complex s, const Operator& a) { return Operator(s * a.matrix_, a.label_); }

Operator operator*(double s, const Operator& a) { return Operator(s * a.matrix_, a.label_); }

Operator identity(Index dim) { return Operator(Matrix::Identity(dim, dim), "1"); }

Operator zero_operator(Index dim) { return Operator(Matrix::Zero(dim, dim), "0"); }

Operator annihilation(const FockSpec& spec) {
  const Index d = spec.source_dim();
  Matrix m = Matrix::Zero(d, d);
  for (Index n = 1; n < d; ++n) m(n - 1, n) = std::sqrt(static_cast<double>(n));
  return Operator(std::move(m), "a");
}

Operator creation(const FockSpec& spec) { return annihilation(spec).adjoint().with_label("a^dag"); }

Operator number(const FockSpec& spec) {
  const Index d = spec.source_dim();
  Matrix m = Matrix::Zero(d, d);
  for (Index n = 0; n < d; ++n) m(n, n) = static_cast<double>(n);
  return Operator(std::move(m), "n");
}

Operator qubit_lowering() {
  Matrix m = Matrix::Zero(kQubitDim, kQubitDim);
  m(kGround, kExcited) = 1.0;
  return Operator(std::move(m), "b");
}

Operator tensor(const Operator& left, const Operator& right) {
  const Matrix& l = left.matrix();
  const Matrix& r = right.matrix();
  Matrix out(l.rows() * r.rows(), l.cols() * r.cols());
  for (Index i = 0; i < l.rows(); ++i)
    for (Index j = 0; j < l.cols(); ++j) out.block(i * r.rows(), j * r.cols(), r.rows(), r.cols()) = l(i, j) * r;
  return Operator(std::move(out), left.label() + "(x)" + right.label());
}

Operator embed(const Operator& op, Factor which, const FockSpec& spec) {
  if (which == Factor::Source) {
    if (op.dim() != spec.source_dim()) throw DimensionError("embed: source operator has wrong dimension");
    return tensor(op, identity(kQubitDim)).with_label(op.label());
  }
  if (op.dim() != kQubitDim) throw DimensionError("embed: target operator must be 2x2");
  return tensor(identity(spec.source_dim()), op).with_label(op.label());
}

// ---------------------------------------------------------------------------
// States

PureState::PureState(Vector amplitudes, Layout layout, FockSpec spec)
    : amplitudes_(std::move(amplitudes)), layout_(layout), fock_(spec) {
  if (amplitudes_.size() != layout_dim(layout_, fock_)) throw DimensionError("PureState: size does not match layout");
}

void PureState::normalize() {
  const double n = amplitudes_.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw InvalidState("PureState: cannot normalize a zero or non-finite vector");
  amplitudes_ /= n;
}

Matrix PureState::projector() const { return amplitudes_ * amplitudes_.adjoint(); }

DensityOperator::DensityOperator(Matrix matrix, Layout layout, FockSpec spec, bool)
    : matrix_(std::move(matrix)), layout_(layout), fock_(spec) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() != layout_dim(layout_, fock_))
    throw DimensionError("DensityOperator: matrix does not match layout " + std::string(to_string(layout_)));
}

DensityOperator::DensityOperator(Matrix matrix, Layout layout, FockSpec spec, StateTolerance tol)
    : DensityOperator(std::move(matrix), layout, spec, true) {
  if (auto problem = check(tol); !problem.empty()) throw InvalidState("DensityOperator: " + problem);
}

DensityOperator DensityOperator::unchecked(Matrix matrix, Layout layout, FockSpec spec) {
  return DensityOperator(std::move(matrix), layout, spec, true);
}

DensityOperator DensityOperator::from_pure(const PureState& psi) {
  return DensityOperator(psi.projector(), psi.layout(), psi.fock(), true);
}

double DensityOperator::purity() const { return (matrix_ * matrix_).trace().real(); }

double DensityOperator::hermiticity_residual() const { return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff(); }

double DensityOperator::min_eigenvalue() const {
  const Matrix herm = 0.5 * (matrix_ + matrix_.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

std::string DensityOperator::check(const StateTolerance& tol) const {
  std::ostringstream os;
  os.precision(3);
  if (!matrix_.allFinite()) return "non-finite entries";
  if (const double h = hermiticity_residual(); h > tol.hermitian) {
    os << "not Hermitian (residual " << h << ")";
    return os.str();
  }
  if (const Complex tr = trace(); std::abs(tr - 1.0) > tol.trace) {
    os << "trace " << tr.real() << " deviates from 1 by " << std::abs(tr - 1.0);
    return os.str();
  }
  if (const double lo = min_eigenvalue(); lo < tol.min_eigenvalue) {
    os << "negative eigenvalue " << lo;
    return os.str();
  }
  return {};
}

PureState fock_state(int n, const FockSpec& spec) {
  if (n < 0 || n > spec.n_max) throw DimensionError("fock_state: photon number outside truncation");
  Vector v = Vector::Zero(spec.source_dim());
  v(n) = 1.0;
  return PureState(std::move(v), Layout::Source, spec);
}

PureState qubit_state(Complex ground, Complex excited) {
  Vector v(kQubitDim);
  v << ground, excited;
  PureState psi(std::move(v), Layout::Target, FockSpec{});
  psi.normalize();
  return psi;
}

PureState product(const PureState& source, const PureState& target) {
  if (source.layout() != Layout::Source || target.layout() != Layout::Target)
    throw DimensionError("product: expected (source, target) states");
  Vector v(source.dim() * kQubitDim);
  for (Index n = 0; n < source.dim(); ++n)
    for (Index q = 0; q < kQubitDim; ++q) v(composite_index(n, q)) = source.amplitudes()(n) * target.amplitudes()(q);
  return PureState(std::move(v), Layout::Composite, source.fock());
}

DensityOperator product(const DensityOperator& source, const DensityOperator& target) {
  if (source.layout() != Layout::Source || target.layout() != Layout::Target)
    throw DimensionError("product: expected (source, target) states");
  Operator joint = tensor(Operator(source.matrix()), Operator(target.matrix()));
  return DensityOperator::unchecked(joint.matrix(), Layout::Composite, source.fock());
}

int required_n_max(Complex alpha) {
  const double r = std::abs(alpha);
  return static_cast<int>(std::ceil(r * r + 8.0 * r + 10.0));
}

bool coherent_truncation_adequate(Complex alpha, const FockSpec& spec) { return spec.n_max >= required_n_max(alpha); }

PureState coherent_state(Complex alpha, const FockSpec& spec) {
  if (!coherent_truncation_adequate(alpha, spec)) {
    std::ostringstream os;
    os << "coherent_state: n_max=" << spec.n_max << " is below the recommended " << required_n_max(alpha)
       << " for this amplitude";
    warn(os.str());
  }
  // Recurrence c_n = c_{n-1} alpha / sqrt(n) avoids overflowing n!.
  Vector v(spec.source_dim());
  v(0) = std::exp(-0.5 * std::norm(alpha));
  for (Index n = 1; n < v.size(); ++n) v(n) = v(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  PureState psi(std::move(v), Layout::Source, spec);
  psi.normalize();
  return psi;
}

Matrix partial_trace(const Matrix& rho, Factor keep, const FockSpec& spec) {
  if (rho.rows() != spec.composite_dim() || rho.cols() != spec.composite_dim())
    throw DimensionError("partial_trace: expected a composite-space matrix");
  const Index ds = spec.source_dim();
  if (keep == Factor::Source) {
    Matrix out = Matrix::Zero(ds, ds);
    for (Index m = 0; m < ds; ++m)
      for (Index n = 0; n < ds; ++n)
        for (Index q = 0; q < kQubitDim; ++q) out(m, n) += rho(composite_index(m, q), composite_index(n, q));
    return out;
  }
  Matrix out = Matrix::Zero(kQubitDim, kQubitDim);
  for (Index p = 0; p < kQubitDim; ++p)
    for (Index q = 0; q < kQubitDim; ++q)
      for (Index n = 0; n < ds; ++n) out(p, q) += rho(composite_index(n, p), composite_index(n, q));
  return out;
}

DensityOperator partial_trace(const DensityOperator& rho, Factor keep) {
  if (rho.layout() != Layout::Composite) throw DimensionError("partial_trace: state is not on the composite space");
  return DensityOperator::unchecked(partial_trace(rho.matrix(), keep, rho.fock()),
                                    keep == Factor::Source ? Layout::Source : Layout::Target, rho.fock());
}

}  // namespace cascade
