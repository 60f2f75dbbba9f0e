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

#include "cascade/liouvillian.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace cascade {

namespace {

bool is_identity(const Matrix& m) { return m.isIdentity(0.0); }

void require_dim(const Superoperator& s, Index dim, const char* what) {
  if (s.dim() != dim) {
    std::ostringstream os;
    os << what << ": superoperator dim " << s.dim() << " does not match " << dim;
    throw DimensionError(os.str());
  }
}

}  // namespace

double CouplingConfig::coupling() const { return std::sqrt(gamma_S * gamma_Tf); }

void CouplingConfig::validate() const {
  if (!(gamma_S >= 0.0) || !(gamma_Tf >= 0.0) || !(gamma_Ts >= 0.0))
    throw std::invalid_argument("CouplingConfig: rates must be non-negative");
  if (!std::isfinite(gamma_S) || !std::isfinite(gamma_T())) throw std::invalid_argument("CouplingConfig: rates must be finite");
  if (!std::isfinite(delta)) throw std::invalid_argument("CouplingConfig: delta must be finite");
}

// ---------------------------------------------------------------------------
// Superoperator

Superoperator::Superoperator(Index dim, std::string label) : dim_(dim), label_(std::move(label)) {}

Superoperator& Superoperator::add(Operator left, Operator right, Complex coeff) {
  if (left.dim() != dim_ || right.dim() != dim_) throw DimensionError("Superoperator::add: operator dimension mismatch");
  terms_.push_back({std::move(left), std::move(right), coeff});
  return *this;
}

Superoperator& Superoperator::add_hamiltonian(const Operator& h) {
  if (h.is_zero()) return *this;
  add(h, identity(dim_), -kI);
  add(identity(dim_), h, kI);
  return *this;
}

Superoperator& Superoperator::add_dissipator(const Operator& c, double rate) {
  if (rate == 0.0 || c.is_zero()) return *this;
  const Operator cd = c.adjoint();
  const Operator cdc = cd * c;
  add(c, cd, rate);
  add(cdc, identity(dim_), -0.5 * rate);
  add(identity(dim_), cdc, -0.5 * rate);
  return *this;
}

Superoperator Superoperator::with_label(std::string label) const {
  Superoperator out = *this;
  out.label_ = std::move(label);
  return out;
}

Superoperator operator+(const Superoperator& a, const Superoperator& b) {
  if (a.dim_ != b.dim_) throw DimensionError("Superoperator sum: dimension mismatch");
  Superoperator out(a.dim_, a.label_ + " + " + b.label_);
  out.terms_ = a.terms_;
  out.terms_.insert(out.terms_.end(), b.terms_.begin(), b.terms_.end());
  return out;
}

Matrix Superoperator::apply(const Matrix& rho) const {
  if (rho.rows() != dim_ || rho.cols() != dim_) throw DimensionError("Superoperator::apply: dimension mismatch");
  Matrix out = Matrix::Zero(dim_, dim_);
  for (const auto& t : terms_) out.noalias() += t.coeff * (t.left.matrix() * rho * t.right.matrix());
  return out;
}

Matrix apply(const Superoperator& superop, const Matrix& rho) { return superop.apply(rho); }

// ---------------------------------------------------------------------------
// CompiledGenerator

CompiledGenerator::CompiledGenerator(const Superoperator& superop)
    : dim_(superop.dim()), pre_(Matrix::Zero(dim_, dim_)), post_(Matrix::Zero(dim_, dim_)) {
  for (const auto& t : superop.terms()) {
    const bool left_id = is_identity(t.left.matrix());
    const bool right_id = is_identity(t.right.matrix());
    if (right_id) {
      pre_ += t.coeff * t.left.matrix();
    } else if (left_id) {
      post_ += t.coeff * t.right.matrix();
    } else {
      sandwiches_.push_back({t.coeff * t.left.matrix(), t.right.matrix()});
    }
  }
}

void CompiledGenerator::apply(const Matrix& rho, Matrix& out) const {
  out.noalias() = pre_ * rho;
  out.noalias() += rho * post_;
  for (const auto& s : sandwiches_) out.noalias() += s.left * rho * s.right;
}

Matrix CompiledGenerator::apply(const Matrix& rho) const {
  if (rho.rows() != dim_ || rho.cols() != dim_) throw DimensionError("CompiledGenerator::apply: dimension mismatch");
  Matrix out(dim_, dim_);
  apply(rho, out);
  return out;
}

// ---------------------------------------------------------------------------
// Vectorization

Vector vectorize(const Matrix& rho) { return Eigen::Map<const Vector>(rho.data(), rho.size()); }

Matrix unvectorize(const Vector& v, Index dim) {
  if (v.size() != dim * dim) throw DimensionError("unvectorize: size mismatch");
  return Eigen::Map<const Matrix>(v.data(), dim, dim);
}

Matrix to_matrix(const Superoperator& superop, Index max_dim) {
  const Index d = superop.dim();
  if (d > max_dim) {
    std::ostringstream os;
    os << "to_matrix: dim " << d << " exceeds the limit " << max_dim;
    throw DimensionError(os.str());
  }
  Matrix out = Matrix::Zero(d * d, d * d);
  for (const auto& t : superop.terms()) {
    const Matrix rt = t.right.matrix().transpose();
    const Matrix& l = t.left.matrix();
    for (Index i = 0; i < d; ++i)
      for (Index j = 0; j < d; ++j) {
        const Complex c = t.coeff * rt(i, j);
        if (c != Complex{}) out.block(i * d, j * d, d, d) += c * l;
      }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Model operators

Operator build_H_T(const CouplingConfig& config, const FockSpec& spec) {
  const Operator b = qubit_lowering();
  return embed(config.delta * (b.adjoint() * b), Factor::Target, spec).with_label("H_T");
}

Operator build_H_ST(const CouplingConfig& config, const FockSpec& spec) {
  const Operator a = embed(annihilation(spec), Factor::Source, spec);
  const Operator b = embed(qubit_lowering(), Factor::Target, spec);
  const Operator h = (0.5 * kI * config.coupling()) * (a.adjoint() * b - a * b.adjoint());
  return h.with_label("H_ST");
}

JumpOperators build_jump_ops(const CouplingConfig& config, const FockSpec& spec) {
  const Operator a = embed(annihilation(spec), Factor::Source, spec);
  const Operator b = embed(qubit_lowering(), Factor::Target, spec);
  return {(std::sqrt(config.gamma_S) * a + std::sqrt(config.gamma_Tf) * b).with_label("f"),
          (std::sqrt(config.gamma_Ts) * b).with_label("s")};
}

Superoperator build_L_T(const CouplingConfig& config, const FockSpec& spec) {
  Superoperator l(spec.composite_dim(), "L_T");
  l.add_hamiltonian(build_H_T(config, spec));
  l.add_dissipator(build_jump_ops(config, spec).side);
  return l;
}

Superoperator build_L_ST(const CouplingConfig& config, const FockSpec& spec) {
  Superoperator l(spec.composite_dim(), "L_ST");
  l.add_hamiltonian(build_H_ST(config, spec));
  l.add_dissipator(build_jump_ops(config, spec).forward);
  return l;
}

Superoperator target_local_generator(const CouplingConfig& config) {
  const Operator b = qubit_lowering();
  Superoperator l(kQubitDim, "L'_T(local)");
  l.add_hamiltonian(config.delta * (b.adjoint() * b));
  l.add_dissipator(b, config.gamma_T());
  return l;
}

bool acts_on_source_only(const Operator& op, const FockSpec& spec, double tol) {
  if (op.dim() != spec.composite_dim()) return false;
  const Matrix& m = op.matrix();
  for (Index i = 0; i < spec.source_dim(); ++i)
    for (Index j = 0; j < spec.source_dim(); ++j) {
      const auto block = m.block(i * kQubitDim, j * kQubitDim, kQubitDim, kQubitDim);
      if (std::abs(block(0, 1)) > tol || std::abs(block(1, 0)) > tol || std::abs(block(0, 0) - block(1, 1)) > tol)
        return false;
    }
  return true;
}

Superoperator RegroupedGenerators::total() const { return (source + target + coupling).with_label("L'_total"); }

RegroupedGenerators regroup(const Superoperator& source_generator, const CouplingConfig& config,
                            const FockSpec& spec) {
  const Index d = spec.composite_dim();
  require_dim(source_generator, d, "regroup");
  for (const auto& t : source_generator.terms()) {
    if (!acts_on_source_only(t.left, spec) || !acts_on_source_only(t.right, spec))
      throw std::invalid_argument("regroup: source generator touches the target factor");
  }
  const Operator a = embed(annihilation(spec), Factor::Source, spec);
  const Operator b = embed(qubit_lowering(), Factor::Target, spec);
  const Operator id = identity(d);

  Superoperator source = source_generator.with_label("L'_S");
  source.add_dissipator(a, config.gamma_S);

  Superoperator target(d, "L'_T");
  target.add_hamiltonian(build_H_T(config, spec));
  target.add_dissipator(b, config.gamma_T());

  // After H_ST cancels the a^dag b pieces, every a acts from the left and
  // every a^dag from the right.
  Superoperator coupling(d, "L'_ST");
  const double k = config.coupling();
  if (k != 0.0) {
    coupling.add(a, b.adjoint(), k);
    coupling.add(b, a.adjoint(), k);
    coupling.add(b.adjoint() * a, id, -k);
    coupling.add(id, a.adjoint() * b, -k);
  }
  return {std::move(source), std::move(target), std::move(coupling)};
}

Operator build_nonhermitian_H(const CouplingConfig& config, const FockSpec& spec) {
  const Operator a = embed(annihilation(spec), Factor::Source, spec);
  const Operator b = embed(qubit_lowering(), Factor::Target, spec);
  const Operator h = (-kI * config.coupling()) * (a * b.adjoint()) + (-0.5 * kI * config.gamma_S) * (a.adjoint() * a) +
                     (-0.5 * kI * config.gamma_T()) * (b.adjoint() * b) + build_H_T(config, spec);
  return h.with_label("H_nh");
}

}  // namespace cascade
