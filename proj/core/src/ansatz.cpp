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

#include "cascade/ansatz.hpp"

#include <algorithm>
#include <cmath>

#include "cascade/analysis.hpp"

namespace cascade {

Matrix DriveHamiltonian::matrix() const {
  const Matrix b = qubit_lowering().matrix();
  return kI * prefactor * (std::conj(alpha) * b - alpha * b.adjoint());
}

ConditionalTargetState solve_separated_target(const ClassicalPath& path, const CouplingConfig& config,
                                              const Matrix& rho_target0) {
  if (path.times.size() != path.alphas.size() || path.times.empty())
    throw std::invalid_argument("solve_separated_target: malformed path");
  if (rho_target0.rows() != kQubitDim || rho_target0.cols() != kQubitDim)
    throw DimensionError("solve_separated_target: initial target state must be 2x2");
  if (auto problem = DensityOperator::unchecked(rho_target0, Layout::Target, FockSpec{}).check(); !problem.empty())
    throw InvalidState("solve_separated_target: initial target state " + problem);

  const CompiledGenerator local(target_local_generator(config));
  auto rhs = [&](Complex alpha, const Matrix& rho) {
    const Matrix h = DriveHamiltonian(alpha, config).matrix();
    return Matrix(local.apply(rho) - kI * (h * rho - rho * h));
  };

  ConditionalTargetState out;
  out.times = path.times;
  out.rhos.reserve(path.size());
  Matrix rho = rho_target0;
  out.rhos.push_back(rho);
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const double dt = path.times[k + 1] - path.times[k];
    const Complex a0 = path.alphas[k];
    const Complex a1 = path.alphas[k + 1];
    const Complex amid = 0.5 * (a0 + a1);
    const Matrix k1 = rhs(a0, rho);
    const Matrix k2 = rhs(amid, rho + 0.5 * dt * k1);
    const Matrix k3 = rhs(amid, rho + 0.5 * dt * k2);
    const Matrix k4 = rhs(a1, rho + dt * k3);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    out.rhos.push_back(rho);
  }
  return out;
}

std::vector<ConditionalTargetState> solve_all(const std::vector<ClassicalPath>& paths, const CouplingConfig& config,
                                              const Matrix& rho_target0) {
  std::vector<ConditionalTargetState> out;
  out.reserve(paths.size());
  for (const auto& p : paths) out.push_back(solve_separated_target(p, config, rho_target0));
  return out;
}

namespace {

Matrix ansatz_matrix(const std::vector<ClassicalPath>& paths, const std::vector<ConditionalTargetState>& conditionals,
                     std::size_t t_index, const FockSpec& fock) {
  if (paths.size() != conditionals.size() || paths.empty())
    throw std::invalid_argument("build_ansatz_state: paths and conditionals are misaligned");
  double total = 0.0;
  for (const auto& p : paths) total += p.weight;
  if (std::abs(total - 1.0) > 1e-10) throw std::invalid_argument("build_ansatz_state: path weights must sum to 1");

  const Index d = fock.composite_dim();
  Matrix rho = Matrix::Zero(d, d);
  for (std::size_t m = 0; m < paths.size(); ++m) {
    const auto& path = paths[m];
    const auto& cond = conditionals[m];
    if (t_index >= path.size() || t_index >= cond.rhos.size() || cond.times.size() != path.size())
      throw std::invalid_argument("build_ansatz_state: sample index outside the path or conditional grid");
    if (path.weight == 0.0) continue;
    const Operator source(coherent_state(path.alphas[t_index], fock).projector());
    rho += path.weight * tensor(source, Operator(cond.rhos[t_index])).matrix();
  }
  return rho;
}

}  // namespace

DensityOperator build_ansatz_state(const std::vector<ClassicalPath>& paths,
                                   const std::vector<ConditionalTargetState>& conditionals, std::size_t t_index,
                                   const FockSpec& fock) {
  return DensityOperator::unchecked(ansatz_matrix(paths, conditionals, t_index, fock), Layout::Composite, fock);
}

ComparisonPoint compare_states(const Matrix& ansatz, const Matrix& full, const FockSpec& fock) {
  if (ansatz.rows() != full.rows() || ansatz.rows() != fock.composite_dim())
    throw DimensionError("compare_states: dimension mismatch");
  ComparisonPoint p;
  p.trace_distance = trace_distance(ansatz, full);
  const Matrix diff = ansatz - full;
  for (Index m = 0; m < fock.source_dim(); ++m)
    for (Index n = 0; n < fock.source_dim(); ++n)
      p.max_block_deviation =
          std::max(p.max_block_deviation, diff.block(m * kQubitDim, n * kQubitDim, kQubitDim, kQubitDim).norm());
  return p;
}

ComparisonReport compare_to_full(const std::vector<DensityOperator>& ansatz, const std::vector<DensityOperator>& full,
                                 double tolerance) {
  if (ansatz.size() != full.size()) throw DimensionError("compare_to_full: series lengths differ");
  ComparisonReport report;
  report.tolerance = tolerance;
  for (std::size_t k = 0; k < ansatz.size(); ++k) {
    if (ansatz[k].dim() != full[k].dim()) throw DimensionError("compare_to_full: state dimensions differ");
    const ComparisonPoint p = compare_states(ansatz[k].matrix(), full[k].matrix(), full[k].fock());
    report.max_trace_distance = std::max(report.max_trace_distance, p.trace_distance);
    report.max_block_deviation = std::max(report.max_block_deviation, p.max_block_deviation);
    report.points.push_back(p);
  }
  report.within_tolerance = report.max_trace_distance < tolerance;
  return report;
}

double generator_residual(const std::vector<ClassicalPath>& paths,
                          const std::vector<ConditionalTargetState>& conditionals, std::size_t k,
                          const Superoperator& generator, const FockSpec& fock) {
  if (k == 0 || paths.empty() || k + 1 >= paths.front().size())
    throw std::invalid_argument("generator_residual: k must be an interior sample");
  const Matrix before = ansatz_matrix(paths, conditionals, k - 1, fock);
  const Matrix here = ansatz_matrix(paths, conditionals, k, fock);
  const Matrix after = ansatz_matrix(paths, conditionals, k + 1, fock);
  const double span = paths.front().times[k + 1] - paths.front().times[k - 1];
  return ((after - before) / span - generator.apply(here)).norm();
}

}  // namespace cascade
