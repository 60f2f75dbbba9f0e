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

#include "cascade/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace cascade {

std::vector<double> schmidt_weights(const PureState& psi) {
  if (psi.layout() != Layout::Composite) throw DimensionError("schmidt_weights: expected a composite state");
  const Index ds = psi.fock().source_dim();
  // Row n holds the (|n,->, |n,+>) amplitudes.
  const Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> coeffs(
      psi.amplitudes().data(), ds, kQubitDim);
  const Matrix dense = coeffs;
  Eigen::JacobiSVD<Matrix> svd(dense);
  std::vector<double> w;
  for (Index i = 0; i < svd.singularValues().size(); ++i) w.push_back(std::pow(svd.singularValues()(i), 2));
  std::sort(w.rbegin(), w.rend());
  return w;
}

double schmidt_entropy(const PureState& psi) {
  if (std::abs(psi.norm() - 1.0) > 1e-10) throw InvalidState("schmidt_entropy: state is not normalized");
  double s = 0.0;
  for (double p : schmidt_weights(psi))
    if (p > 0.0) s -= p * std::log2(p);
  return std::max(0.0, s);
}

Matrix partial_transpose_target(const Matrix& rho, const FockSpec& spec) {
  if (rho.rows() != spec.composite_dim()) throw DimensionError("partial_transpose_target: expected composite matrix");
  Matrix out(rho.rows(), rho.cols());
  const Index ds = spec.source_dim();
  for (Index m = 0; m < ds; ++m)
    for (Index n = 0; n < ds; ++n)
      for (Index p = 0; p < kQubitDim; ++p)
        for (Index q = 0; q < kQubitDim; ++q)
          out(composite_index(m, p), composite_index(n, q)) = rho(composite_index(m, q), composite_index(n, p));
  return out;
}

double negativity(const DensityOperator& rho, const StateTolerance& tol) {
  if (rho.layout() != Layout::Composite) throw DimensionError("negativity: expected a composite state");
  if (auto problem = rho.check(tol); !problem.empty()) throw InvalidState("negativity: " + problem);
  const Matrix pt = partial_transpose_target(rho.matrix(), rho.fock());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (pt + pt.adjoint()), Eigen::EigenvaluesOnly);
  double neg = 0.0;
  for (Index i = 0; i < solver.eigenvalues().size(); ++i)
    if (solver.eigenvalues()(i) < 0.0) neg -= solver.eigenvalues()(i);
  return neg;
}

double trace_distance(const Matrix& rho1, const Matrix& rho2) {
  if (rho1.rows() != rho2.rows() || rho1.cols() != rho2.cols()) throw DimensionError("trace_distance: dim mismatch");
  const Matrix diff = rho1 - rho2;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (diff + diff.adjoint()), Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const DensityOperator& rho1, const DensityOperator& rho2) {
  return trace_distance(rho1.matrix(), rho2.matrix());
}

SupportReport support_pattern_check(const Matrix& rho, double tol, std::size_t max_reported) {
  if (rho.rows() != rho.cols() || rho.rows() % kQubitDim != 0)
    throw DimensionError("support_pattern_check: expected a composite matrix");
  SupportReport report;
  for (Index i = 0; i < rho.rows(); ++i)
    for (Index j = i; j < rho.cols(); ++j) {
      if (excitation_number(i) == excitation_number(j)) continue;
      const double mag = std::max(std::abs(rho(i, j)), std::abs(rho(j, i)));
      report.max_violation = std::max(report.max_violation, mag);
      if (mag >= tol) report.offending.push_back({i, j, mag});
    }
  report.passed = report.offending.empty();
  std::sort(report.offending.begin(), report.offending.end(),
            [](const auto& a, const auto& b) { return a.magnitude > b.magnitude; });
  if (report.offending.size() > max_reported) report.offending.resize(max_reported);
  return report;
}

SupportReport support_pattern_check(const DensityOperator& rho, double tol, std::size_t max_reported) {
  if (rho.layout() != Layout::Composite) throw DimensionError("support_pattern_check: expected a composite state");
  return support_pattern_check(rho.matrix(), tol, max_reported);
}

double out_of_span_amplitude(const PureState& psi, int n) {
  if (psi.layout() != Layout::Composite) throw DimensionError("out_of_span_amplitude: expected a composite state");
  double outside = 0.0;
  for (Index i = 0; i < psi.dim(); ++i)
    if (excitation_number(i) != n) outside += std::norm(psi.amplitudes()(i));
  return std::sqrt(outside);
}

void PhaseAveragedSpec::validate(const FockSpec& fock) const {
  if (radial_weights.empty()) throw std::invalid_argument("PhaseAveragedSpec: empty radial distribution");
  double total = 0.0;
  for (const auto& rw : radial_weights) {
    if (!(rw.r >= 0.0) || !(rw.weight >= 0.0)) throw std::invalid_argument("PhaseAveragedSpec: negative r or weight");
    total += rw.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("PhaseAveragedSpec: weights must sum to 1");
  if (std::abs(a_prime * a_prime + b_prime * b_prime - 1.0) > 1e-12)
    throw std::invalid_argument("PhaseAveragedSpec: a'^2 + b'^2 must equal 1");
  if (phase_points < 4 * fock.n_max) {
    std::ostringstream os;
    os << "PhaseAveragedSpec: phase_points=" << phase_points << " is below 4 n_max = " << 4 * fock.n_max;
    throw std::invalid_argument(os.str());
  }
}

Vector phase_target_state(double a_prime, double b_prime, double phi) {
  Vector t(kQubitDim);
  t(kGround) = a_prime * std::polar(1.0, -0.5 * phi);
  t(kExcited) = b_prime * std::polar(1.0, 0.5 * phi);
  return t;
}

DensityOperator phase_averaged_state(const PhaseAveragedSpec& spec, const FockSpec& fock) {
  spec.validate(fock);
  const Index d = fock.composite_dim();
  const int k_points = spec.phase_points;
  Matrix rho = Matrix::Zero(d, d);
  for (const auto& rw : spec.radial_weights) {
    if (rw.weight == 0.0) continue;
    Matrix ring = Matrix::Zero(d, d);
    for (int k = 0; k < k_points; ++k) {
      const double phi = 2.0 * std::numbers::pi * k / k_points;
      const PureState joint = product(coherent_state(std::polar(rw.r, phi), fock),
                                      PureState(phase_target_state(spec.a_prime, spec.b_prime, phi), Layout::Target, fock));
      ring.noalias() += joint.projector();
    }
    rho += (rw.weight / k_points) * ring;
  }
  return DensityOperator(std::move(rho), Layout::Composite, fock);
}

}  // namespace cascade
