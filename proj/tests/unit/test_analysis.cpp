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

#include <cmath>

#include <gtest/gtest.h>

#include "cascade/analysis.hpp"
#include "oracles.hpp"

namespace cascade {
namespace {

PureState composite(const Vector& v, const FockSpec& spec) { return PureState(v, Layout::Composite, spec); }

Vector basis(const FockSpec& spec, int n, Index q) {
  Vector v = Vector::Zero(spec.composite_dim());
  v(composite_index(n, q)) = 1.0;
  return v;
}

TEST(SchmidtTest, ProductStateHasZeroEntropy) {
  const FockSpec spec(4);
  const PureState psi = product(coherent_state(Complex(0.7, 0.2), spec), qubit_state(0.6, Complex(0.0, 0.8)));
  const auto w = schmidt_weights(psi);
  ASSERT_EQ(w.size(), 2u);
  EXPECT_NEAR(w[0], 1.0, 1e-14);
  EXPECT_NEAR(w[1], 0.0, 1e-14);
  EXPECT_NEAR(schmidt_entropy(psi), 0.0, 1e-12);
}

TEST(SchmidtTest, MaximallyEntangled) {
  const FockSpec spec(2);
  const Vector v = (basis(spec, 0, kGround) + basis(spec, 1, kExcited)) / std::sqrt(2.0);
  EXPECT_NEAR(schmidt_entropy(composite(v, spec)), 1.0, 1e-14);
}

TEST(SchmidtTest, MatchesBinaryEntropy) {
  const FockSpec spec(3);
  for (double theta : {0.1, 0.4, 0.7, 1.2}) {
    const Vector v = std::cos(theta) * basis(spec, 2, kGround) + std::sin(theta) * basis(spec, 1, kExcited);
    const double p = std::cos(theta) * std::cos(theta);
    EXPECT_NEAR(schmidt_entropy(composite(v, spec)), oracle::binary_entropy(p), 1e-12) << theta;
  }
}

// Property: Schmidt weights are the eigenvalues of the reduced qubit state.
TEST(SchmidtTest, WeightsMatchReducedStateProperty) {
  Rng rng(61);
  for (int trial = 0; trial < 30; ++trial) {
    const FockSpec spec(1 + static_cast<int>(8 * rng.uniform()));
    const Vector v = oracle::random_vector(rng, spec.composite_dim());
    Complex r00(0.0), r11(0.0), r01(0.0);
    for (int n = 0; n <= spec.n_max; ++n) {
      const Complex g = v(composite_index(n, kGround)), e = v(composite_index(n, kExcited));
      r00 += std::norm(g);
      r11 += std::norm(e);
      r01 += g * std::conj(e);
    }
    const double mean = 0.5 * (r00.real() + r11.real());
    const double half_gap = std::sqrt(0.25 * std::pow(r00.real() - r11.real(), 2) + std::norm(r01));
    const auto w = schmidt_weights(composite(v, spec));
    EXPECT_NEAR(w[0], mean + half_gap, 1e-12);
    EXPECT_NEAR(w[1], mean - half_gap, 1e-12);
    const double s = schmidt_entropy(composite(v, spec));
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0 + 1e-12);
  }
}

TEST(SchmidtTest, RejectsUnnormalized) {
  const FockSpec spec(2);
  EXPECT_THROW((void)schmidt_entropy(composite(2.0 * basis(spec, 0, kGround), spec)), InvalidState);
}

TEST(PartialTransposeTest, MatchesIndexOracle) {
  Rng rng(67);
  const FockSpec spec(3);
  const Matrix rho = oracle::random_density(rng, spec.composite_dim());
  const Matrix pt = partial_transpose_target(rho, spec);
  for (int m = 0; m <= 3; ++m)
    for (int n = 0; n <= 3; ++n)
      for (Index q = 0; q < 2; ++q)
        for (Index p = 0; p < 2; ++p)
          EXPECT_EQ(pt(composite_index(m, q), composite_index(n, p)), rho(composite_index(m, p), composite_index(n, q)));
}

TEST(NegativityTest, Examples) {
  const FockSpec spec(2);
  const Vector bell = (basis(spec, 0, kGround) + basis(spec, 1, kExcited)) / std::sqrt(2.0);
  EXPECT_NEAR(negativity(DensityOperator::from_pure(composite(bell, spec))), 0.5, 1e-14);
  const PureState prod = product(fock_state(1, spec), qubit_state(1.0, 1.0));
  EXPECT_NEAR(negativity(DensityOperator::from_pure(prod)), 0.0, 1e-14);
}

// Property: mixtures of product states have no negativity.
TEST(NegativityTest, SeparableMixturesProperty) {
  Rng rng(71);
  const FockSpec spec(4);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix rho = Matrix::Zero(spec.composite_dim(), spec.composite_dim());
    for (int k = 0; k < 5; ++k)
      rho += 0.2 * oracle::kron(oracle::random_density(rng, spec.source_dim()), oracle::random_density(rng, 2));
    EXPECT_LT(negativity(DensityOperator(rho, Layout::Composite, spec)), 1e-12);
  }
}

TEST(TraceDistanceTest, Examples) {
  const FockSpec spec(2);
  const Matrix a = composite(basis(spec, 0, kGround), spec).projector();
  const Matrix b = composite(basis(spec, 1, kGround), spec).projector();
  EXPECT_NEAR(trace_distance(a, b), 1.0, 1e-14);
  EXPECT_EQ(trace_distance(a, a), 0.0);
  EXPECT_NEAR(trace_distance(a, 0.5 * (a + b)), 0.5, 1e-14);
}

// Property: for pure states D = sqrt(1 - |<a|b>|^2).
TEST(TraceDistanceTest, PureStateProperty) {
  Rng rng(73);
  for (int trial = 0; trial < 20; ++trial) {
    const Vector u = oracle::random_vector(rng, 6);
    const Vector v = oracle::random_vector(rng, 6);
    const double expected = std::sqrt(1.0 - std::norm(u.dot(v)));
    EXPECT_NEAR(trace_distance(Matrix(u * u.adjoint()), Matrix(v * v.adjoint())), expected, 1e-12);
  }
}

TEST(ExcitationNumberTest, Examples) {
  EXPECT_EQ(excitation_number(composite_index(0, kGround)), 0);
  EXPECT_EQ(excitation_number(composite_index(0, kExcited)), 1);
  EXPECT_EQ(excitation_number(composite_index(3, kGround)), 3);
  EXPECT_EQ(excitation_number(composite_index(2, kExcited)), 3);
}

TEST(SupportPatternTest, BlockStatesPass) {
  const FockSpec spec(4);
  const Vector v = (basis(spec, 3, kGround) + Complex(0.0, 1.0) * basis(spec, 2, kExcited)) / std::sqrt(2.0);
  Matrix rho = 0.5 * composite(v, spec).projector();
  rho += 0.5 * composite(basis(spec, 0, kGround), spec).projector();
  const SupportReport report = support_pattern_check(rho, 1e-12);
  EXPECT_TRUE(report.passed);
  EXPECT_EQ(report.max_violation, 0.0);
  EXPECT_TRUE(report.offending.empty());
}

TEST(SupportPatternTest, CoherentStateFails) {
  const FockSpec spec(20);
  const Matrix rho = product(coherent_state(1.0, spec), qubit_state(1, 0)).projector();
  const SupportReport report = support_pattern_check(rho, 1e-3, 4);
  EXPECT_FALSE(report.passed);
  EXPECT_EQ(report.offending.size(), 4u);
  // Largest violation is <0,-|rho|1,-> = e^{-1}.
  EXPECT_NEAR(report.max_violation, std::exp(-1.0), 1e-12);
  EXPECT_EQ(report.offending.front().magnitude, report.max_violation);
  for (const auto& e : report.offending) EXPECT_LT(e.row, e.col);
}

TEST(OutOfSpanTest, Examples) {
  const FockSpec spec(4);
  const Vector v = (basis(spec, 2, kGround) + basis(spec, 1, kExcited)) / std::sqrt(2.0);
  EXPECT_NEAR(out_of_span_amplitude(composite(v, spec), 2), 0.0, 1e-15);
  EXPECT_NEAR(out_of_span_amplitude(composite(v, spec), 3), 1.0, 1e-15);
  const Vector w = (basis(spec, 2, kGround) + basis(spec, 4, kGround)) / std::sqrt(2.0);
  EXPECT_GT(out_of_span_amplitude(composite(w, spec), 2), 0.5);
}

TEST(PhaseAveragedTest, TargetState) {
  const Vector t = phase_target_state(0.6, 0.8, 0.0);
  EXPECT_EQ(t(0), Complex(0.6));
  EXPECT_EQ(t(1), Complex(0.8));
  const Vector u = phase_target_state(0.6, 0.8, M_PI);
  EXPECT_LT(std::abs(u(0) - Complex(0.0, -0.6)), 1e-15);
  EXPECT_LT(std::abs(u(1) - Complex(0.0, 0.8)), 1e-15);
}

TEST(PhaseAveragedTest, ValidatesQuadrature) {
  const FockSpec fock(10);
  PhaseAveragedSpec spec{{{1.0, 1.0}}, 0.6, 0.8, 39};
  EXPECT_THROW((void)phase_averaged_state(spec, fock), std::invalid_argument);
  spec.phase_points = 40;
  EXPECT_NO_THROW((void)phase_averaged_state(spec, fock));
}

// Property: phase averaging yields block-diagonal, separable, unit-trace states.
TEST(PhaseAveragedTest, BlockStructureProperty) {
  Rng rng(79);
  const FockSpec fock(20);
  for (int trial = 0; trial < 5; ++trial) {
    const double a = rng.uniform();
    PhaseAveragedSpec spec{{{0.5 + rng.uniform(), 0.4}, {1.0 + rng.uniform(), 0.6}}, a, std::sqrt(1.0 - a * a), 80};
    const DensityOperator rho = phase_averaged_state(spec, fock);
    EXPECT_NEAR(rho.matrix().trace().real(), 1.0, 1e-10);
    EXPECT_LT(support_pattern_check(rho, 1e-10).max_violation, 1e-10);
    EXPECT_LT(negativity(rho), 1e-10);
  }
}

}  // namespace
}  // namespace cascade
