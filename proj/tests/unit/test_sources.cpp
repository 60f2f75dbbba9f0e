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

#include "cascade/evolve.hpp"
#include "cascade/sources.hpp"
#include "oracles.hpp"

namespace cascade {
namespace {

Matrix vacuum_ground(const FockSpec& spec) {
  return product(fock_state(0, spec), qubit_state(1, 0)).projector();
}

TEST(SourceModelTest, NamesAndValidation) {
  EXPECT_EQ(source_name(CoherentDrive{}), "coherent_drive");
  EXPECT_EQ(source_name(FreeDecayMixture{}), "free_decay_mixture");
  EXPECT_EQ(source_name(BirthDeathLaser{}), "birth_death");
  EXPECT_NO_THROW(validate(BirthDeathLaser{}));
  EXPECT_THROW(validate(BirthDeathLaser{-1.0, 1.0, 0.5, 5, 3}), std::invalid_argument);
  EXPECT_THROW(validate(FreeDecayMixture{{{Complex(1.0), 0.4}}}), std::invalid_argument);
  EXPECT_THROW(validate(FreeDecayMixture{{{Complex(1.0), -0.5}, {Complex(0.0), 1.5}}}), std::invalid_argument);
  EXPECT_THROW(validate(CoherentDrive{Complex(std::nan(""), 0.0), std::nullopt}), std::invalid_argument);
}

TEST(SourceGeneratorTest, FreeDecayMixtureHasNoSourceTerm) {
  const FockSpec spec(4);
  EXPECT_TRUE(build_L_S(FreeDecayMixture{{{Complex(0.5), 1.0}}}, spec).empty());
}

TEST(SourceGeneratorTest, BirthDeathIsTrajectoryOnly) {
  const FockSpec spec(4);
  EXPECT_THROW((void)build_L_S(BirthDeathLaser{}, spec), UnsupportedSource);
  EXPECT_THROW((void)classical_paths(BirthDeathLaser{}, CouplingConfig{}, TimeGrid(0, 1, 0.1)), UnsupportedSource);
  EXPECT_THROW((void)source_jump_channels(CoherentDrive{}, CouplingConfig{}, spec), UnsupportedSource);
}

TEST(SourceGeneratorTest, DriveRateFromVacuum) {
  // d<a>/dt = eps - gamma_S <a>/2, so the initial slope from vacuum is eps.
  const FockSpec spec(6);
  const Complex eps(0.3, -0.7);
  const CouplingConfig config{1.0, 0.0, 0.0, 0.0};
  const Superoperator l = build_L_S(CoherentDrive{eps, std::nullopt}, spec) + build_L_ST(config, spec);
  const Matrix drho = l.apply(vacuum_ground(spec));
  const Operator a = embed(annihilation(spec), Factor::Source, spec);
  EXPECT_LT(std::abs(expectation(drho, a) - eps), 1e-14);
}

TEST(SourceGeneratorTest, SteadyAmplitude) {
  EXPECT_EQ(steady_amplitude(CoherentDrive{Complex(0.75, 0.0), std::nullopt}, CouplingConfig{}), Complex(1.5));
  EXPECT_EQ(steady_amplitude(CoherentDrive{Complex(0.0, 1.0), std::nullopt}, CouplingConfig{2.0, 0.5, 0.5, 0.0}),
            Complex(0.0, 1.0));
  EXPECT_THROW((void)steady_amplitude(CoherentDrive{}, CouplingConfig{0.0, 0.5, 0.5, 0.0}), std::invalid_argument);
}

TEST(SourceGeneratorTest, CoherentSteadyStateIsStationary) {
  const FockSpec spec(required_n_max(1.0));
  const CouplingConfig config{1.0, 0.0, 0.0, 0.0};
  const CoherentDrive drive{Complex(0.5), std::nullopt};
  const Superoperator l = build_L_S(drive, spec) + build_L_ST(config, spec);
  const Matrix rho = product(coherent_state(steady_amplitude(drive, config), spec), qubit_state(1, 0)).projector();
  EXPECT_LT(l.apply(rho).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(SourceGeneratorTest, DrivenSourceStaysPureAndTracksClassicalPath) {
  const FockSpec spec(required_n_max(1.0));
  const CouplingConfig config{1.0, 0.0, 0.0, 0.0};
  const CoherentDrive drive{Complex(0.5), Complex(0.0)};
  const TimeGrid grid(0.0, 4.0, 0.01);
  const auto states = evolve_master(DensityOperator::from_pure(product(fock_state(0, spec), qubit_state(1, 0))),
                                    build_L_S(drive, spec) + build_L_ST(config, spec), grid, {.sample_every = 50});
  const auto path = classical_paths(drive, config, grid).front();
  const Operator a = embed(annihilation(spec), Factor::Source, spec);
  const auto samples = grid.sample_steps(50);
  for (std::size_t k = 0; k < states.size(); ++k) {
    EXPECT_LT(std::abs(expectation(states[k], a) - path.alphas[samples[k]]), 1e-6);
    EXPECT_GT(partial_trace(states[k], Factor::Source).purity(), 1.0 - 1e-6);
  }
}

TEST(BirthDeathTest, ChannelsAndGainRate) {
  const FockSpec spec(6);
  const BirthDeathLaser laser{2.0, 1.5, 0.5, 5, 3};
  const auto channels = source_jump_channels(laser, CouplingConfig{}, spec);
  ASSERT_EQ(channels.size(), 3u);
  EXPECT_EQ(channels[0].label, ChannelLabel::Pump);
  EXPECT_FALSE(channels[0].is_quantum());
  EXPECT_EQ(channels[0].carrier_effect, CarrierEffect::Increment);
  EXPECT_EQ(channels[0].carrier_factor(4) * channels[0].rate, 2.0);
  EXPECT_EQ(channels[2].label, ChannelLabel::Nonlasing);
  EXPECT_EQ(channels[2].carrier_factor(4) * channels[2].rate, 2.0);

  const JumpChannel& gain = channels[1];
  EXPECT_EQ(gain.label, ChannelLabel::Gain);
  EXPECT_EQ(gain.carrier_effect, CarrierEffect::Decrement);
  for (int n : {0, 2, 5}) {
    const Vector psi = product(fock_state(n, spec), qubit_state(1, 0)).amplitudes();
    for (int carriers : {0, 1, 4}) {
      const double rate = gain.carrier_factor(carriers) * (*gain.op * psi).squaredNorm();
      EXPECT_NEAR(rate, 1.5 * carriers * (n + 1), 1e-12) << "n=" << n << " N=" << carriers;
    }
    // The gain jump adds one photon to the mode.
    const Vector after = *gain.op * psi;
    EXPECT_LT((after / after.norm() - product(fock_state(n + 1, spec), qubit_state(1, 0)).amplitudes()).norm(),
              1e-14);
  }
}

TEST(ClassicalPathTest, FreeDecayMixture) {
  const CouplingConfig config{2.0, 0.5, 0.5, 0.0};
  const FreeDecayMixture mix{{{Complex(1.0, 1.0), 0.25}, {Complex(-0.5), 0.75}}};
  const auto paths = classical_paths(mix, config, TimeGrid(0.0, 1.0, 0.25));
  ASSERT_EQ(paths.size(), 2u);
  EXPECT_EQ(paths[1].weight, 0.75);
  ASSERT_EQ(paths[0].size(), 5u);
  EXPECT_EQ(paths[0].alphas[0], Complex(1.0, 1.0));
  EXPECT_LT(std::abs(paths[0].alphas[4] - Complex(1.0, 1.0) * std::exp(-1.0)), 1e-15);
  const PDistribution p = p_distribution_at(paths, 4);
  EXPECT_NO_THROW(p.validate());
  EXPECT_THROW((void)p_distribution_at(paths, 5), DimensionError);
}

TEST(ClassicalPathTest, CoherentDriveRelaxesToSteadyAmplitude) {
  const CouplingConfig config;
  const auto fixed = classical_paths(CoherentDrive{Complex(0.75), std::nullopt}, config, TimeGrid(0.0, 2.0, 0.5));
  ASSERT_EQ(fixed.size(), 1u);
  for (const Complex& alpha : fixed[0].alphas) EXPECT_EQ(alpha, Complex(1.5));

  const auto relaxing = classical_paths(CoherentDrive{Complex(0.75), Complex(0.0)}, config, TimeGrid(0.0, 2.0, 0.5));
  EXPECT_EQ(relaxing[0].alphas[0], Complex(0.0));
  EXPECT_LT(std::abs(relaxing[0].alphas[4] - 1.5 * (1.0 - std::exp(-1.0))), 1e-15);
}

TEST(PDistributionTest, SourceState) {
  const FockSpec spec(15);
  const PDistribution p{{{Complex(0.5), 0.5}, {Complex(-0.5), 0.5}}};
  const DensityOperator rho = p.source_state(spec);
  EXPECT_NEAR(rho.matrix().trace().real(), 1.0, 1e-12);
  // Even mixture of +-alpha has no odd-even coherences.
  EXPECT_LT(std::abs(rho.matrix()(0, 1)), 1e-15);
  EXPECT_THROW((PDistribution{{{Complex(0.5), 0.3}}}.validate()), std::invalid_argument);
}

TEST(RingPathTest, Examples) {
  const TimeGrid grid(0.0, 1.0, 0.1);
  const auto paths = ring_paths(2.0, 0.0, 1.0, grid, 4, 7);
  ASSERT_EQ(paths.size(), 4u);
  for (const auto& path : paths) {
    EXPECT_DOUBLE_EQ(path.weight, 0.25);
    EXPECT_NEAR(std::abs(path.alphas[0]), 2.0, 1e-15);
    EXPECT_NEAR(std::abs(path.alphas.back()), 2.0 * std::exp(-0.5), 1e-14);
    // No diffusion: phase frozen.
    EXPECT_LT(std::abs(std::arg(path.alphas.back() / path.alphas[0])), 1e-14);
  }
  EXPECT_NE(paths[0].alphas[0], paths[1].alphas[0]);
  const auto again = ring_paths(2.0, 0.0, 1.0, grid, 4, 7);
  EXPECT_EQ(again[3].alphas, paths[3].alphas);
  EXPECT_THROW((void)ring_paths(1.0, -0.1, 1.0, grid, 4, 7), std::invalid_argument);
  EXPECT_THROW((void)ring_paths(1.0, 0.1, 1.0, grid, 0, 7), std::invalid_argument);
}

TEST(RingPathTest, PhaseCorrelationDecay) {
  // <exp(i (phi_t - phi_0))> = exp(-D t)
  const double d = 0.4;
  const int count = 4000;
  const TimeGrid grid(0.0, 2.0, 0.01);
  const auto paths = ring_paths(1.0, d, 0.0, grid, count, 11);
  for (int k : {50, 100, 200}) {
    Complex mean(0.0);
    for (const auto& path : paths) mean += path.alphas[k] / path.alphas[0];
    mean /= static_cast<double>(count);
    EXPECT_NEAR(mean.real(), std::exp(-d * grid.time(k)), 3.0 / std::sqrt(count)) << "t=" << grid.time(k);
    EXPECT_NEAR(mean.imag(), 0.0, 3.0 / std::sqrt(count));
  }
}

TEST(PhaseDiffusionTest, CoherenceDecayLaw) {
  const double d = 0.4;
  const FockSpec spec(5);
  Rng rng(13);
  const Matrix rho = oracle::random_density(rng, spec.composite_dim());
  const Matrix out = phase_diffusion_generator(d, spec).apply(rho);
  for (int m = 0; m <= 5; ++m)
    for (int n = 0; n <= 5; ++n) {
      const Index r = composite_index(m, kExcited), c = composite_index(n, kGround);
      EXPECT_LT(std::abs(out(r, c) + d * (m - n) * (m - n) * rho(r, c)), 1e-14);
    }
}

TEST(PhaseDiffusionTest, MeanFieldMatchesRingPathLaw) {
  const double d = 0.4;
  const FockSpec spec(required_n_max(1.0));
  const TimeGrid grid(0.0, 2.0, 0.01);
  const auto states = evolve_master(DensityOperator::from_pure(product(coherent_state(1.0, spec), qubit_state(1, 0))),
                                    phase_diffusion_generator(d, spec), grid, {.sample_every = 100});
  const Operator a = embed(annihilation(spec), Factor::Source, spec);
  const auto samples = grid.sample_steps(100);
  const Complex a0 = expectation(states[0], a);
  for (std::size_t k = 0; k < states.size(); ++k)
    EXPECT_LT(std::abs(expectation(states[k], a) - a0 * std::exp(-d * grid.time(samples[k]))), 1e-10);
}

TEST(MaxRateTest, Examples) {
  EXPECT_EQ(max_rate(CouplingConfig{}, FreeDecayMixture{}), 1.0);
  EXPECT_EQ(max_rate(CouplingConfig{}, CoherentDrive{Complex(3.0), std::nullopt}), 3.0);
  EXPECT_EQ(max_rate(CouplingConfig{}, BirthDeathLaser{}), 2.0);
}

}  // namespace
}  // namespace cascade
