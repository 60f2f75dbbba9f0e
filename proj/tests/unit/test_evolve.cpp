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
#include <mutex>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cascade/analysis.hpp"
#include "cascade/evolve.hpp"
#include "oracles.hpp"

namespace cascade {
namespace {

const FreeDecayMixture kNoSource{{{Complex(0.0), 1.0}}};

Superoperator full_generator(const CouplingConfig& config, const SourceModel& source, const FockSpec& spec) {
  return build_L_S(source, spec) + build_L_T(config, spec) + build_L_ST(config, spec);
}

PureState fock_ground(int n, const FockSpec& spec) { return product(fock_state(n, spec), qubit_state(1, 0)); }

double photon_number(const DensityOperator& rho) {
  return expectation(rho, embed(number(rho.fock()), Factor::Source, rho.fock())).real();
}

double bare_cavity_error(int n0, double dt) {
  const FockSpec spec(4);
  const TimeGrid grid(0.0, 2.0, dt);
  const auto states = evolve_master(DensityOperator::from_pure(fock_ground(n0, spec)),
                                    build_L_ST(CouplingConfig{1.0, 0.0, 0.0, 0.0}, spec), grid);
  double worst = 0.0;
  for (std::size_t k = 0; k < states.size(); ++k)
    worst = std::max(worst, std::abs(photon_number(states[k]) - n0 * std::exp(-grid.time(static_cast<int>(k)))));
  return worst;
}

class WarningCapture {
 public:
  WarningCapture() {
    previous_ = set_warning_handler([this](std::string_view m) { messages.emplace_back(m); });
  }
  ~WarningCapture() { set_warning_handler(previous_); }
  std::vector<std::string> messages;

 private:
  WarningHandler previous_;
};

TEST(TimeGridTest, Examples) {
  const TimeGrid grid(0.0, 1.0, 0.25);
  EXPECT_EQ(grid.steps(), 4);
  EXPECT_EQ(grid.times(), (std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0}));
  EXPECT_EQ(grid.sample_steps(3), (std::vector<int>{0, 3, 4}));
  EXPECT_THROW(TimeGrid(0.0, 1.0, 0.3), std::invalid_argument);
  EXPECT_THROW(TimeGrid(0.0, 1.0, 0.0), std::invalid_argument);
  EXPECT_THROW((void)grid.sample_steps(0), std::invalid_argument);
}

TEST(MasterTest, ZeroGeneratorKeepsState) {
  Rng rng(3);
  const FockSpec spec(3);
  const DensityOperator rho(oracle::random_density(rng, spec.composite_dim()), Layout::Composite, spec);
  const auto states = evolve_master(rho, Superoperator(spec.composite_dim(), "zero"), TimeGrid(0.0, 1.0, 0.1));
  ASSERT_EQ(states.size(), 11u);
  for (const auto& s : states) EXPECT_EQ(s.matrix(), rho.matrix());
}

TEST(MasterTest, BareCavityDecay) { EXPECT_LT(bare_cavity_error(3, 0.01), 1e-8); }

TEST(MasterTest, FourthOrderConvergence) {
  const double ratio = bare_cavity_error(1, 0.1) / bare_cavity_error(1, 0.05);
  EXPECT_GT(ratio, 12.0);
  EXPECT_LT(ratio, 20.0);
}

TEST(MasterTest, SamplingStride) {
  const FockSpec spec(2);
  const auto states = evolve_master(DensityOperator::from_pure(fock_ground(1, spec)),
                                    build_L_ST(CouplingConfig{1.0, 0.0, 0.0, 0.0}, spec), TimeGrid(0.0, 1.0, 0.1),
                                    {.sample_every = 4});
  EXPECT_EQ(states.size(), 4u);  // steps 0, 4, 8, 10
}

TEST(MasterTest, RejectsUnstableStep) {
  const FockSpec spec(2);
  const auto rho = DensityOperator::from_pure(fock_ground(1, spec));
  const auto l = build_L_ST(CouplingConfig{}, spec);
  EXPECT_THROW((void)evolve_master(rho, l, TimeGrid(0.0, 1.0, 0.01), {.rate_scale = 10.0}), std::invalid_argument);
  EXPECT_NO_THROW((void)evolve_master(rho, l, TimeGrid(0.0, 1.0, 0.01), {.rate_scale = 5.0}));
}

TEST(MasterTest, TraceDriftRaisesInvariantViolation) {
  const FockSpec spec(2);
  Superoperator growth(spec.composite_dim(), "growth");
  growth.add(identity(spec.composite_dim()), identity(spec.composite_dim()), 1.0);
  EXPECT_THROW((void)evolve_master(DensityOperator::from_pure(fock_ground(0, spec)), growth, TimeGrid(0.0, 1.0, 0.1)),
               InvariantViolation);
}

TEST(MasterTest, DimensionMismatch) {
  const FockSpec spec(2);
  EXPECT_THROW((void)evolve_master(DensityOperator::from_pure(fock_ground(0, spec)), Superoperator(4, "x"),
                                   TimeGrid(0.0, 1.0, 0.1)),
               DimensionError);
}

TEST(TrajectoryTest, ZeroRatesGiveEmptyRecord) {
  const FockSpec spec(3);
  const PureState psi0 = product(fock_state(2, spec), qubit_state(0.6, Complex(0.0, 0.8)));
  const auto result = mcwf_run(psi0, CouplingConfig{0.0, 0.0, 0.0, 0.0}, kNoSource, TimeGrid(0.0, 5.0, 0.01), 1);
  EXPECT_TRUE(result.record.events.empty());
  EXPECT_EQ(result.max_step_probability, 0.0);
  for (const auto& psi : result.states) EXPECT_LT((psi.amplitudes() - psi0.amplitudes()).norm(), 1e-15);
}

TEST(TrajectoryTest, StatesAreNormalized) {
  const FockSpec spec(20);
  const CoherentDrive drive{Complex(0.5), std::nullopt};
  const PureState psi0 = product(coherent_state(1.0, spec), qubit_state(1, 0));
  for (NoJumpOrder order : {NoJumpOrder::First, NoJumpOrder::Second}) {
    const auto result =
        mcwf_run(psi0, CouplingConfig{}, drive, TimeGrid(0.0, 3.0, 0.01), 5, {.sample_every = 10, .order = order});
    EXPECT_EQ(result.times.size(), 31u);
    for (const auto& psi : result.states) EXPECT_NEAR(psi.norm(), 1.0, 1e-12);
  }
}

TEST(TrajectoryTest, ExcitationBookkeeping) {
  // Without side loss and source terms every forward event removes one quantum.
  const FockSpec spec(3);
  const CouplingConfig config{1.0, 0.5, 0.0, 0.0};
  int events = 0;
  double worst = 0.0;
  TrajectoryOptions options;
  options.observer = [&](const StepView& view) {
    if (view.event) ++events;
    worst = std::max(worst, out_of_span_amplitude(PureState(view.psi, Layout::Composite, spec), 3 - events));
  };
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    events = 0;
    const auto result = mcwf_run(fock_ground(3, spec), config, kNoSource, TimeGrid(0.0, 8.0, 0.01), seed, options);
    EXPECT_EQ(result.record.count(ChannelLabel::Forward), events);
    EXPECT_LE(events, 3);
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(TrajectoryTest, ForwardEventRateMatchesMasterFlux) {
  const int n_max = 12;
  const FockSpec spec(n_max);
  const CouplingConfig config{1.0, 0.5, 0.5, 0.0};
  const CoherentDrive drive{Complex(0.5), std::nullopt};
  const PureState psi0 = product(coherent_state(1.0, spec), qubit_state(1, 0));
  const TimeGrid grid(0.0, 2.0, 0.005);

  const Operator f = build_jump_ops(config, spec).forward;
  const auto states = evolve_master(DensityOperator::from_pure(psi0), full_generator(config, drive, spec), grid);
  double expected = 0.0;
  for (std::size_t k = 1; k < states.size(); ++k)
    expected += 0.5 * grid.dt *
                (expectation(states[k - 1], f.adjoint() * f).real() + expectation(states[k], f.adjoint() * f).real());

  const int count = 600;
  const TrajectoryModel model(config, drive, spec);
  double sum = 0.0, sum_sq = 0.0;
  for (int m = 0; m < count; ++m) {
    const auto result = mcwf_run(psi0, model, grid, derive_seed(99, m), {.sample_every = grid.steps()});
    const double c = result.record.count(ChannelLabel::Forward);
    sum += c;
    sum_sq += c * c;
  }
  const double mean = sum / count;
  const double sigma = std::sqrt((sum_sq / count - mean * mean) / count);
  EXPECT_NEAR(mean, expected, 4.0 * sigma) << "sigma=" << sigma;
}

TEST(TrajectoryTest, HardStepProbabilityLimit) {
  const FockSpec spec(3);
  EXPECT_THROW((void)mcwf_run(fock_ground(3, spec), CouplingConfig{1.0, 0.0, 0.0, 0.0}, kNoSource,
                              TimeGrid(0.0, 1.0, 0.05), 1),
               StepProbabilityError);
}

TEST(TrajectoryTest, WarnsOnceAboveRecommendedProbability) {
  const FockSpec spec(3);
  WarningCapture capture;
  const auto result =
      mcwf_run(fock_ground(3, spec), CouplingConfig{1.0, 0.0, 0.0, 0.0}, kNoSource, TimeGrid(0.0, 1.0, 0.01), 1);
  EXPECT_NEAR(result.max_step_probability, 0.03, 1e-12);
  EXPECT_EQ(capture.messages.size(), 1u);
}

TEST(TrajectoryTest, RejectsBadInitialState) {
  const FockSpec spec(3);
  EXPECT_THROW((void)mcwf_run(fock_state(1, spec), CouplingConfig{}, kNoSource, TimeGrid(0.0, 1.0, 0.01), 1),
               DimensionError);
}

TEST(TrajectoryTest, SameSeedSameRecord) {
  const FockSpec spec(20);
  const PureState psi0 = product(coherent_state(1.5, spec), qubit_state(1, 0));
  const TrajectoryModel model(CouplingConfig{}, CoherentDrive{Complex(0.75), std::nullopt}, spec);
  const auto a = mcwf_run(psi0, model, TimeGrid(0.0, 5.0, 0.01), 42);
  const auto b = mcwf_run(psi0, model, TimeGrid(0.0, 5.0, 0.01), 42);
  const auto c = mcwf_run(psi0, model, TimeGrid(0.0, 5.0, 0.01), 43);
  EXPECT_EQ(a.record.events, b.record.events);
  EXPECT_EQ(a.states.back().amplitudes(), b.states.back().amplitudes());
  EXPECT_NE(a.record.events, c.record.events);
}

TEST(TrajectoryTest, BirthDeathCarrierCounter) {
  const FockSpec spec(15);
  const BirthDeathLaser laser{2.0, 1.0, 0.5, 5, 3};
  const TrajectoryModel model(CouplingConfig{}, laser, spec);
  EXPECT_EQ(model.initial_carriers(), 5);
  const auto result = mcwf_run(fock_ground(3, spec), model, TimeGrid(0.0, 1.0, 0.002), 8);
  int carriers = 5;
  for (const auto& e : result.record.events) {
    if (e.label == ChannelLabel::Pump) ++carriers;
    if (e.label == ChannelLabel::Gain || e.label == ChannelLabel::Nonlasing) carriers = std::max(0, carriers - 1);
  }
  EXPECT_EQ(result.classical.back().N, carriers);
}

TEST(EnsembleTest, SingleTrajectoryIsItsOwnProjector) {
  const FockSpec spec(3);
  const auto result = mcwf_run(fock_ground(2, spec), CouplingConfig{}, kNoSource, TimeGrid(0.0, 1.0, 0.01), 3,
                               {.sample_every = 50});
  const auto avg = ensemble_average({result});
  for (std::size_t k = 0; k < avg.size(); ++k)
    EXPECT_LT((avg[k].matrix() - result.states[k].projector()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW((void)ensemble_average({}), std::invalid_argument);
}

TEST(EnsembleTest, IdenticalTrajectoriesGivePureState) {
  const FockSpec spec(3);
  const auto r = mcwf_run(fock_ground(2, spec), CouplingConfig{}, kNoSource, TimeGrid(0.0, 1.0, 0.01), 3);
  const auto avg = ensemble_average({r, r, r});
  EXPECT_NEAR(avg.back().purity(), 1.0, 1e-12);
}

TEST(EnsembleTest, ConvergesToMasterSolution) {
  const FockSpec spec(12);
  const CouplingConfig config;
  const CoherentDrive drive{Complex(0.5), std::nullopt};
  const PureState psi0 = product(coherent_state(1.0, spec), qubit_state(1, 0));
  const TimeGrid grid(0.0, 3.0, 0.005);
  const int count = 400;
  const auto master = evolve_master(DensityOperator::from_pure(psi0), full_generator(config, drive, spec), grid,
                                    {.sample_every = 100});
  const auto ensemble = run_ensemble([&](int, std::uint64_t) { return psi0; }, TrajectoryModel(config, drive, spec),
                                     grid, count, 2024, {.trajectory = {.sample_every = 100}})
                            .average();
  ASSERT_EQ(ensemble.size(), master.size());
  for (std::size_t k = 0; k < master.size(); ++k)
    EXPECT_LT(trace_distance(ensemble[k], master[k]), 5.0 / std::sqrt(count)) << "sample " << k;
}

TEST(EnsembleTest, WorkerCountDoesNotChangeResult) {
  const FockSpec spec(10);
  const BirthDeathLaser laser;
  const TrajectoryModel model(CouplingConfig{}, laser, spec);
  const TimeGrid grid(0.0, 0.5, 0.002);
  auto initial = [&](int, std::uint64_t) { return fock_ground(3, spec); };
  const auto one = run_ensemble(initial, model, grid, 70, 5, {.workers = 1, .trajectory = {.sample_every = 50}});
  const auto four = run_ensemble(initial, model, grid, 70, 5, {.workers = 4, .trajectory = {.sample_every = 50}});
  const auto a = one.average();
  const auto b = four.average();
  EXPECT_EQ(one.count(), 70u);
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(a[k].matrix(), b[k].matrix());
}

TEST(EnsembleTest, ResultCallbackSeesEveryTrajectory) {
  const FockSpec spec(2);
  std::vector<int> seen(10, 0);
  std::mutex lock;
  EnsembleOptions options;
  options.workers = 3;
  options.block_size = 4;
  options.on_result = [&](int index, const TrajectoryResult&) {
    std::lock_guard guard(lock);
    ++seen[index];
  };
  (void)run_ensemble([&](int, std::uint64_t) { return fock_ground(1, spec); },
                     TrajectoryModel(CouplingConfig{}, kNoSource, spec), TimeGrid(0.0, 0.1, 0.01), 10, 1, options);
  for (int s : seen) EXPECT_EQ(s, 1);
}

TEST(ExpectationTest, Examples) {
  const FockSpec spec(4);
  const Operator n = embed(number(spec), Factor::Source, spec);
  EXPECT_EQ(expectation(fock_ground(2, spec), n), Complex(2.0));
  EXPECT_EQ(expectation(DensityOperator::from_pure(fock_ground(3, spec)), n), Complex(3.0));
  EXPECT_THROW((void)expectation(Matrix::Zero(3, 3), n), DimensionError);
}

}  // namespace
}  // namespace cascade
