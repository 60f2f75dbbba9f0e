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

#include <benchmark/benchmark.h>

#include "cascade/analysis.hpp"
#include "cascade/ansatz.hpp"
#include "cascade/evolve.hpp"

namespace {

using namespace cascade;

const CouplingConfig kConfig{1.0, 0.5, 0.5, 0.0};
const CoherentDrive kDrive{Complex(0.5), std::nullopt};

Superoperator generator(const FockSpec& fock) {
  return build_L_S(kDrive, fock) + build_L_T(kConfig, fock) + build_L_ST(kConfig, fock);
}

void BM_GeneratorApply(benchmark::State& state) {
  const FockSpec fock(static_cast<int>(state.range(0)));
  const CompiledGenerator l(generator(fock));
  const Matrix rho = product(coherent_state(1.0, fock), qubit_state(1, 0)).projector();
  for (auto _ : state) benchmark::DoNotOptimize(l.apply(rho));
}
BENCHMARK(BM_GeneratorApply)->Arg(20)->Arg(30)->Arg(40);

void BM_MasterStep(benchmark::State& state) {
  const FockSpec fock(static_cast<int>(state.range(0)));
  const auto rho0 = DensityOperator::from_pure(product(coherent_state(1.0, fock), qubit_state(1, 0)));
  const Superoperator l = generator(fock);
  const TimeGrid grid(0.0, 1.0, 0.01);
  for (auto _ : state) benchmark::DoNotOptimize(evolve_master(rho0, l, grid, {.sample_every = 100}));
  state.SetItemsProcessed(state.iterations() * grid.steps());
}
BENCHMARK(BM_MasterStep)->Arg(20)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_Trajectory(benchmark::State& state) {
  const FockSpec fock(static_cast<int>(state.range(0)));
  const TrajectoryModel model(kConfig, kDrive, fock);
  const PureState psi0 = product(coherent_state(1.0, fock), qubit_state(1, 0));
  const TimeGrid grid(0.0, 5.0, 0.01);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(mcwf_run(psi0, model, grid, ++seed, {.sample_every = 100, .warn_probability = 0.1}));
  state.SetItemsProcessed(state.iterations() * grid.steps());
}
BENCHMARK(BM_Trajectory)->Arg(20)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_SchmidtEntropy(benchmark::State& state) {
  const FockSpec fock(20);
  const PureState psi = product(coherent_state(1.0, fock), qubit_state(0.6, 0.8));
  for (auto _ : state) benchmark::DoNotOptimize(schmidt_entropy(psi));
}
BENCHMARK(BM_SchmidtEntropy);

void BM_Negativity(benchmark::State& state) {
  const FockSpec fock(20);
  const auto rho = DensityOperator::from_pure(product(coherent_state(1.0, fock), qubit_state(0.6, 0.8)));
  for (auto _ : state) benchmark::DoNotOptimize(negativity(rho));
}
BENCHMARK(BM_Negativity)->Unit(benchmark::kMicrosecond);

void BM_SeparatedTarget(benchmark::State& state) {
  const auto paths = classical_paths(kDrive, kConfig, TimeGrid(0.0, 10.0, 0.01));
  Matrix rho0 = Matrix::Zero(2, 2);
  rho0(0, 0) = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(solve_separated_target(paths.front(), kConfig, rho0));
}
BENCHMARK(BM_SeparatedTarget)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
