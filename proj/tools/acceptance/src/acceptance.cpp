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

#include "cascade/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "cascade/analysis.hpp"
#include "cascade/ansatz.hpp"
#include "cascade/evolve.hpp"
#include "cascade/hilbert.hpp"
#include "cascade/liouvillian.hpp"
#include "cascade/random.hpp"
#include "cascade/sources.hpp"

namespace cascade::acceptance {
namespace {

constexpr std::uint64_t kSeed = 0x5EEDCA5CADEULL;

// Shared physical setting of A1, A5 and A8.
constexpr double kAlphaSteady = 1.5;
constexpr int kNMax = 20;

CouplingConfig standard_config() { return CouplingConfig{1.0, 0.5, 0.5, 0.0}; }

CoherentDrive standard_drive(const CouplingConfig& config) {
  return CoherentDrive{Complex(0.5 * config.gamma_S * kAlphaSteady, 0.0), std::nullopt};
}

PureState ground_qubit() { return qubit_state(1.0, 0.0); }

Matrix ground_qubit_matrix() { return ground_qubit().projector(); }

Matrix random_qubit_density(Rng& rng) {
  Matrix g(kQubitDim, kQubitDim);
  for (Index i = 0; i < g.rows(); ++i)
    for (Index j = 0; j < g.cols(); ++j) g(i, j) = Complex(rng.normal(), rng.normal());
  const Matrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

double max_abs_entry(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

CriterionResult finish(std::string id, std::string title, std::vector<Check> checks, std::string detail = {}) {
  CriterionResult r{std::move(id), std::move(title), std::move(checks), std::move(detail), 0.0, true};
  for (const auto& c : r.checks) r.passed = r.passed && c.passed;
  return r;
}

// ---------------------------------------------------------------------------

CriterionResult a1_factorization() {
  const CouplingConfig config = standard_config();
  const FockSpec fock(kNMax);
  const CoherentDrive drive = standard_drive(config);
  const TimeGrid grid(0.0, 10.0, 0.01);
  const int count = 200;
  const TrajectoryModel model(config, drive, fock);
  const PureState psi0 = product(coherent_state(steady_amplitude(drive, config), fock), ground_qubit());

  double worst = schmidt_entropy(psi0);
  int jumps = 0;
  TrajectoryOptions options;
  options.sample_every = grid.steps();
  options.observer = [&](const StepView& view) {
    worst = std::max(worst, schmidt_entropy(PureState(view.psi, Layout::Composite, fock)));
  };
  for (int m = 0; m < count; ++m) {
    const auto result = mcwf_run(psi0, model, grid, derive_seed(kSeed, m), options);
    jumps += static_cast<int>(result.record.events.size());
  }
  return finish("A1", "coherent source: conditional states factorize",
                {make_check("max_schmidt_entropy", worst, Comparison::Below, 1e-6)},
                std::to_string(count) + " trajectories, " + std::to_string(jumps) + " jumps");
}

CriterionResult a2_entangled_records() {
  const CouplingConfig config = standard_config();
  const FockSpec fock(kNMax);
  const BirthDeathLaser laser{};
  const TimeGrid grid(0.0, 5.0, 0.002);
  const int count = 100;
  const int entropy_every = 10;
  const TrajectoryModel model(config, laser, fock);
  const PureState psi0 = product(fock_state(laser.n0, fock), ground_qubit());

  double worst_span = 0.0;
  int entangled = 0;
  for (int m = 0; m < count; ++m) {
    int n = laser.n0;
    double best_entropy = 0.0;
    TrajectoryOptions options;
    options.sample_every = grid.steps();
    options.observer = [&](const StepView& view) {
      if (view.event) {
        if (*view.event == ChannelLabel::Gain) ++n;
        if (*view.event == ChannelLabel::Forward || *view.event == ChannelLabel::Side) --n;
      }
      const PureState psi(view.psi, Layout::Composite, fock);
      worst_span = std::max(worst_span, out_of_span_amplitude(psi, n));
      if (view.step % entropy_every == 0) best_entropy = std::max(best_entropy, schmidt_entropy(psi));
    };
    (void)mcwf_run(psi0, model, grid, derive_seed(kSeed + 2, m), options);
    if (best_entropy > 0.1) ++entangled;
  }
  return finish("A2", "number-state source: conditional states entangled within the record span",
                {make_check("max_out_of_span_amplitude", worst_span, Comparison::Below, 1e-10),
                 make_check("fraction_with_entropy_above_0.1", static_cast<double>(entangled) / count,
                            Comparison::AtLeast, 1.0)},
                std::to_string(count) + " trajectories, entropy sampled every " + std::to_string(entropy_every) +
                    " steps");
}

CriterionResult a3_regrouping() {
  Rng rng(kSeed + 3);
  double worst = 0.0;
  const int configs = 20;
  for (int i = 0; i < configs; ++i) {
    const CouplingConfig config{2.0 * rng.uniform(), 2.0 * rng.uniform(), 2.0 * rng.uniform(),
                                2.0 * rng.uniform() - 1.0};
    const FockSpec fock(1 + static_cast<int>(6.0 * rng.uniform()));
    SourceModel source;
    if (i % 2 == 0) {
      source = CoherentDrive{std::polar(1.5 * rng.uniform(), 2.0 * std::numbers::pi * rng.uniform()), std::nullopt};
    } else {
      source = FreeDecayMixture{{{Complex(1.0, 0.0), 1.0}}};
    }
    const Superoperator l_s = build_L_S(source, fock);
    const Superoperator original = l_s + build_L_T(config, fock) + build_L_ST(config, fock);
    const Superoperator regrouped = regroup(l_s, config, fock).total();
    worst = std::max(worst, max_abs_entry(to_matrix(original) - to_matrix(regrouped)));
  }
  return finish("A3", "regrouped generators reproduce the full generator",
                {make_check("max_entry_deviation", worst, Comparison::Below, 1e-12)},
                std::to_string(configs) + " random configurations, n_max 1..6");
}

CriterionResult a4_nonhermitian() {
  Rng rng(kSeed + 4);
  const FockSpec fock(kNMax);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const CouplingConfig config = i == 0 ? standard_config()
                                         : CouplingConfig{2.0 * rng.uniform(), 2.0 * rng.uniform(),
                                                          2.0 * rng.uniform(), 2.0 * rng.uniform() - 1.0};
    const JumpOperators jumps = build_jump_ops(config, fock);
    const Matrix lhs = build_H_T(config, fock).matrix() + build_H_ST(config, fock).matrix() -
                       0.5 * kI * (jumps.side.adjoint() * jumps.side).matrix() -
                       0.5 * kI * (jumps.forward.adjoint() * jumps.forward).matrix();
    worst = std::max(worst, max_abs_entry(lhs - build_nonhermitian_H(config, fock).matrix()));
  }
  return finish("A4", "coupling Hamiltonian plus jump terms equals the closed-form non-Hermitian Hamiltonian",
                {make_check("max_entry_deviation", worst, Comparison::Below, 1e-13)}, "10 configurations, n_max 20");
}

CriterionResult a5_classical_drive() {
  const CouplingConfig config = standard_config();
  const FockSpec fock(kNMax);
  const Superoperator coupling = regroup(Superoperator(fock.composite_dim(), "L_S"), config, fock).coupling;

  Rng rng(kSeed + 5);
  double worst_identity = 0.0;
  double largest_passing = 0.0;
  for (double r : {0.25, 0.5, 0.75, 1.0, 1.25, 1.5}) {
    const Complex alpha = std::polar(r, 2.0 * std::numbers::pi * rng.uniform());
    const Operator source(coherent_state(alpha, fock).projector());
    const Matrix h = DriveHamiltonian(alpha, config).matrix();
    double worst_here = 0.0;
    for (int k = 0; k < 10; ++k) {
      const Matrix rho_t = random_qubit_density(rng);
      const Matrix lhs = coupling.apply(tensor(source, Operator(rho_t)).matrix());
      const Matrix rhs = tensor(source, Operator(Matrix(-kI * (h * rho_t - rho_t * h)))).matrix();
      worst_here = std::max(worst_here, (lhs - rhs).norm());
    }
    worst_identity = std::max(worst_identity, worst_here);
    if (worst_here < 1e-7) largest_passing = r;
  }

  const CoherentDrive drive = standard_drive(config);
  const TimeGrid grid(0.0, 10.0, 0.01);
  const Superoperator generator = regroup(build_L_S(drive, fock), config, fock).total();
  const DensityOperator rho0 =
      product(DensityOperator::from_pure(coherent_state(steady_amplitude(drive, config), fock)),
              DensityOperator::from_pure(ground_qubit()));
  const auto full = evolve_master(rho0, generator, grid);
  const auto path = classical_paths(drive, config, grid).front();
  const auto conditional = solve_separated_target(path, config, ground_qubit_matrix());
  double worst_td = 0.0;
  for (std::size_t k = 0; k < full.size(); ++k)
    worst_td = std::max(worst_td, trace_distance(partial_trace(full[k].matrix(), Factor::Target, fock),
                                                 conditional.rhos[k]));

  return finish("A5", "coupling acts on a coherent source as a classical drive",
                {make_check("coupling_identity_frobenius", worst_identity, Comparison::Below, 1e-7),
                 make_check("target_trace_distance", worst_td, Comparison::Below, 1e-6)},
                "|alpha| in 0.25..1.5 at n_max 20; identity holds up to |alpha| = " + fmt(largest_passing) +
                    "; truncation needs n_max >= " + std::to_string(required_n_max(1.5)) + " at |alpha| = 1.5");
}

FreeDecayMixture ring_mixture() {
  FreeDecayMixture mix;
  for (int k = 0; k < 8; ++k)
    mix.initial_amplitudes.push_back({std::polar(1.5, 2.0 * std::numbers::pi * k / 8), 1.0 / 8});
  return mix;
}

CriterionResult a6_ansatz() {
  const CouplingConfig config = standard_config();
  const FockSpec fock(kNMax);
  const FreeDecayMixture mix = ring_mixture();
  const Superoperator generator = regroup(build_L_S(mix, fock), config, fock).total();
  const Matrix rho_t0 = ground_qubit_matrix();

  const TimeGrid grid(0.0, 6.0, 0.005);
  const auto paths = classical_paths(mix, config, grid);
  const auto conditionals = solve_all(paths, config, rho_t0);
  const DensityOperator rho0(build_ansatz_state(paths, conditionals, 0, fock).matrix(), Layout::Composite, fock);
  const auto full = evolve_master(rho0, generator, grid);
  double worst_td = 0.0;
  for (std::size_t k = 0; k < full.size(); ++k)
    worst_td = std::max(worst_td,
                        trace_distance(build_ansatz_state(paths, conditionals, k, fock).matrix(), full[k].matrix()));

  // Integration step 1e-3; the ansatz is tabulated at half steps so that the
  // central difference at each integration point spans +-5e-4.
  const double integration_dt = 1e-3;
  const TimeGrid half(0.0, 6.0, 0.5 * integration_dt);
  const auto fine_paths = classical_paths(mix, config, half);
  const auto fine_conditionals = solve_all(fine_paths, config, rho_t0);
  double worst_residual = 0.0;
  for (int k = 2; k + 1 < half.steps(); k += 2)
    worst_residual = std::max(worst_residual, generator_residual(fine_paths, fine_conditionals, k, generator, fock));

  return finish("A6", "coherent-state ansatz solves the master equation",
                {make_check("ansatz_trace_distance", worst_td, Comparison::Below, 1e-6),
                 make_check("generator_residual", worst_residual, Comparison::Below, 1e-6)},
                "8 amplitudes on |alpha| = 1.5, comparison dt 0.005, residual step 1e-3 with half-step differences");
}

CriterionResult a7_support() {
  const CouplingConfig config = standard_config();
  const FockSpec fock(kNMax);
  const BirthDeathLaser laser{};
  const TimeGrid grid(0.0, 3.0, 0.002);
  const int count = 2000;
  const TrajectoryModel model(config, laser, fock);
  const PureState psi0 = product(fock_state(laser.n0, fock), ground_qubit());

  EnsembleOptions options;
  options.workers = workers_from_env();
  options.trajectory.sample_every = 50;
  const auto ensemble =
      run_ensemble([&](int, std::uint64_t) { return psi0; }, model, grid, count, kSeed + 7, options);
  const double tol = 5.0 / std::sqrt(static_cast<double>(count));
  double worst_average = 0.0;
  for (const auto& rho : ensemble.average())
    worst_average = std::max(worst_average, support_pattern_check(rho, tol).max_violation);

  double worst_phase_support = 0.0;
  double worst_negativity = 0.0;
  const std::vector<PhaseAveragedSpec> specs = {
      {{{0.5, 0.2}, {1.0, 0.5}, {1.5, 0.3}}, std::cos(0.4), std::sin(0.4), 4 * kNMax},
      {{{1.2, 1.0}}, std::sqrt(0.5), std::sqrt(0.5), 4 * kNMax},
      {{{0.0, 0.1}, {0.8, 0.9}}, 0.6, 0.8, 4 * kNMax + 7},
  };
  for (const auto& spec : specs) {
    const DensityOperator rho = phase_averaged_state(spec, fock);
    worst_phase_support = std::max(worst_phase_support, support_pattern_check(rho, 1e-10).max_violation);
    worst_negativity = std::max(worst_negativity, negativity(rho));
  }
  return finish("A7", "coarse-grained states share the excitation-number block pattern",
                {make_check("ensemble_max_off_block", worst_average, Comparison::Below, tol),
                 make_check("phase_averaged_max_off_block", worst_phase_support, Comparison::Below, 1e-10),
                 make_check("phase_averaged_negativity", worst_negativity, Comparison::Below, 1e-10)},
                std::to_string(count) + " trajectories to t = 3, " + std::to_string(ensemble.times().size()) +
                    " sampled averages");
}

CriterionResult a8_unraveling() {
  const CouplingConfig config = standard_config();
  const FockSpec fock(kNMax);
  const CoherentDrive drive = standard_drive(config);
  const TimeGrid grid(0.0, 5.0, 0.01);
  const int count = 2000;
  const PureState psi0 = product(coherent_state(steady_amplitude(drive, config), fock), ground_qubit());

  EnsembleOptions options;
  options.workers = workers_from_env();
  const auto ensemble = run_ensemble([&](int, std::uint64_t) { return psi0; }, TrajectoryModel(config, drive, fock),
                                     grid, count, kSeed + 8, options);
  const auto full =
      evolve_master(DensityOperator::from_pure(psi0), regroup(build_L_S(drive, fock), config, fock).total(), grid);
  const auto average = ensemble.average();
  double worst = 0.0;
  for (std::size_t k = 0; k < full.size(); ++k) worst = std::max(worst, trace_distance(average[k], full[k]));
  return finish("A8", "trajectory ensemble reproduces the master equation",
                {make_check("max_trace_distance", worst, Comparison::Below, 5.0 / std::sqrt(double(count)))},
                std::to_string(count) + " trajectories to t = 5, every step compared");
}

// Max |<a^dag a>(t) - n0 e^{-gamma_S t}| on a 0.1 sample grid, bare cavity.
double bare_cavity_error(const PureState& source0, double n0, double dt, const FockSpec& fock) {
  const CouplingConfig config{1.0, 0.0, 0.0, 0.0};
  const FreeDecayMixture source{{{Complex(1.0, 0.0), 1.0}}};
  const Superoperator generator =
      build_L_S(source, fock) + build_L_T(config, fock) + build_L_ST(config, fock);
  const DensityOperator rho0 =
      product(DensityOperator::from_pure(source0), DensityOperator::from_pure(ground_qubit()));
  const TimeGrid grid(0.0, 5.0, dt);
  const int every = static_cast<int>(std::lround(0.1 / dt));
  MasterOptions options;
  options.sample_every = every;
  const auto states = evolve_master(rho0, generator, grid, options);
  const Operator n = embed(number(fock), Factor::Source, fock);
  double worst = 0.0;
  for (std::size_t k = 0; k < states.size(); ++k) {
    const double t = grid.time(static_cast<int>(k) * every);
    worst = std::max(worst, std::abs(expectation(states[k], n).real() - n0 * std::exp(-config.gamma_S * t)));
  }
  return worst;
}

CriterionResult a9_oracles() {
  const FockSpec fock(kNMax);
  const double fine = bare_cavity_error(coherent_state(1.0, fock), 1.0, 0.01, fock);
  // Order study on |1>, which keeps dt * rate small on the coarse grid.
  const double coarse = bare_cavity_error(fock_state(1, fock), 1.0, 0.1, fock);
  const double halved = bare_cavity_error(fock_state(1, fock), 1.0, 0.05, fock);

  const CouplingConfig config = standard_config();
  const Complex alpha(1.0, 0.0);
  const TimeGrid grid(0.0, 40.0, 0.01);
  const ClassicalPath path{grid.times(), std::vector<Complex>(grid.times().size(), alpha), 1.0};
  const auto conditional = solve_separated_target(path, config, ground_qubit_matrix());
  const double omega = 2.0 * config.coupling() * std::abs(alpha);
  const double gt = config.gamma_T();
  const double expected = (omega * omega / 4.0) / (gt * gt / 4.0 + omega * omega / 2.0);
  const double bloch = std::abs(conditional.rhos.back()(kExcited, kExcited).real() - expected);

  return finish("A9", "closed-form oracles",
                {make_check("bare_cavity_photon_number", fine, Comparison::Below, 1e-8),
                 make_check("bloch_excited_population", bloch, Comparison::Below, 1e-6),
                 make_check("richardson_ratio", coarse / halved, Comparison::AtLeast, 12.0)},
                "Fock |1> decay error dt=0.1: " + fmt(coarse) + ", dt=0.05: " + fmt(halved));
}

}  // namespace

Check make_check(std::string name, double measured, Comparison comparison, double tolerance) {
  const bool ok = comparison == Comparison::Below ? measured < tolerance : measured >= tolerance;
  return Check{std::move(name), measured, comparison, tolerance, ok && std::isfinite(measured)};
}

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {"A1", "coherent source: conditional states factorize", a1_factorization},
      {"A2", "number-state source: conditional states entangled within the record span", a2_entangled_records},
      {"A3", "regrouped generators reproduce the full generator", a3_regrouping},
      {"A4", "closed-form non-Hermitian Hamiltonian", a4_nonhermitian},
      {"A5", "coupling acts on a coherent source as a classical drive", a5_classical_drive},
      {"A6", "coherent-state ansatz solves the master equation", a6_ansatz},
      {"A7", "coarse-grained states share the excitation-number block pattern", a7_support},
      {"A8", "trajectory ensemble reproduces the master equation", a8_unraveling},
      {"A9", "closed-form oracles", a9_oracles},
  };
  return all;
}

std::vector<const Criterion*> select(std::string_view suite) {
  std::vector<const Criterion*> out;
  for (const auto& c : criteria())
    if (suite == "all" || suite == c.id) out.push_back(&c);
  if (out.empty()) throw UnknownSuite("unknown suite '" + std::string(suite) + "'; expected all or A1..A9");
  return out;
}

CriterionResult run(const Criterion& criterion) {
  const auto start = std::chrono::steady_clock::now();
  CriterionResult result;
  try {
    result = criterion.run();
  } catch (const std::exception& e) {
    result = CriterionResult{criterion.id, criterion.title, {}, std::string("error: ") + e.what(), 0.0, false};
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

namespace {

std::string describe(const Check& c) {
  return c.name + "=" + fmt(c.measured) + (c.comparison == Comparison::Below ? " (< " : " (>= ") + fmt(c.tolerance) +
         ")" + (c.passed ? "" : " FAIL");
}

}  // namespace

std::string summary_line(const CriterionResult& result) {
  std::ostringstream os;
  os << result.id << ' ' << (result.passed ? "PASS" : "FAIL");
  for (const auto& c : result.checks) os << "  " << describe(c);
  if (result.checks.empty()) os << "  " << result.detail;
  char buf[32];
  std::snprintf(buf, sizeof buf, "  [%.1f s]", result.seconds);
  os << buf;
  return os.str();
}

std::string verdict_table(const std::vector<CriterionResult>& results) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-4s %-34s %-3s %-11s %-11s %-6s\n", "id", "check", "op", "tolerance", "measured",
                "result");
  os << line;
  int failed = 0;
  for (const auto& r : results) {
    if (!r.passed) ++failed;
    if (r.checks.empty()) {
      std::snprintf(line, sizeof line, "%-4s %-34s %-3s %-11s %-11s %-6s\n", r.id.c_str(), "(error)", "-", "-", "-",
                    "FAIL");
      os << line << "     " << r.detail << '\n';
      continue;
    }
    for (const auto& c : r.checks) {
      std::snprintf(line, sizeof line, "%-4s %-34s %-3s %-11s %-11s %-6s\n", r.id.c_str(), c.name.c_str(),
                    c.comparison == Comparison::Below ? "<" : ">=", fmt(c.tolerance).c_str(), fmt(c.measured).c_str(),
                    c.passed ? "pass" : "FAIL");
      os << line;
    }
  }
  os << results.size() - failed << '/' << results.size() << " criteria passed\n";
  return os.str();
}

nlohmann::ordered_json verdict_json(const std::vector<CriterionResult>& results) {
  nlohmann::ordered_json doc;
  doc["passed"] = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
  doc["criteria"] = nlohmann::ordered_json::array();
  for (const auto& r : results) {
    nlohmann::ordered_json item;
    item["id"] = r.id;
    item["title"] = r.title;
    item["passed"] = r.passed;
    item["seconds"] = r.seconds;
    item["detail"] = r.detail;
    item["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : r.checks) {
      nlohmann::ordered_json check;
      check["name"] = c.name;
      check["comparison"] = c.comparison == Comparison::Below ? "<" : ">=";
      check["tolerance"] = c.tolerance;
      check["measured"] = c.measured;
      check["passed"] = c.passed;
      item["checks"].push_back(std::move(check));
    }
    doc["criteria"].push_back(std::move(item));
  }
  return doc;
}

}  // namespace cascade::acceptance
