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

#include <atomic>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>

#include <unistd.h>

#include "cascade/analysis.hpp"
#include "cascade/experiment.hpp"
#include "cascade/random.hpp"

namespace cascade::experiment {
namespace {

using ojson = nlohmann::ordered_json;

constexpr std::string_view kBasisOrdering = "composite index = 2*n + q; q = 0 is |->, q = 1 is |+>";
constexpr double kSupportTolerance = 1e-10;

// Matches the sample checks of evolve_master.
constexpr StateTolerance kOutputTolerance{1e-10, 1e-8, -1e-8};

/// Stream of the per-trajectory seed used to draw a FreeDecayMixture amplitude.
constexpr std::uint64_t kInitialStream = 1;

struct Observables {
  Operator n;
  Operator excited;
  Operator a;
  Operator b;
};

Observables make_observables(const FockSpec& fock) {
  const Operator b = qubit_lowering();
  return {embed(number(fock), Factor::Source, fock), embed(b.adjoint() * b, Factor::Target, fock),
          embed(annihilation(fock), Factor::Source, fock), embed(b, Factor::Target, fock)};
}

std::string join(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) line += ',';
    line += cells[i];
  }
  line += '\n';
  return line;
}

const std::vector<std::string> kStateColumns = {"time",  "photon_number", "excited_population", "a_re", "a_im",
                                                "b_re",  "b_im",          "trace",              "source_purity",
                                                "negativity"};

std::vector<std::string> state_row(double t, const Matrix& rho, const Observables& obs, const FockSpec& fock) {
  const Matrix source = partial_trace(rho, Factor::Source, fock);
  const Complex a = (rho * obs.a.matrix()).trace();
  const Complex b = (rho * obs.b.matrix()).trace();
  const double neg = negativity(DensityOperator::unchecked(rho, Layout::Composite, fock), kOutputTolerance);
  return {format_number(t),
          format_number((rho * obs.n.matrix()).trace().real()),
          format_number((rho * obs.excited.matrix()).trace().real()),
          format_number(a.real()),
          format_number(a.imag()),
          format_number(b.real()),
          format_number(b.imag()),
          format_number(rho.trace().real()),
          format_number((source * source).trace().real()),
          format_number(neg)};
}

PureState qubit_initial(const InitialSpec& init) {
  PureState q = qubit_state(init.qubit_ground, init.qubit_excited);
  q.normalize();
  return q;
}

/// Pure source initial state; every case except a FreeDecayMixture default.
PureState source_pure_state(const ExperimentConfig& c) {
  const FockSpec fock = c.fock();
  switch (c.initial.source) {
    case InitialSpec::Source::Vacuum: return fock_state(0, fock);
    case InitialSpec::Source::Fock: return fock_state(c.initial.n, fock);
    case InitialSpec::Source::Coherent: return coherent_state(c.initial.alpha, fock);
    case InitialSpec::Source::Default: break;
  }
  if (const auto* d = std::get_if<CoherentDrive>(&c.source))
    return coherent_state(d->initial_alpha.value_or(steady_amplitude(*d, c.coupling)), fock);
  return fock_state(std::get<BirthDeathLaser>(c.source).n0, fock);
}

const FreeDecayMixture* default_mixture(const ExperimentConfig& c) {
  if (c.initial.source != InitialSpec::Source::Default) return nullptr;
  return std::get_if<FreeDecayMixture>(&c.source);
}

DensityOperator source_density(const ExperimentConfig& c) {
  if (const auto* m = default_mixture(c)) return PDistribution{m->initial_amplitudes}.source_state(c.fock());
  return DensityOperator::from_pure(source_pure_state(c));
}

/// Source initial state of one trajectory; a FreeDecayMixture default draws
/// one amplitude by weight from a stream derived from the trajectory seed.
PureState source_pure(const ExperimentConfig& c, std::uint64_t trajectory_seed) {
  const auto* m = default_mixture(c);
  if (m == nullptr) return source_pure_state(c);
  Rng rng(derive_seed(trajectory_seed, kInitialStream));
  const double u = rng.uniform();
  double acc = 0.0;
  for (const auto& w : m->initial_amplitudes) {
    acc += w.weight;
    if (u < acc) return coherent_state(w.alpha, c.fock());
  }
  return coherent_state(m->initial_amplitudes.back().alpha, c.fock());
}

/// Initial excitation number when the state sits in one block, else -1.
int initial_excitation(const ExperimentConfig& c) {
  int n = -1;
  if (c.initial.source == InitialSpec::Source::Vacuum) n = 0;
  if (c.initial.source == InitialSpec::Source::Fock) n = c.initial.n;
  if (c.initial.source == InitialSpec::Source::Default)
    if (const auto* b = std::get_if<BirthDeathLaser>(&c.source)) n = b->n0;
  if (n < 0) return -1;
  const bool ground = c.initial.qubit_excited == Complex(0.0);
  const bool excited = c.initial.qubit_ground == Complex(0.0);
  if (ground) return n;
  if (excited) return n + 1;
  return -1;
}

std::string trajectory_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "trajectory_%05d.csv", index);
  return buf;
}

std::string manifest(const ExperimentConfig& c, std::string_view command, std::vector<std::string> files,
                     const ojson& extra) {
  ojson m;
  m["program"] = "cascade";
  m["version"] = "0.1.0";
  m["command"] = std::string(command);
  m["config"] = to_json(c);
  for (auto it = extra.begin(); it != extra.end(); ++it) m[it.key()] = it.value();
  m["files"] = files;
  return m.dump(2) + "\n";
}

}  // namespace

// ---------------------------------------------------------------------------

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  static std::atomic<unsigned long> counter{0};
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string format_number(double value) {
  if (value == 0.0) return "0";  // folds -0
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, result.ptr);
}

nlohmann::ordered_json state_dump(const Matrix& rho, const FockSpec& fock, double time) {
  ojson j;
  j["layout"] = "composite";
  j["n_max"] = fock.n_max;
  j["dim"] = rho.rows();
  j["basis_ordering"] = std::string(kBasisOrdering);
  j["time"] = time;
  ojson rows = ojson::array();
  for (Index r = 0; r < rho.rows(); ++r) {
    ojson row = ojson::array();
    for (Index c = 0; c < rho.cols(); ++c) row.push_back(ojson::array({rho(r, c).real(), rho(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  j["matrix"] = std::move(rows);
  return j;
}

RunSummary run_master(const ExperimentConfig& c) {
  validate(c);
  if (std::holds_alternative<BirthDeathLaser>(c.source))
    throw ConfigError("run-master: the birth_death source has no master-equation form; use run-trajectories");
  const FockSpec fock = c.fock();
  const TimeGrid grid = c.time_grid();
  const Superoperator generator = regroup(build_L_S(c.source, fock), c.coupling, fock).total();
  const DensityOperator rho0 = product(source_density(c), DensityOperator::from_pure(qubit_initial(c.initial)));

  MasterOptions options;
  options.sample_every = c.grid.sample_every;
  options.rate_scale = max_rate(c.coupling, c.source);
  std::vector<DensityOperator> states;
  try {
    states = evolve_master(rho0, generator, grid, options);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  const Observables obs = make_observables(fock);
  const std::vector<int> samples = grid.sample_steps(c.grid.sample_every);
  std::string csv = join(kStateColumns);
  for (std::size_t k = 0; k < states.size(); ++k)
    csv += join(state_row(grid.time(samples[k]), states[k].matrix(), obs, fock));

  RunSummary summary{c.output_dir, {"observables.csv", "final_state.json", "manifest.json"}};
  const std::filesystem::path dir(c.output_dir);
  write_atomic(dir / "observables.csv", csv);
  write_atomic(dir / "final_state.json", state_dump(states.back().matrix(), fock, grid.time(samples.back())).dump(2) + "\n");
  write_atomic(dir / "manifest.json", manifest(c, "run-master", summary.files, ojson::object()));
  return summary;
}

RunSummary run_trajectories(const ExperimentConfig& c, int workers) {
  validate(c);
  const FockSpec fock = c.fock();
  const TimeGrid grid = c.time_grid();
  const TrajectoryModel model(c.coupling, c.source, fock);
  const PureState qubit0 = qubit_initial(c.initial);
  const int excitation0 = initial_excitation(c);
  const Observables obs = make_observables(fock);
  const std::filesystem::path dir(c.output_dir);

  std::vector<std::string> traj_columns = {"time", "carriers", "photon_number", "excited_population",
                                           "a_re", "a_im",     "schmidt_entropy"};
  if (excitation0 >= 0) {
    traj_columns.push_back("out_of_span");
    traj_columns.push_back("support_ok");
  }

  std::mutex mutex;
  std::vector<int> jumps_by_channel(5, 0);
  double max_probability = 0.0;
  bool support_all = true;

  EnsembleOptions options;
  options.workers = workers;
  options.trajectory.sample_every = c.grid.sample_every;
  options.trajectory.order = c.no_jump_order;
  options.on_result = [&](int index, const TrajectoryResult& r) {
    std::string record = "time,channel\n";
    for (const auto& e : r.record.events) record += format_number(e.time) + "," + std::string(to_string(e.label)) + "\n";
    write_atomic(dir / "records" / trajectory_name(index), record);

    bool support_here = true;
    std::string series;
    const bool with_file = index < c.trajectory_files;
    if (with_file) series = join(traj_columns);
    std::size_t next_event = 0;
    int excitation = excitation0;
    for (std::size_t k = 0; k < r.times.size(); ++k) {
      const double t = r.times[k];
      while (next_event < r.record.events.size() && r.record.events[next_event].time <= t) {
        const ChannelLabel label = r.record.events[next_event++].label;
        if (label == ChannelLabel::Gain) ++excitation;
        if (label == ChannelLabel::Forward || label == ChannelLabel::Side) --excitation;
      }
      const PureState& psi = r.states[k];
      double outside = 0.0;
      if (excitation0 >= 0) {
        outside = out_of_span_amplitude(psi, excitation);
        support_here = support_here && outside < kSupportTolerance;
      }
      if (!with_file) continue;
      const Complex a = expectation(psi, obs.a);
      std::vector<std::string> row = {format_number(t),
                                      std::to_string(r.classical[k].N),
                                      format_number(expectation(psi, obs.n).real()),
                                      format_number(expectation(psi, obs.excited).real()),
                                      format_number(a.real()),
                                      format_number(a.imag()),
                                      format_number(schmidt_entropy(psi))};
      if (excitation0 >= 0) {
        row.push_back(format_number(outside));
        row.push_back(outside < kSupportTolerance ? "1" : "0");
      }
      series += join(row);
    }
    if (with_file) write_atomic(dir / "trajectories" / trajectory_name(index), series);

    std::lock_guard lock(mutex);
    for (const auto& e : r.record.events) ++jumps_by_channel[static_cast<int>(e.label)];
    max_probability = std::max(max_probability, r.max_step_probability);
    support_all = support_all && support_here;
  };

  const auto initial = [&](int, std::uint64_t seed) { return product(source_pure(c, seed), qubit0); };
  const EnsembleAccumulator ensemble = run_ensemble(initial, model, grid, c.trajectories, c.seed, options);
  const std::vector<DensityOperator> average = ensemble.average();

  std::string csv = join(kStateColumns);
  for (std::size_t k = 0; k < average.size(); ++k)
    csv += join(state_row(ensemble.times()[k], average[k].matrix(), obs, fock));

  RunSummary summary{c.output_dir, {}};
  for (int i = 0; i < c.trajectories; ++i) summary.files.push_back("records/" + trajectory_name(i));
  for (int i = 0; i < std::min(c.trajectories, c.trajectory_files); ++i)
    summary.files.push_back("trajectories/" + trajectory_name(i));
  summary.files.insert(summary.files.end(), {"ensemble_observables.csv", "ensemble_final_state.json", "manifest.json"});

  write_atomic(dir / "ensemble_observables.csv", csv);
  write_atomic(dir / "ensemble_final_state.json",
               state_dump(average.back().matrix(), fock, ensemble.times().back()).dump(2) + "\n");
  ojson stats;
  ojson jumps;
  for (auto label : {ChannelLabel::Forward, ChannelLabel::Side, ChannelLabel::Pump, ChannelLabel::Gain,
                     ChannelLabel::Nonlasing})
    jumps[std::string(to_string(label))] = jumps_by_channel[static_cast<int>(label)];
  stats["jump_counts"] = jumps;
  stats["max_step_probability"] = max_probability;
  if (excitation0 >= 0) stats["support_pattern_ok"] = support_all;
  write_atomic(dir / "manifest.json", manifest(c, "run-trajectories", summary.files, ojson{{"summary", stats}}));
  return summary;
}

}  // namespace cascade::experiment
