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

#include "cascade/evolve.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "cascade/random.hpp"

namespace cascade {

// ---------------------------------------------------------------------------
// TimeGrid and channel names

TimeGrid::TimeGrid(double start, double stop, double step) : t0(start), t1(stop), dt(step) {
  if (!(dt > 0.0)) throw std::invalid_argument("TimeGrid: dt must be positive");
  if (!(t1 >= t0)) throw std::invalid_argument("TimeGrid: t1 must not precede t0");
  const double n = (t1 - t0) / dt;
  if (std::abs(n - std::round(n)) > 1e-9 * std::max(1.0, n))
    throw std::invalid_argument("TimeGrid: (t1 - t0) / dt must be an integer");
}

int TimeGrid::steps() const { return static_cast<int>(std::llround((t1 - t0) / dt)); }

std::vector<double> TimeGrid::times() const {
  std::vector<double> out(steps() + 1);
  for (int k = 0; k <= steps(); ++k) out[k] = time(k);
  return out;
}

std::vector<int> TimeGrid::sample_steps(int every) const {
  if (every < 1) throw std::invalid_argument("sample_steps: stride must be >= 1");
  std::vector<int> out;
  for (int k = 0; k <= steps(); k += every) out.push_back(k);
  if (out.back() != steps()) out.push_back(steps());
  return out;
}

std::string_view to_string(ChannelLabel label) {
  switch (label) {
    case ChannelLabel::Forward:
      return "forward_f";
    case ChannelLabel::Side:
      return "side_s";
    case ChannelLabel::Pump:
      return "pump";
    case ChannelLabel::Gain:
      return "gain";
    case ChannelLabel::Nonlasing:
      return "nonlasing";
  }
  return "unknown";
}

std::optional<ChannelLabel> channel_from_string(std::string_view name) {
  for (auto l : {ChannelLabel::Forward, ChannelLabel::Side, ChannelLabel::Pump, ChannelLabel::Gain,
                 ChannelLabel::Nonlasing})
    if (to_string(l) == name) return l;
  return std::nullopt;
}

int Record::count(ChannelLabel label) const {
  return static_cast<int>(std::count_if(events.begin(), events.end(), [&](const auto& e) { return e.label == label; }));
}

// ---------------------------------------------------------------------------
// Master equation

namespace {

void check_sample(const Matrix& rho, double t, const MasterOptions& options) {
  std::ostringstream os;
  os.precision(4);
  if (!rho.allFinite()) {
    os << "non-finite density matrix at t=" << t;
    throw InvariantViolation(os.str());
  }
  const double drift = std::abs(rho.trace() - 1.0);
  if (drift > options.trace_tolerance) {
    os << "trace drift " << drift << " at t=" << t;
    throw InvariantViolation(os.str());
  }
  const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (herm > options.hermitian_tolerance) {
    os << "Hermiticity residual " << herm << " at t=" << t;
    throw InvariantViolation(os.str());
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
  if (const double lo = solver.eigenvalues().minCoeff(); lo < -options.negativity_tolerance) {
    os << "negative eigenvalue " << lo << " at t=" << t;
    throw InvariantViolation(os.str());
  }
}

}  // namespace

std::vector<DensityOperator> evolve_master(const DensityOperator& rho0, const Superoperator& generator,
                                           const TimeGrid& grid, const MasterOptions& options) {
  if (generator.dim() != rho0.dim()) throw DimensionError("evolve_master: generator and state dimensions differ");
  if (options.rate_scale > 0.0 && grid.dt * options.rate_scale > kStabilityLimit * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "evolve_master: dt * max_rate = " << grid.dt * options.rate_scale << " exceeds " << kStabilityLimit;
    throw std::invalid_argument(os.str());
  }
  if (auto problem = rho0.check(); !problem.empty()) throw InvalidState("evolve_master: initial state " + problem);

  const CompiledGenerator l(generator);
  const Index d = rho0.dim();
  const double dt = grid.dt;
  Matrix rho = rho0.matrix();
  Matrix k1(d, d), k2(d, d), k3(d, d), k4(d, d), tmp(d, d);

  const std::vector<int> samples = grid.sample_steps(options.sample_every);
  std::vector<DensityOperator> out;
  out.reserve(samples.size());
  auto next = samples.begin();
  for (int k = 0; k <= grid.steps(); ++k) {
    if (next != samples.end() && *next == k) {
      check_sample(rho, grid.time(k), options);
      out.push_back(DensityOperator::unchecked(rho, rho0.layout(), rho0.fock()));
      ++next;
    }
    if (k == grid.steps()) break;
    l.apply(rho, k1);
    tmp = rho + (0.5 * dt) * k1;
    l.apply(tmp, k2);
    tmp = rho + (0.5 * dt) * k2;
    l.apply(tmp, k3);
    tmp = rho + dt * k3;
    l.apply(tmp, k4);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Trajectories

TrajectoryModel::TrajectoryModel(const CouplingConfig& config, const SourceModel& source, const FockSpec& spec)
    : fock_(spec) {
  validate(source);
  const Index d = spec.composite_dim();
  const JumpOperators jumps = build_jump_ops(config, spec);
  if (!jumps.forward.is_zero()) channels_.push_back({ChannelLabel::Forward, jumps.forward});
  if (!jumps.side.is_zero()) channels_.push_back({ChannelLabel::Side, jumps.side});

  base_hamiltonian_ = build_nonhermitian_H(config, spec).matrix() + source_hamiltonian(source, spec).matrix();
  carrier_hamiltonian_ = Matrix::Zero(d, d);
  if (const auto* laser = std::get_if<BirthDeathLaser>(&source)) {
    for (auto& c : source_jump_channels(source, config, spec)) {
      if (c.is_quantum() && c.scales_with_carriers)
        carrier_hamiltonian_ += -0.5 * kI * (c.op->adjoint() * *c.op).matrix();
      else if (c.is_quantum())
        base_hamiltonian_ += -0.5 * kI * (c.op->adjoint() * *c.op).matrix();
      channels_.push_back(std::move(c));
    }
    initial_carriers_ = laser->N0;
  }
}

Matrix TrajectoryModel::nonhermitian_hamiltonian(int carriers) const {
  return base_hamiltonian_ + static_cast<double>(carriers) * carrier_hamiltonian_;
}

TrajectoryResult mcwf_run(const PureState& psi0, const TrajectoryModel& model, const TimeGrid& grid,
                          std::uint64_t seed, const TrajectoryOptions& options) {
  if (psi0.layout() != Layout::Composite || psi0.dim() != model.fock().composite_dim())
    throw DimensionError("mcwf_run: initial state must live on the composite space");
  if (std::abs(psi0.norm() - 1.0) > 1e-12) throw InvalidState("mcwf_run: initial state is not normalized");

  const double dt = grid.dt;
  const auto& channels = model.channels();
  const std::size_t nc = channels.size();
  const Index d = psi0.dim();

  TrajectoryResult result;
  result.record.seed = seed;
  Rng rng(seed);
  Vector psi = psi0.amplitudes();
  int carriers = model.initial_carriers_;
  Matrix h = model.nonhermitian_hamiltonian(carriers);

  std::vector<Vector> jumped(nc, Vector(d));
  std::vector<double> prob(nc, 0.0);
  Vector hpsi(d);
  bool warned = false;

  const std::vector<int> samples = grid.sample_steps(options.sample_every);
  auto next = samples.begin();
  auto store = [&](int k) {
    if (next != samples.end() && *next == k) {
      result.times.push_back(grid.time(k));
      result.states.emplace_back(psi, Layout::Composite, model.fock());
      result.classical.push_back({carriers});
      ++next;
    }
  };
  store(0);

  for (int k = 0; k < grid.steps(); ++k) {
    double total = 0.0;
    for (std::size_t c = 0; c < nc; ++c) {
      const JumpChannel& ch = channels[c];
      const double factor = ch.carrier_factor(carriers);
      if (ch.is_quantum()) {
        if (factor == 0.0) {
          prob[c] = 0.0;
          continue;
        }
        jumped[c].noalias() = ch.op->matrix() * psi;
        prob[c] = dt * factor * jumped[c].squaredNorm();
      } else {
        prob[c] = dt * ch.rate * factor;
      }
      total += prob[c];
    }
    result.max_step_probability = std::max(result.max_step_probability, total);
    if (total > options.max_probability) {
      std::ostringstream os;
      os.precision(4);
      os << "mcwf_run: step jump probability " << total << " exceeds " << options.max_probability << " at t="
         << grid.time(k) << "; channels:";
      for (std::size_t c = 0; c < nc; ++c) os << ' ' << to_string(channels[c].label) << '=' << prob[c];
      throw StepProbabilityError(os.str());
    }
    if (total > options.warn_probability && !warned) {
      warned = true;
      std::ostringstream os;
      os << "mcwf_run: step jump probability above the recommended " << options.warn_probability
         << "; max_step_probability reports the peak";
      warn(os.str());
    }

    std::optional<ChannelLabel> event;
    const double r = rng.uniform();
    if (r < total) {
      const double pick = rng.uniform() * total;
      std::size_t chosen = nc - 1;
      double acc = 0.0;
      for (std::size_t c = 0; c < nc; ++c) {
        acc += prob[c];
        if (pick < acc && prob[c] > 0.0) {
          chosen = c;
          break;
        }
      }
      while (prob[chosen] == 0.0 && chosen > 0) --chosen;
      const JumpChannel& ch = channels[chosen];
      if (ch.is_quantum()) psi = jumped[chosen] / jumped[chosen].norm();
      const int before = carriers;
      if (ch.carrier_effect == CarrierEffect::Increment) ++carriers;
      if (ch.carrier_effect == CarrierEffect::Decrement) carriers = std::max(0, carriers - 1);
      if (carriers != before) h = model.nonhermitian_hamiltonian(carriers);
      event = ch.label;
      result.record.events.push_back({grid.time(k + 1), ch.label});
    } else {
      hpsi.noalias() = h * psi;
      if (options.order == NoJumpOrder::Second) {
        Vector h2psi = h * hpsi;
        psi += (-kI * dt) * hpsi - (0.5 * dt * dt) * h2psi;
      } else {
        psi += (-kI * dt) * hpsi;
      }
      const double n = psi.norm();
      if (!(n > 0.0) || !std::isfinite(n)) throw InvariantViolation("mcwf_run: state collapsed to zero norm");
      psi /= n;
    }
    if (options.observer) options.observer(StepView{k + 1, grid.time(k + 1), psi, carriers, event});
    store(k + 1);
  }
  return result;
}

TrajectoryResult mcwf_run(const PureState& psi0, const CouplingConfig& config, const SourceModel& source,
                          const TimeGrid& grid, std::uint64_t seed, const TrajectoryOptions& options) {
  return mcwf_run(psi0, TrajectoryModel(config, source, psi0.fock()), grid, seed, options);
}

// ---------------------------------------------------------------------------
// Ensembles

EnsembleAccumulator::EnsembleAccumulator(std::vector<double> times, Index dim, FockSpec spec)
    : times_(std::move(times)), sums_(times_.size(), Matrix::Zero(dim, dim)), fock_(spec) {}

void EnsembleAccumulator::add(std::size_t sample, const Vector& psi) {
  if (sample >= sums_.size()) throw DimensionError("EnsembleAccumulator: sample index out of range");
  sums_[sample].noalias() += psi * psi.adjoint();
}

void EnsembleAccumulator::add(const TrajectoryResult& result) {
  if (result.times != times_) throw DimensionError("EnsembleAccumulator: trajectory sample grid mismatch");
  for (std::size_t s = 0; s < result.states.size(); ++s) add(s, result.states[s].amplitudes());
  ++count_;
}

void EnsembleAccumulator::merge(const EnsembleAccumulator& other) {
  if (other.count_ == 0) return;
  if (count_ == 0 && sums_.empty()) {
    *this = other;
    return;
  }
  if (other.times_ != times_) throw DimensionError("EnsembleAccumulator::merge: sample grid mismatch");
  for (std::size_t s = 0; s < sums_.size(); ++s) sums_[s] += other.sums_[s];
  count_ += other.count_;
}

std::vector<DensityOperator> EnsembleAccumulator::average() const {
  if (count_ == 0) throw std::logic_error("EnsembleAccumulator: no trajectories accumulated");
  std::vector<DensityOperator> out;
  out.reserve(sums_.size());
  for (const auto& s : sums_)
    out.push_back(DensityOperator::unchecked(s / static_cast<double>(count_), Layout::Composite, fock_));
  return out;
}

std::vector<DensityOperator> ensemble_average(const std::vector<TrajectoryResult>& results) {
  if (results.empty()) throw std::invalid_argument("ensemble_average: no trajectories");
  const auto& first = results.front();
  if (first.states.empty()) throw std::invalid_argument("ensemble_average: trajectory has no samples");
  EnsembleAccumulator acc(first.times, first.states.front().dim(), first.states.front().fock());
  for (const auto& r : results) acc.add(r);
  return acc.average();
}

EnsembleAccumulator run_ensemble(const std::function<PureState(int, std::uint64_t)>& initial_state,
                                 const TrajectoryModel& model, const TimeGrid& grid, int count,
                                 std::uint64_t base_seed, const EnsembleOptions& options) {
  if (count < 1) throw std::invalid_argument("run_ensemble: count must be >= 1");
  std::vector<double> sample_times;
  for (int k : grid.sample_steps(options.trajectory.sample_every)) sample_times.push_back(grid.time(k));
  const Index d = model.fock().composite_dim();
  const int block = std::max(1, options.block_size);
  const int nblocks = (count + block - 1) / block;

  EnsembleAccumulator total(sample_times, d, model.fock());
  std::map<int, EnsembleAccumulator> pending;
  int next_merge = 0;
  std::mutex mutex;
  std::atomic<int> next_block{0};
  std::exception_ptr failure;

  auto work = [&] {
    for (;;) {
      const int b = next_block.fetch_add(1);
      if (b >= nblocks) return;
      {
        std::lock_guard lock(mutex);
        if (failure) return;
      }
      try {
        EnsembleAccumulator acc(sample_times, d, model.fock());
        for (int m = b * block; m < std::min(count, (b + 1) * block); ++m) {
          const std::uint64_t seed = derive_seed(base_seed, static_cast<std::uint64_t>(m));
          TrajectoryResult r = mcwf_run(initial_state(m, seed), model, grid, seed, options.trajectory);
          if (options.on_result) options.on_result(m, r);
          acc.add(r);
        }
        std::lock_guard lock(mutex);
        pending.emplace(b, std::move(acc));
        while (!pending.empty() && pending.begin()->first == next_merge) {
          total.merge(pending.begin()->second);
          pending.erase(pending.begin());
          ++next_merge;
        }
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  const int workers = std::clamp(options.workers, 1, nblocks);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return total;
}

int workers_from_env() {
  if (const char* env = std::getenv("CASCADE_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1 && v <= 1024) return static_cast<int>(v);
  }
  return 1;
}

// ---------------------------------------------------------------------------

Complex expectation(const Matrix& rho, const Operator& op) {
  if (rho.rows() != op.dim() || rho.cols() != op.dim()) throw DimensionError("expectation: dimension mismatch");
  return (op.matrix() * rho).trace();
}

Complex expectation(const DensityOperator& rho, const Operator& op) { return expectation(rho.matrix(), op); }

Complex expectation(const PureState& psi, const Operator& op) {
  if (psi.dim() != op.dim()) throw DimensionError("expectation: dimension mismatch");
  return psi.amplitudes().dot(op.matrix() * psi.amplitudes());
}

}  // namespace cascade
