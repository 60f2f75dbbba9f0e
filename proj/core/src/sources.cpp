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

#include "cascade/sources.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cascade/random.hpp"

namespace cascade {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void validate_weights(const std::vector<WeightedAmplitude>& samples, double tol, const char* what) {
  if (samples.empty()) throw std::invalid_argument(std::string(what) + ": no samples");
  double total = 0.0;
  for (const auto& s : samples) {
    if (!(s.weight >= 0.0)) throw std::invalid_argument(std::string(what) + ": negative weight");
    total += s.weight;
  }
  if (std::abs(total - 1.0) > tol) throw std::invalid_argument(std::string(what) + ": weights must sum to 1");
}

}  // namespace

void PDistribution::validate(double tol) const { validate_weights(samples, tol, "PDistribution"); }

DensityOperator PDistribution::source_state(const FockSpec& spec) const {
  validate();
  Matrix rho = Matrix::Zero(spec.source_dim(), spec.source_dim());
  for (const auto& s : samples) rho += s.weight * coherent_state(s.alpha, spec).projector();
  return DensityOperator::unchecked(std::move(rho), Layout::Source, spec);
}

PDistribution p_distribution_at(const std::vector<ClassicalPath>& paths, std::size_t index) {
  PDistribution p;
  p.samples.reserve(paths.size());
  for (const auto& path : paths) {
    if (index >= path.size()) throw DimensionError("p_distribution_at: index past the end of a path");
    p.samples.push_back({path.alphas[index], path.weight});
  }
  return p;
}

void validate(const SourceModel& model) {
  std::visit(overloaded{
                 [](const CoherentDrive& m) {
                   if (!std::isfinite(m.epsilon.real()) || !std::isfinite(m.epsilon.imag()))
                     throw std::invalid_argument("CoherentDrive: epsilon must be finite");
                 },
                 [](const FreeDecayMixture& m) { validate_weights(m.initial_amplitudes, 1e-12, "FreeDecayMixture"); },
                 [](const BirthDeathLaser& m) {
                   if (!(m.pump_rate >= 0.0) || !(m.gain >= 0.0) || !(m.nonlasing_rate >= 0.0))
                     throw std::invalid_argument("BirthDeathLaser: rates must be non-negative");
                   if (m.N0 < 0 || m.n0 < 0) throw std::invalid_argument("BirthDeathLaser: N0 and n0 must be >= 0");
                 },
             },
             model);
}

std::string_view source_name(const SourceModel& model) {
  return std::visit(overloaded{
                        [](const CoherentDrive&) { return std::string_view("coherent_drive"); },
                        [](const FreeDecayMixture&) { return std::string_view("free_decay_mixture"); },
                        [](const BirthDeathLaser&) { return std::string_view("birth_death"); },
                    },
                    model);
}

Complex steady_amplitude(const CoherentDrive& drive, const CouplingConfig& config) {
  if (!(config.gamma_S > 0.0)) throw std::invalid_argument("steady_amplitude: gamma_S must be positive");
  return 2.0 * drive.epsilon / config.gamma_S;
}

Operator source_hamiltonian(const SourceModel& model, const FockSpec& spec) {
  if (const auto* drive = std::get_if<CoherentDrive>(&model)) {
    const Operator a = annihilation(spec);
    const Operator h = kI * (drive->epsilon * a.adjoint() - std::conj(drive->epsilon) * a);
    return embed(h, Factor::Source, spec).with_label("H_S");
  }
  return zero_operator(spec.composite_dim()).with_label("H_S");
}

Superoperator build_L_S(const SourceModel& model, const FockSpec& spec) {
  if (std::holds_alternative<BirthDeathLaser>(model))
    throw UnsupportedSource("build_L_S: the birth-death laser is trajectory-only");
  Superoperator l(spec.composite_dim(), "L_S");
  l.add_hamiltonian(source_hamiltonian(model, spec));
  return l;
}

std::vector<JumpChannel> source_jump_channels(const SourceModel& model, const CouplingConfig& /*config*/,
                                              const FockSpec& spec) {
  const auto* laser = std::get_if<BirthDeathLaser>(&model);
  if (laser == nullptr) throw UnsupportedSource("source_jump_channels: only the birth-death laser has source channels");
  std::vector<JumpChannel> channels;
  channels.push_back({ChannelLabel::Pump, std::nullopt, CarrierEffect::Increment, laser->pump_rate, false});
  const Operator gain_op =
      (std::sqrt(laser->gain) * embed(creation(spec), Factor::Source, spec)).with_label("sqrt(g) a^dag");
  channels.push_back({ChannelLabel::Gain, gain_op, CarrierEffect::Decrement, 0.0, true});
  channels.push_back({ChannelLabel::Nonlasing, std::nullopt, CarrierEffect::Decrement, laser->nonlasing_rate, true});
  return channels;
}

std::vector<ClassicalPath> classical_paths(const SourceModel& model, const CouplingConfig& config,
                                           const TimeGrid& grid, int /*count*/, std::uint64_t /*seed*/) {
  const std::vector<double> times = grid.times();
  auto decay = [&](double t) { return std::exp(-0.5 * config.gamma_S * (t - grid.t0)); };
  return std::visit(
      overloaded{
          [&](const CoherentDrive& drive) {
            const Complex ss = steady_amplitude(drive, config);
            const Complex start = drive.initial_alpha.value_or(ss);
            ClassicalPath path{times, {}, 1.0};
            path.alphas.reserve(times.size());
            for (double t : times) path.alphas.push_back(ss + (start - ss) * decay(t));
            return std::vector<ClassicalPath>{std::move(path)};
          },
          [&](const FreeDecayMixture& mix) {
            validate(model);
            std::vector<ClassicalPath> paths;
            for (const auto& w : mix.initial_amplitudes) {
              ClassicalPath path{times, {}, w.weight};
              path.alphas.reserve(times.size());
              for (double t : times) path.alphas.push_back(w.alpha * decay(t));
              paths.push_back(std::move(path));
            }
            return paths;
          },
          [](const BirthDeathLaser&) -> std::vector<ClassicalPath> {
            throw UnsupportedSource("classical_paths: the birth-death laser has no classical path ensemble");
          },
      },
      model);
}

std::vector<ClassicalPath> ring_paths(double r0, double phase_diffusion, double gamma_S, const TimeGrid& grid,
                                      int count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("ring_paths: count must be >= 1");
  if (!(phase_diffusion >= 0.0) || !(r0 >= 0.0)) throw std::invalid_argument("ring_paths: r0 and D must be >= 0");
  const std::vector<double> times = grid.times();
  const double step_sigma = std::sqrt(2.0 * phase_diffusion * grid.dt);
  std::vector<ClassicalPath> paths;
  paths.reserve(count);
  for (int m = 0; m < count; ++m) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(m)));
    double phi = 2.0 * std::numbers::pi * rng.uniform();
    ClassicalPath path{times, {}, 1.0 / count};
    path.alphas.reserve(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) {
      if (k > 0) phi += step_sigma * rng.normal();
      path.alphas.push_back(std::polar(r0 * std::exp(-0.5 * gamma_S * (times[k] - grid.t0)), phi));
    }
    paths.push_back(std::move(path));
  }
  return paths;
}

Superoperator phase_diffusion_generator(double phase_diffusion, const FockSpec& spec) {
  Superoperator l(spec.composite_dim(), "L_phase");
  l.add_dissipator(embed(number(spec), Factor::Source, spec), 2.0 * phase_diffusion);
  return l;
}

double max_rate(const CouplingConfig& config, const SourceModel& model) {
  double r = std::max({config.gamma_S, config.gamma_T(), config.coupling(), std::abs(config.delta)});
  std::visit(overloaded{
                 [&](const CoherentDrive& m) { r = std::max(r, std::abs(m.epsilon)); },
                 [](const FreeDecayMixture&) {},
                 [&](const BirthDeathLaser& m) { r = std::max({r, m.pump_rate, m.gain, m.nonlasing_rate}); },
             },
             model);
  return r;
}

}  // namespace cascade
