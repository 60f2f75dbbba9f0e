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
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "cascade/experiment.hpp"

namespace cascade::experiment {
namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

// Reader over one JSON object that rejects unknown keys.
class Fields {
 public:
  Fields(const json& object, std::string path, std::string_view origin)
      : object_(object), path_(std::move(path)), origin_(origin) {
    if (!object_.is_object()) fail(path_.empty() ? "top level must be an object" : "'" + path_ + "' must be an object");
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ConfigError(std::string(origin_) + ": " + message);
  }

  [[nodiscard]] std::string key(std::string_view name) const {
    return path_.empty() ? std::string(name) : path_ + "." + std::string(name);
  }

  [[nodiscard]] bool has(const char* name) {
    seen_.insert(name);
    return object_.contains(name) && !object_.at(name).is_null();
  }

  [[nodiscard]] const json& at(const char* name) {
    seen_.insert(name);
    return object_.at(name);
  }

  double number(const char* name, double fallback) {
    if (!has(name)) return fallback;
    const json& v = at(name);
    if (!v.is_number()) fail("'" + key(name) + "' must be a number");
    return v.get<double>();
  }

  long long integer(const char* name, long long fallback) {
    if (!has(name)) return fallback;
    const json& v = at(name);
    if (!v.is_number_integer()) fail("'" + key(name) + "' must be an integer");
    return v.get<long long>();
  }

  std::string string(const char* name, std::string fallback) {
    if (!has(name)) return fallback;
    const json& v = at(name);
    if (!v.is_string()) fail("'" + key(name) + "' must be a string");
    return v.get<std::string>();
  }

  Complex complex(const char* name, Complex fallback) {
    if (!has(name)) return fallback;
    return parse_complex(at(name), key(name));
  }

  Complex parse_complex(const json& v, const std::string& where) const {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
      return {v[0].get<double>(), v[1].get<double>()};
    fail("'" + where + "' must be a number or a [re, im] pair");
  }

  void finish() const {
    for (auto it = object_.begin(); it != object_.end(); ++it)
      if (!seen_.contains(it.key())) fail("unknown field '" + key(it.key()) + "'");
  }

 private:
  const json& object_;
  std::string path_;
  std::string_view origin_;
  std::set<std::string, std::less<>> seen_;
};

std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return std::to_string(line) + ":" + std::to_string(column);
}

SourceModel parse_source(Fields& top, std::string_view origin) {
  if (!top.has("source")) return CoherentDrive{};
  Fields f(top.at("source"), "source", origin);
  const std::string kind = f.string("kind", "coherent_drive");
  SourceModel model;
  if (kind == "coherent_drive") {
    CoherentDrive d;
    d.epsilon = f.complex("epsilon", d.epsilon);
    if (f.has("initial_alpha")) d.initial_alpha = f.complex("initial_alpha", 0.0);
    model = d;
  } else if (kind == "free_decay_mixture") {
    FreeDecayMixture m;
    if (!f.has("amplitudes") || !f.at("amplitudes").is_array())
      f.fail("'source.amplitudes' must be an array of {alpha, weight}");
    const json& list = f.at("amplitudes");
    for (std::size_t i = 0; i < list.size(); ++i) {
      Fields item(list[i], "source.amplitudes[" + std::to_string(i) + "]", origin);
      WeightedAmplitude w;
      w.alpha = item.complex("alpha", 0.0);
      w.weight = item.number("weight", 1.0);
      item.finish();
      m.initial_amplitudes.push_back(w);
    }
    model = m;
  } else if (kind == "birth_death") {
    BirthDeathLaser b;
    b.pump_rate = f.number("pump_rate", b.pump_rate);
    b.gain = f.number("gain", b.gain);
    b.nonlasing_rate = f.number("nonlasing_rate", b.nonlasing_rate);
    b.N0 = static_cast<int>(f.integer("N0", b.N0));
    b.n0 = static_cast<int>(f.integer("n0", b.n0));
    model = b;
  } else {
    f.fail("'source.kind' must be coherent_drive, free_decay_mixture or birth_death, got '" + kind + "'");
  }
  f.finish();
  return model;
}

InitialSpec parse_initial(Fields& top, std::string_view origin) {
  InitialSpec spec;
  if (!top.has("initial")) return spec;
  Fields f(top.at("initial"), "initial", origin);
  const std::string source = f.string("source", "default");
  if (source == "default") {
    spec.source = InitialSpec::Source::Default;
  } else if (source == "vacuum") {
    spec.source = InitialSpec::Source::Vacuum;
  } else if (source == "fock") {
    spec.source = InitialSpec::Source::Fock;
    spec.n = static_cast<int>(f.integer("n", 0));
  } else if (source == "coherent") {
    spec.source = InitialSpec::Source::Coherent;
    spec.alpha = f.complex("alpha", 0.0);
  } else {
    f.fail("'initial.source' must be default, vacuum, fock or coherent, got '" + source + "'");
  }
  if (spec.source != InitialSpec::Source::Fock && f.has("n")) f.fail("'initial.n' only applies to source = fock");
  if (spec.source != InitialSpec::Source::Coherent && f.has("alpha"))
    f.fail("'initial.alpha' only applies to source = coherent");
  spec.qubit_ground = f.complex("qubit_ground", spec.qubit_ground);
  spec.qubit_excited = f.complex("qubit_excited", spec.qubit_excited);
  f.finish();
  return spec;
}

ojson complex_json(Complex z) { return ojson::array({z.real(), z.imag()}); }

std::string_view initial_name(InitialSpec::Source s) {
  switch (s) {
    case InitialSpec::Source::Default: return "default";
    case InitialSpec::Source::Vacuum: return "vacuum";
    case InitialSpec::Source::Fock: return "fock";
    case InitialSpec::Source::Coherent: return "coherent";
  }
  return "default";
}

}  // namespace

ExperimentConfig parse_config(std::string_view text, std::string_view origin) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::string what = e.what();
    if (auto pos = what.find("syntax error"); pos != std::string::npos) what = what.substr(pos);
    throw ConfigError(std::string(origin) + ":" + line_column(text, e.byte) + ": malformed JSON: " + what);
  }

  Fields top(doc, "", origin);
  ExperimentConfig c;
  c.scenario = top.string("scenario", c.scenario);
  if (top.has("coupling")) {
    Fields f(top.at("coupling"), "coupling", origin);
    c.coupling.gamma_S = f.number("gamma_S", c.coupling.gamma_S);
    c.coupling.gamma_Tf = f.number("gamma_Tf", c.coupling.gamma_Tf);
    c.coupling.gamma_Ts = f.number("gamma_Ts", c.coupling.gamma_Ts);
    c.coupling.delta = f.number("delta", c.coupling.delta);
    f.finish();
  }
  c.source = parse_source(top, origin);
  c.initial = parse_initial(top, origin);
  if (top.has("grid")) {
    Fields f(top.at("grid"), "grid", origin);
    c.grid.t0 = f.number("t0", c.grid.t0);
    c.grid.t1 = f.number("t1", c.grid.t1);
    c.grid.dt = f.number("dt", c.grid.dt);
    c.grid.sample_every = static_cast<int>(f.integer("sample_every", c.grid.sample_every));
    f.finish();
  }
  c.n_max = static_cast<int>(top.integer("n_max", c.n_max));
  const long long seed = top.integer("seed", static_cast<long long>(c.seed));
  if (seed < 0) top.fail("'seed' must be non-negative");
  c.seed = static_cast<std::uint64_t>(seed);
  c.trajectories = static_cast<int>(top.integer("trajectories", c.trajectories));
  c.trajectory_files = static_cast<int>(top.integer("trajectory_files", c.trajectory_files));
  const std::string order = top.string("no_jump_order", "first");
  if (order == "first") {
    c.no_jump_order = NoJumpOrder::First;
  } else if (order == "second") {
    c.no_jump_order = NoJumpOrder::Second;
  } else {
    top.fail("'no_jump_order' must be first or second");
  }
  c.output_dir = top.string("output_dir", c.output_dir);
  top.finish();

  try {
    validate(c);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(origin) + ": " + e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.string());
}

void validate(const ExperimentConfig& c) {
  try {
    c.coupling.validate();
    cascade::validate(c.source);
    (void)c.time_grid();
    (void)c.fock();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (c.grid.sample_every < 1) throw ConfigError("grid.sample_every must be >= 1");
  if (c.trajectories < 1) throw ConfigError("trajectories must be >= 1");
  if (c.trajectory_files < 0) throw ConfigError("trajectory_files must be >= 0");
  if (c.output_dir.empty()) throw ConfigError("output_dir must not be empty");
  if (c.initial.source == InitialSpec::Source::Fock && (c.initial.n < 0 || c.initial.n > c.n_max))
    throw ConfigError("initial.n must lie in [0, n_max]");
  if (std::norm(c.initial.qubit_ground) + std::norm(c.initial.qubit_excited) == 0.0)
    throw ConfigError("initial qubit amplitudes must not both be zero");
  if (const auto* b = std::get_if<BirthDeathLaser>(&c.source);
      b != nullptr && c.initial.source == InitialSpec::Source::Default && b->n0 > c.n_max)
    throw ConfigError("source.n0 exceeds n_max");
  if (const auto* d = std::get_if<CoherentDrive>(&c.source); d != nullptr &&
                                                            c.initial.source == InitialSpec::Source::Default &&
                                                            !d->initial_alpha && !(c.coupling.gamma_S > 0.0))
    throw ConfigError("coherent_drive with gamma_S = 0 needs source.initial_alpha or an explicit initial state");
}

nlohmann::ordered_json to_json(const ExperimentConfig& c) {
  ojson j;
  j["scenario"] = c.scenario;
  j["coupling"] = {{"gamma_S", c.coupling.gamma_S},
                   {"gamma_Tf", c.coupling.gamma_Tf},
                   {"gamma_Ts", c.coupling.gamma_Ts},
                   {"delta", c.coupling.delta}};
  ojson s;
  s["kind"] = std::string(source_name(c.source));
  if (const auto* d = std::get_if<CoherentDrive>(&c.source)) {
    s["epsilon"] = complex_json(d->epsilon);
    if (d->initial_alpha) {
      s["initial_alpha"] = complex_json(*d->initial_alpha);
    } else if (c.coupling.gamma_S > 0.0) {
      s["initial_alpha"] = complex_json(steady_amplitude(*d, c.coupling));
    } else {
      s["initial_alpha"] = nullptr;
    }
  } else if (const auto* m = std::get_if<FreeDecayMixture>(&c.source)) {
    s["amplitudes"] = ojson::array();
    for (const auto& w : m->initial_amplitudes)
      s["amplitudes"].push_back(ojson{{"alpha", complex_json(w.alpha)}, {"weight", w.weight}});
  } else if (const auto* b = std::get_if<BirthDeathLaser>(&c.source)) {
    s["pump_rate"] = b->pump_rate;
    s["gain"] = b->gain;
    s["nonlasing_rate"] = b->nonlasing_rate;
    s["N0"] = b->N0;
    s["n0"] = b->n0;
  }
  j["source"] = s;
  ojson init;
  init["source"] = std::string(initial_name(c.initial.source));
  if (c.initial.source == InitialSpec::Source::Fock) init["n"] = c.initial.n;
  if (c.initial.source == InitialSpec::Source::Coherent) init["alpha"] = complex_json(c.initial.alpha);
  init["qubit_ground"] = complex_json(c.initial.qubit_ground);
  init["qubit_excited"] = complex_json(c.initial.qubit_excited);
  j["initial"] = init;
  j["grid"] = {{"t0", c.grid.t0}, {"t1", c.grid.t1}, {"dt", c.grid.dt}, {"sample_every", c.grid.sample_every}};
  j["n_max"] = c.n_max;
  j["seed"] = c.seed;
  j["trajectories"] = c.trajectories;
  j["trajectory_files"] = c.trajectory_files;
  j["no_jump_order"] = c.no_jump_order == NoJumpOrder::First ? "first" : "second";
  j["output_dir"] = c.output_dir;
  return j;
}

}  // namespace cascade::experiment
