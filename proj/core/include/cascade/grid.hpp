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
#pragma once

#include <vector>

namespace cascade {

/// Uniform time grid t0, t0 + dt, ..., t1.
struct TimeGrid {
  double t0 = 0.0;
  double t1 = 1.0;
  double dt = 0.01;

  TimeGrid() = default;
  /// Throws std::invalid_argument unless dt > 0 and (t1 - t0) / dt is integral within rounding.
  TimeGrid(double start, double stop, double step);

  [[nodiscard]] int steps() const;
  [[nodiscard]] double time(int k) const { return t0 + k * dt; }
  [[nodiscard]] std::vector<double> times() const;
  /// Sample indices 0, every, 2 every, ..., always including the final step.
  [[nodiscard]] std::vector<int> sample_steps(int every) const;
};

}  // namespace cascade
