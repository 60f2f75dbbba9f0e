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

#include <optional>
#include <string_view>

#include "cascade/hilbert.hpp"

namespace cascade {

enum class ChannelLabel { Forward, Side, Pump, Gain, Nonlasing };

[[nodiscard]] std::string_view to_string(ChannelLabel label);
[[nodiscard]] std::optional<ChannelLabel> channel_from_string(std::string_view name);

enum class CarrierEffect { None, Increment, Decrement };

/// A record-producing channel. Quantum channels carry a jump operator;
/// classical-only channels (pump, non-lasing loss) move the carrier counter
/// and never touch the quantum state.
struct JumpChannel {
  ChannelLabel label = ChannelLabel::Forward;
  std::optional<Operator> op;
  CarrierEffect carrier_effect = CarrierEffect::None;
  /// Rate of a classical-only channel; ignored for quantum channels.
  double rate = 0.0;
  /// When set, the jump rate is multiplied by the carrier number N, i.e. the
  /// effective operator is sqrt(N) * op.
  bool scales_with_carriers = false;

  [[nodiscard]] bool is_quantum() const { return op.has_value(); }
  [[nodiscard]] double carrier_factor(int carriers) const { return scales_with_carriers ? carriers : 1.0; }
};

}  // namespace cascade
