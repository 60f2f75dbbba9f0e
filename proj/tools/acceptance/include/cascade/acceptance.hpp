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

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace cascade::acceptance {

enum class Comparison { Below, AtLeast };

struct Check {
  std::string name;
  double measured = 0.0;
  Comparison comparison = Comparison::Below;
  double tolerance = 0.0;
  bool passed = false;
};

struct CriterionResult {
  std::string id;
  std::string title;
  std::vector<Check> checks;
  std::string detail;
  double seconds = 0.0;
  bool passed = false;
};

struct Criterion {
  std::string id;
  std::string title;
  std::function<CriterionResult()> run;
};

class UnknownSuite : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A1 .. A9 in order.
[[nodiscard]] const std::vector<Criterion>& criteria();

/// Valid names are "all" and the criterion ids; throws UnknownSuite otherwise.
[[nodiscard]] std::vector<const Criterion*> select(std::string_view suite);

/// Runs one criterion; exceptions become a failed result.
[[nodiscard]] CriterionResult run(const Criterion& criterion);

[[nodiscard]] Check make_check(std::string name, double measured, Comparison comparison, double tolerance);

/// One line per criterion: id, PASS/FAIL, each check with its tolerance, wall time.
[[nodiscard]] std::string summary_line(const CriterionResult& result);

/// Multi-row table with one row per check.
[[nodiscard]] std::string verdict_table(const std::vector<CriterionResult>& results);

[[nodiscard]] nlohmann::ordered_json verdict_json(const std::vector<CriterionResult>& results);

}  // namespace cascade::acceptance
