// Copyright 2026 The Interval Privacy Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Simulated progressive survey: respondents answer up to max_rounds rounds
// of a uniform progressive question, each stopping after a personal number
// of rounds. The distribution is estimated from round-1 answers and from
// the final cumulative ranges, and compared by energy distance with the
// empirical law of an independent group answering with exact values.

#ifndef INTPRIV_EXPERIMENTS_PROGRESSIVE_SIM_H_
#define INTPRIV_EXPERIMENTS_PROGRESSIVE_SIM_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "intpriv/core/distribution.h"
#include "intpriv/kernels/parallel.h"
#include "json.hpp"

namespace intpriv {

struct ProgressiveSimConfig {
  int n = 300;
  int seeds = 20;
  uint64_t seed = 2022;
  int max_rounds = 3;
  double lo = 0.0;
  double hi = 150.0;
  // Law of Y; by default a Gamma(2, 25) density on a grid over (lo, hi].
  std::optional<Distribution> law;
  // P(a respondent stops after k rounds), k = 1..max_rounds.
  std::vector<double> willingness;
  Execution exec = Execution::kParallel;

  static absl::StatusOr<ProgressiveSimConfig> FromJson(const nlohmann::json& j);
  nlohmann::json ToJson() const;
};

struct ProgressiveSimRow {
  uint64_t seed = 0;
  double ed_round1 = 0.0;
  double ed_roundx = 0.0;
  double coverage_round1 = 0.0;
  double coverage_roundx = 0.0;
};

struct ProgressiveSimResult {
  std::vector<ProgressiveSimRow> rows;
  double MedianRound1() const;
  double MedianRoundX() const;
  // seed,ed_round1,ed_roundx,coverage_round1,coverage_roundx
  std::string ToCsv() const;
  nlohmann::json ToJson() const;
};

absl::StatusOr<ProgressiveSimResult> RunProgressiveSimulation(const ProgressiveSimConfig& cfg);

}  // namespace intpriv

#endif  // INTPRIV_EXPERIMENTS_PROGRESSIVE_SIM_H_
