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

// Moment estimation from single-anchor interval data, with contamination.
// Y ~ N(mean, sd); a share of each sample is replaced by an outlier value.
// E(Y) is collected with anchors ~ Uniform[-T, T] and E(Y^2) by privatizing
// Y^2 with anchors ~ Uniform[0, 2T], where T = t_factor * n^(1/3). Every
// cell reports the mean absolute error over replications.

#ifndef INTPRIV_EXPERIMENTS_MOMENT_H_
#define INTPRIV_EXPERIMENTS_MOMENT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "intpriv/kernels/parallel.h"
#include "json.hpp"

namespace intpriv {

struct MomentConfig {
  std::vector<int> ns = {100, 1000};
  std::vector<double> outlier_rates = {0.0, 0.01, 0.05};
  int reps = 1000;
  uint64_t seed = 2022;
  double mean = 0.5;
  double sd = 1.0;
  double outlier = 999.0;
  double t_factor = 2.0;
  bool second_moment = true;
  Execution exec = Execution::kParallel;

  // Missing keys keep their defaults; unknown keys are rejected.
  static absl::StatusOr<MomentConfig> FromJson(const nlohmann::json& j);
  nlohmann::json ToJson() const;
};

struct MomentCell {
  std::string target;  // "EY" or "EY2"
  int n = 0;
  double outlier_rate = 0.0;
  std::string method;  // example2, npmle, raw-mean, raw-median
  double mae = 0.0;
  double std_err = 0.0;
};

struct MomentTable {
  std::vector<MomentCell> cells;
  // Mean plug-in coverage of the E(Y) anchors under the clean law, per n.
  std::vector<std::pair<int, double>> coverage;

  std::optional<MomentCell> Find(const std::string& target, int n, double rate,
                                 const std::string& method) const;
  std::string ToCsv() const;
  // Aligned text in the layout of the published table: one row per
  // (method, n), one column per (target, rate).
  std::string ToText() const;
  nlohmann::json ToJson() const;
};

inline constexpr const char* kMomentMethods[] = {"example2", "npmle", "raw-mean", "raw-median"};

absl::StatusOr<MomentTable> RunMomentExperiment(const MomentConfig& cfg);

}  // namespace intpriv

#endif  // INTPRIV_EXPERIMENTS_MOMENT_H_
