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

// Prediction error against privacy coverage: the linear regression template
// rerun with logistic anchors of several scales.

#ifndef INTPRIV_EXPERIMENTS_TRADEOFF_H_
#define INTPRIV_EXPERIMENTS_TRADEOFF_H_

#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "intpriv/experiments/regression_exp.h"
#include "json.hpp"

namespace intpriv {

struct TradeoffConfig {
  std::vector<double> scales = {0.1, 0.3, 0.5, 1, 3, 5, 10, 20, 30};
  // Template for each scale; anchor_scale and reps are overridden.
  RegressionExpConfig base;
  int reps = 20;

  TradeoffConfig() {
    base.max_iter = 20;
    base.run_all_iterations = false;
    base.tol = 1e-4;
  }
  static absl::StatusOr<TradeoffConfig> FromJson(const nlohmann::json& j);
  nlohmann::json ToJson() const;
};

struct TradeoffPoint {
  double scale = 0.0;
  double coverage = 0.0;
  double coverage_se = 0.0;
  double mse = 0.0;
  double mse_se = 0.0;
  double median_mse = 0.0;
};

struct TradeoffResult {
  std::vector<TradeoffPoint> points;
  // scale,coverage,coverage_se,mse,mse_se,median_mse
  std::string ToCsv() const;
  nlohmann::json ToJson() const;
};

absl::StatusOr<TradeoffResult> RunTradeoffSweep(const TradeoffConfig& cfg);

}  // namespace intpriv

#endif  // INTPRIV_EXPERIMENTS_TRADEOFF_H_
