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

// Simulated interval regression runs. Templates:
//   linear:    f(x) = beta x, X ~ N(0, 1), one logistic anchor, OLS;
//   quadratic: f(x) = x^2 - 2x + 3, X ~ N(0, 1), two logistic anchors
//              (sorted), features (x, x^2), k-NN.
// Noise is N(0, noise_sd^2). Each replication records, per iteration, the
// training MSE on the surrogates and the prediction MSE E(f - f_hat)^2 on a
// fresh test sample.

#ifndef INTPRIV_EXPERIMENTS_REGRESSION_EXP_H_
#define INTPRIV_EXPERIMENTS_REGRESSION_EXP_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "intpriv/core/record.h"
#include "intpriv/kernels/parallel.h"
#include "json.hpp"

namespace intpriv {

struct RegressionExpConfig {
  std::string template_name = "linear";
  int n = 200;
  double beta = 1.0;
  double noise_sd = 1.0;
  double anchor_scale = 5.0;
  // Defaults to "ols" for linear and "knn:10" for quadratic.
  std::string learner;
  // Noise law assumed by the surrogates: "logistic" or "gaussian", with
  // scale noise_model_scale (default: matched to noise_sd's variance).
  std::string noise_model = "logistic";
  std::optional<double> noise_model_scale;
  bool estimate_sigma = false;
  int max_iter = 40;
  double tol = 1e-6;
  // Keep iterating to max_iter even after the stop rule fires, so traces
  // have a fixed length.
  bool run_all_iterations = true;
  int test_n = 5000;
  int reps = 1;
  uint64_t seed = 2022;
  Execution exec = Execution::kParallel;

  static absl::StatusOr<RegressionExpConfig> FromJson(const nlohmann::json& j);
  nlohmann::json ToJson() const;
};

struct RegressionRep {
  std::vector<double> training_mse;  // per iteration
  std::vector<double> test_mse;      // per iteration
  std::vector<double> surrogate_delta;
  int iterations = 0;
  // First iteration at which the stop rule held, if it did.
  std::optional<int> converged_at;
  std::optional<double> beta_hat;  // linear template
  double coverage = 0.0;           // plug-in coverage of the anchors
  bool contained = true;           // surrogates stayed in their ranges
};

struct RegressionExpResult {
  std::vector<RegressionRep> reps;

  // rep,iteration,training_mse,test_mse,max_surrogate_delta
  std::string TraceCsv() const;
  // rep,iterations,converged_at,beta_hat,coverage,final_test_mse
  std::string SummaryCsv() const;
  // Per-iteration median of test MSE across replications.
  std::vector<double> MedianTestMse() const;
  nlohmann::json ToJson() const;
};

absl::StatusOr<RegressionRep> RunRegressionReplication(const RegressionExpConfig& cfg,
                                                       uint64_t seed);
absl::StatusOr<RegressionExpResult> RunRegressionExperiment(const RegressionExpConfig& cfg);

// Fits the interval regression to privatized records carrying features,
// e.g. the output of the privatize command. Reports the fit.
struct RecordFit {
  nlohmann::json report;    // FitReport::ToJson plus the model
  std::string trace_csv;
};
absl::StatusOr<RecordFit> FitRecords(const std::vector<WireRecord>& records,
                                     const RegressionExpConfig& cfg);

double Median(std::vector<double> v);

}  // namespace intpriv

#endif  // INTPRIV_EXPERIMENTS_REGRESSION_EXP_H_
