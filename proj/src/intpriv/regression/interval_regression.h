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

// Iterative surrogate regression for interval-valued responses. Each round
// replaces every response by its conditional mean given the observed set
// and the current fit, then refits the base learner on the surrogates.

#ifndef INTPRIV_REGRESSION_INTERVAL_REGRESSION_H_
#define INTPRIV_REGRESSION_INTERVAL_REGRESSION_H_

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "absl/status/statusor.h"
#include "intpriv/core/noise_model.h"
#include "intpriv/kernels/parallel.h"
#include "intpriv/regression/dataset.h"
#include "intpriv/regression/learners.h"
#include "json.hpp"

namespace intpriv {

struct IterationSnapshot {
  int iteration;  // 1-based
  const Eigen::VectorXd& surrogates;  // the responses this round's model was fit on
  const Eigen::VectorXd& fitted;      // this round's model at the training features
  const RegressionModel& model;
  const NoiseModel& noise;            // noise law used for the next surrogates
};

struct RegressionOptions {
  // Stop when max |surrogate change| <= tol * (1 + max |surrogate|).
  double tol = 1e-6;
  int max_iter = 100;
  // Re-estimate the noise variance after each fit as the mean conditional
  // second moment of the residual given each record.
  bool estimate_sigma = false;
  Execution exec = Execution::kParallel;
  std::function<void(const IterationSnapshot&)> on_iteration;
};

struct FitReport {
  std::shared_ptr<const RegressionModel> model;
  int iterations = 0;
  bool converged = false;
  // Entry k: max |surrogate change| between rounds k and k+1.
  std::vector<double> surrogate_trace;
  // Entry k: the change threshold the stop rule compared against.
  std::vector<double> thresholds;
  // Entry k: mean squared residual of round k's model on its surrogates.
  std::vector<double> training_mse;
  std::optional<double> sigma_hat;  // noise standard deviation, if estimated
  NoiseModel noise = NoiseModel::StandardLogistic();
  Eigen::VectorXd fitted;  // final model at the training features

  nlohmann::json ToJson() const;
  // iteration,max_surrogate_delta,training_mse
  std::string TraceCsv() const;
};

// Surrogates y~_i = f_i + E(e | Y_i in R_i, f_i) for the current fitted
// values f; exact records keep their value. Fails with NonFinite (naming
// the record) or ContainmentViolation.
absl::StatusOr<Eigen::VectorXd> ComputeSurrogates(const IntervalRegressionDataset& data,
                                                  const Eigen::VectorXd& fitted,
                                                  const NoiseModel& noise,
                                                  Execution exec = Execution::kParallel);

// Mean over records of E((Y_i - f_i)^2 | Y_i in R_i).
absl::StatusOr<double> MeanConditionalSquaredResidual(const IntervalRegressionDataset& data,
                                                      const Eigen::VectorXd& fitted,
                                                      const NoiseModel& noise,
                                                      Execution exec = Execution::kParallel);

// Starts from the zero function. Learner errors are propagated unchanged.
absl::StatusOr<FitReport> FitIntervalRegression(const IntervalRegressionDataset& data,
                                                const BaseLearner& learner, NoiseModel noise,
                                                const RegressionOptions& opts = {});

absl::StatusOr<Eigen::VectorXd> Predict(const FitReport& report, const Eigen::MatrixXd& x);

}  // namespace intpriv

#endif  // INTPRIV_REGRESSION_INTERVAL_REGRESSION_H_
