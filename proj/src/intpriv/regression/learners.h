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

#ifndef INTPRIV_REGRESSION_LEARNERS_H_
#define INTPRIV_REGRESSION_LEARNERS_H_

#include <memory>
#include <string>

#include <Eigen/Dense>

#include "absl/status/statusor.h"
#include "json.hpp"

namespace intpriv {

// An immutable fitted regression function of p features.
class RegressionModel {
 public:
  virtual ~RegressionModel() = default;

  virtual size_t dim() const = 0;
  // ShapeMismatch unless x has dim() columns.
  absl::StatusOr<Eigen::VectorXd> Predict(const Eigen::MatrixXd& x) const;
  virtual nlohmann::json ToJson() const = 0;

 protected:
  virtual Eigen::VectorXd PredictRows(const Eigen::MatrixXd& x) const = 0;
};

// Squared-loss learner. Fit must be deterministic in its inputs; failures
// carry the LearnerFailure kind.
class BaseLearner {
 public:
  virtual ~BaseLearner() = default;
  virtual absl::StatusOr<std::shared_ptr<const RegressionModel>> Fit(
      const Eigen::MatrixXd& x, const Eigen::VectorXd& y) const = 0;
  virtual std::string Name() const = 0;
};

class LinearModel final : public RegressionModel {
 public:
  LinearModel(double intercept, Eigen::VectorXd coef)
      : intercept_(intercept), coef_(std::move(coef)) {}

  double intercept() const { return intercept_; }
  const Eigen::VectorXd& coef() const { return coef_; }
  size_t dim() const override { return static_cast<size_t>(coef_.size()); }
  nlohmann::json ToJson() const override;

 protected:
  Eigen::VectorXd PredictRows(const Eigen::MatrixXd& x) const override;

 private:
  double intercept_;
  Eigen::VectorXd coef_;
};

// Ordinary least squares via the normal equations. When the Gram matrix is
// numerically singular a ridge of kRidge is added to its diagonal.
class LeastSquaresLearner final : public BaseLearner {
 public:
  static constexpr double kRidge = 1e-8;

  explicit LeastSquaresLearner(bool fit_intercept = true) : fit_intercept_(fit_intercept) {}

  absl::StatusOr<std::shared_ptr<const RegressionModel>> Fit(
      const Eigen::MatrixXd& x, const Eigen::VectorXd& y) const override;
  std::string Name() const override { return "ols"; }

 private:
  bool fit_intercept_;
};

class KnnModel final : public RegressionModel {
 public:
  KnnModel(Eigen::MatrixXd x, Eigen::VectorXd y, size_t k)
      : x_(std::move(x)), y_(std::move(y)), k_(k) {}

  size_t k() const { return k_; }
  size_t dim() const override { return static_cast<size_t>(x_.cols()); }
  nlohmann::json ToJson() const override;

 protected:
  Eigen::VectorXd PredictRows(const Eigen::MatrixXd& x) const override;

 private:
  Eigen::MatrixXd x_;
  Eigen::VectorXd y_;
  size_t k_;
};

// k-nearest-neighbor averaging in Euclidean distance. Distance ties go to
// the lower training index. k is capped at the training size.
class KnnLearner final : public BaseLearner {
 public:
  static constexpr size_t kDefaultK = 10;

  explicit KnnLearner(size_t k = kDefaultK) : k_(k) {}

  absl::StatusOr<std::shared_ptr<const RegressionModel>> Fit(
      const Eigen::MatrixXd& x, const Eigen::VectorXd& y) const override;
  std::string Name() const override;

 private:
  size_t k_;
};

// "ols" or "knn" / "knn:K".
absl::StatusOr<std::unique_ptr<BaseLearner>> MakeLearner(const std::string& spec);

}  // namespace intpriv

#endif  // INTPRIV_REGRESSION_LEARNERS_H_
