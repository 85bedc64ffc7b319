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

#include "intpriv/regression/learners.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "intpriv/core/errors.h"

namespace intpriv {

namespace {

absl::Status CheckTrainingData(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  if (x.rows() == 0) return FailedPrecondition("LearnerFailure", "no training rows");
  if (x.rows() != y.size()) {
    return InvalidArgument("LearnerFailure", "feature rows and responses differ in count");
  }
  if (!x.allFinite() || !y.allFinite()) {
    return InvalidArgument("LearnerFailure", "non-finite training data");
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<Eigen::VectorXd> RegressionModel::Predict(const Eigen::MatrixXd& x) const {
  if (static_cast<size_t>(x.cols()) != dim()) {
    return InvalidArgument("ShapeMismatch",
                           absl::StrCat("model takes ", dim(), " features, got ", x.cols()));
  }
  return PredictRows(x);
}

Eigen::VectorXd LinearModel::PredictRows(const Eigen::MatrixXd& x) const {
  Eigen::VectorXd out = x * coef_;
  out.array() += intercept_;
  return out;
}

nlohmann::json LinearModel::ToJson() const {
  return {{"type", "linear"},
          {"intercept", intercept_},
          {"coef", std::vector<double>(coef_.data(), coef_.data() + coef_.size())}};
}

absl::StatusOr<std::shared_ptr<const RegressionModel>> LeastSquaresLearner::Fit(
    const Eigen::MatrixXd& x, const Eigen::VectorXd& y) const {
  INTPRIV_RETURN_IF_ERROR(CheckTrainingData(x, y));
  const Eigen::Index p = x.cols();
  const Eigen::Index q = p + (fit_intercept_ ? 1 : 0);
  Eigen::MatrixXd z(x.rows(), q);
  if (fit_intercept_) z.col(0).setOnes();
  z.rightCols(p) = x;
  Eigen::MatrixXd gram = z.transpose() * z;
  const Eigen::VectorXd rhs = z.transpose() * y;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  if (ldlt.info() != Eigen::Success || !(ldlt.rcond() > 1e-12)) {
    gram.diagonal().array() += kRidge;
    ldlt.compute(gram);
    if (ldlt.info() != Eigen::Success) {
      return FailedPrecondition("LearnerFailure", "normal equations are not solvable");
    }
  }
  const Eigen::VectorXd beta = ldlt.solve(rhs);
  if (!beta.allFinite()) return FailedPrecondition("LearnerFailure", "non-finite coefficients");
  const double intercept = fit_intercept_ ? beta(0) : 0.0;
  return std::make_shared<const LinearModel>(intercept, beta.tail(p));
}

Eigen::VectorXd KnnModel::PredictRows(const Eigen::MatrixXd& x) const {
  const Eigen::Index n = x_.rows();
  const size_t k = std::min(k_, static_cast<size_t>(n));
  Eigen::VectorXd out(x.rows());
  std::vector<std::pair<double, Eigen::Index>> dist(static_cast<size_t>(n));
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    for (Eigen::Index i = 0; i < n; ++i) {
      dist[static_cast<size_t>(i)] = {(x_.row(i) - x.row(r)).squaredNorm(), i};
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
    double sum = 0.0;
    for (size_t j = 0; j < k; ++j) sum += y_(dist[j].second);
    out(r) = sum / static_cast<double>(k);
  }
  return out;
}

nlohmann::json KnnModel::ToJson() const {
  return {{"type", "knn"}, {"k", k_}, {"train_size", x_.rows()}, {"dim", x_.cols()}};
}

absl::StatusOr<std::shared_ptr<const RegressionModel>> KnnLearner::Fit(
    const Eigen::MatrixXd& x, const Eigen::VectorXd& y) const {
  INTPRIV_RETURN_IF_ERROR(CheckTrainingData(x, y));
  if (k_ == 0) return InvalidArgument("LearnerFailure", "k must be positive");
  return std::make_shared<const KnnModel>(x, y, k_);
}

std::string KnnLearner::Name() const { return absl::StrCat("knn:", k_); }

absl::StatusOr<std::unique_ptr<BaseLearner>> MakeLearner(const std::string& spec) {
  if (spec == "ols") return std::make_unique<LeastSquaresLearner>();
  if (spec == "knn") return std::make_unique<KnnLearner>();
  const absl::string_view s(spec);
  if (s.substr(0, 4) == "knn:") {
    size_t k = 0;
    if (absl::SimpleAtoi(s.substr(4), &k) && k > 0) return std::make_unique<KnnLearner>(k);
  }
  return InvalidArgument("InvalidArgument", absl::StrCat("unknown learner ", spec));
}

}  // namespace intpriv
