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

#ifndef INTPRIV_REGRESSION_DATASET_H_
#define INTPRIV_REGRESSION_DATASET_H_

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "absl/status/statusor.h"
#include "intpriv/core/record.h"

namespace intpriv {

// Privatized responses with visible features. Every record is canonical,
// so each observed set is one interval or an exact point.
class IntervalRegressionDataset {
 public:
  // kCaseOne: one anchor per record; kCaseTwo: two; kMixed: anything else,
  // including exact points.
  enum class Shape { kCaseOne, kCaseTwo, kMixed };

  // Fails with NoData, MissingFeatures, ShapeMismatch (feature dimension),
  // or WrongShape (non-canonical record, or `expected` not matched).
  static absl::StatusOr<IntervalRegressionDataset> Make(
      std::vector<PrivatizedRecord> records, std::optional<Shape> expected = std::nullopt);

  Shape shape() const { return shape_; }
  size_t size() const { return records_.size(); }
  size_t dim() const { return static_cast<size_t>(features_.cols()); }
  const std::vector<PrivatizedRecord>& records() const { return records_; }
  const Eigen::MatrixXd& features() const { return features_; }

 private:
  IntervalRegressionDataset() = default;

  Shape shape_ = Shape::kMixed;
  std::vector<PrivatizedRecord> records_;
  Eigen::MatrixXd features_;
};

const char* ShapeName(IntervalRegressionDataset::Shape shape);

}  // namespace intpriv

#endif  // INTPRIV_REGRESSION_DATASET_H_
