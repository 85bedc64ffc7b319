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

#include "intpriv/regression/dataset.h"

#include "absl/strings/str_cat.h"
#include "intpriv/core/errors.h"

namespace intpriv {

const char* ShapeName(IntervalRegressionDataset::Shape shape) {
  switch (shape) {
    case IntervalRegressionDataset::Shape::kCaseOne:
      return "case1";
    case IntervalRegressionDataset::Shape::kCaseTwo:
      return "case2";
    case IntervalRegressionDataset::Shape::kMixed:
      break;
  }
  return "mixed";
}

absl::StatusOr<IntervalRegressionDataset> IntervalRegressionDataset::Make(
    std::vector<PrivatizedRecord> records, std::optional<Shape> expected) {
  if (records.empty()) return InvalidArgument("NoData", "no records");
  const size_t n = records.size();
  size_t p = 0;
  bool all_one = true, all_two = true;
  for (size_t i = 0; i < n; ++i) {
    const PrivatizedRecord& r = records[i];
    if (!r.features()) {
      return InvalidArgument("MissingFeatures", absl::StrCat("record ", i, " has no features"));
    }
    if (i == 0) p = r.features()->size();
    if (r.features()->size() != p) {
      return InvalidArgument("ShapeMismatch",
                             absl::StrCat("record ", i, " has ", r.features()->size(),
                                          " features, expected ", p));
    }
    if (r.partition().topology() != Topology::kCanonical) {
      return InvalidArgument("WrongShape", absl::StrCat("record ", i, " is not canonical"));
    }
    const bool exact = r.exact().has_value();
    all_one = all_one && !exact && r.anchors().size() == 1;
    all_two = all_two && !exact && r.anchors().size() == 2;
  }
  IntervalRegressionDataset d;
  d.shape_ = all_one ? Shape::kCaseOne : (all_two ? Shape::kCaseTwo : Shape::kMixed);
  if (expected && *expected != d.shape_) {
    return InvalidArgument("WrongShape", absl::StrCat("expected ", ShapeName(*expected),
                                                      " records, got ", ShapeName(d.shape_)));
  }
  d.features_.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < p; ++j) {
      d.features_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          (*records[i].features())[j];
    }
  }
  d.records_ = std::move(records);
  return d;
}

}  // namespace intpriv
