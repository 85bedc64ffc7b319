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

#ifndef INTPRIV_MECHANISMS_TRANSFORM_H_
#define INTPRIV_MECHANISMS_TRANSFORM_H_

#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "intpriv/core/range.h"
#include "json.hpp"

namespace intpriv {

// A strictly increasing map g used to pull a mechanism defined on the
// g-scale back to the data scale. Decreasing maps would flip the half-open
// convention and are not accepted.
class MonotoneTransform {
 public:
  enum class Kind { kAffine, kExp, kLogisticLink, kOddPower, kTable };

  // g(y) = a * y + b, a > 0.
  static absl::StatusOr<MonotoneTransform> Affine(double a, double b);
  static MonotoneTransform Exp();
  // g(y) = 1 / (1 + e^{-y}).
  static MonotoneTransform LogisticLink();
  // g(y) = y^p for odd p >= 1.
  static absl::StatusOr<MonotoneTransform> OddPower(int p);
  // Piecewise linear through (x[k], y[k]), extended linearly with the end
  // slopes. Fails with NonMonotone unless a 1024-point probe over the knot
  // span is strictly increasing.
  static absl::StatusOr<MonotoneTransform> Table(std::vector<double> x,
                                                 std::vector<double> y);

  Kind kind() const { return kind_; }
  double Apply(double y) const;
  // g^{-1}(q); -inf below the image of g, +inf above it.
  ExtReal Inverse(double q) const;
  // (g^{-1}(lo), g^{-1}(hi)] for each part, dropping parts outside the image.
  Range PullBack(const Range& r) const;

  nlohmann::json ToJson() const;
  static absl::StatusOr<MonotoneTransform> FromJson(const nlohmann::json& j);
  std::string Name() const;

 private:
  MonotoneTransform(Kind kind, std::vector<double> params, std::vector<double> x = {},
                    std::vector<double> y = {})
      : kind_(kind), params_(std::move(params)), x_(std::move(x)), y_(std::move(y)) {}

  Kind kind_;
  std::vector<double> params_;
  std::vector<double> x_;
  std::vector<double> y_;
};

}  // namespace intpriv

#endif  // INTPRIV_MECHANISMS_TRANSFORM_H_
