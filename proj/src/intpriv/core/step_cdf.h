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

#ifndef INTPRIV_CORE_STEP_CDF_H_
#define INTPRIV_CORE_STEP_CDF_H_

#include <span>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "intpriv/core/range.h"

namespace intpriv {

// Right-continuous, piecewise-constant distribution function.
class StepCdf {
 public:
  struct Jump {
    double x;
    double cdf;  // F(x), the value from x (inclusive) to the next jump.
    bool operator==(const Jump&) const = default;
  };

  StepCdf() = default;

  // Validates: x strictly increasing, F non-decreasing in [0, 1], last F = 1
  // within 1e-12 (then snapped to exactly 1).
  static absl::StatusOr<StepCdf> FromJumps(std::vector<Jump> jumps);
  // Point masses (x need not be sorted or distinct; masses are merged).
  // Masses must be non-negative with positive total; they are normalized.
  static absl::StatusOr<StepCdf> FromMasses(
      std::vector<std::pair<double, double>> masses);
  static absl::StatusOr<StepCdf> Empirical(std::span<const double> values);

  const std::vector<Jump>& jumps() const { return jumps_; }
  bool empty() const { return jumps_.empty(); }

  // F(x): value at the largest jump point <= x, 0 before the first.
  double operator()(double x) const;
  double Eval(const ExtReal& x) const;
  // F(x-), the left limit.
  double LeftLimit(double x) const;
  // Probability of a range: sum over parts of F(hi) - F(lo).
  double Mass(const Range& r) const;
  // Mass of the i-th jump.
  double MassAt(size_t i) const {
    return jumps_[i].cdf - (i == 0 ? 0.0 : jumps_[i - 1].cdf);
  }

  bool operator==(const StepCdf&) const = default;

 private:
  explicit StepCdf(std::vector<Jump> jumps) : jumps_(std::move(jumps)) {}
  std::vector<Jump> jumps_;
};

}  // namespace intpriv

#endif  // INTPRIV_CORE_STEP_CDF_H_
