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

#ifndef INTPRIV_REGRESSION_CONDITIONAL_MEAN_H_
#define INTPRIV_REGRESSION_CONDITIONAL_MEAN_H_

#include "absl/status/statusor.h"
#include "intpriv/core/noise_model.h"
#include "intpriv/core/range.h"

namespace intpriv {

// E(e | e <= u) when delta = 1, E(e | e > u) when delta = 0.
absl::StatusOr<double> ConditionalMeanCase1(double u, int delta, const NoiseModel& noise);

// Two cut points u <= v split the line into (-inf, u], (u, v], (v, inf).
// (delta, gamma) = (1, 0), (0, 1), (0, 0) select them in that order.
// The middle segment fails with DegenerateSegment when it carries no
// representable noise mass.
absl::StatusOr<double> ConditionalMeanCase2(double u, double v, int delta, int gamma,
                                            const NoiseModel& noise);

// E(e | a < e <= b).
absl::StatusOr<double> ConditionalMeanInterval(const ExtReal& a, const ExtReal& b,
                                               const NoiseModel& noise);

}  // namespace intpriv

#endif  // INTPRIV_REGRESSION_CONDITIONAL_MEAN_H_
