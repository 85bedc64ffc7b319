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

#include "intpriv/regression/conditional_mean.h"

#include <cmath>

#include "absl/strings/str_cat.h"
#include "intpriv/core/errors.h"

namespace intpriv {

namespace {

constexpr double kMinSegmentMass = 1e-300;

// F(b) - F(a), computed on the side of the origin where it does not cancel.
double SegmentMass(double a, double b, const NoiseModel& noise) {
  if (a >= 0.0) return noise.Cdf(-a) - noise.Cdf(-b);
  return noise.Cdf(b) - noise.Cdf(a);
}

}  // namespace

absl::StatusOr<double> ConditionalMeanCase1(double u, int delta, const NoiseModel& noise) {
  if (!std::isfinite(u)) return InvalidArgument("InvalidArgument", "u must be finite");
  if (delta == 1) return noise.ConditionalMean(ExtReal::NegInf(), ExtReal(u));
  if (delta == 0) return noise.ConditionalMean(ExtReal(u), ExtReal::PosInf());
  return InvalidArgument("InvalidArgument", absl::StrCat("delta must be 0 or 1, got ", delta));
}

absl::StatusOr<double> ConditionalMeanCase2(double u, double v, int delta, int gamma,
                                            const NoiseModel& noise) {
  if (!std::isfinite(u) || !std::isfinite(v)) {
    return InvalidArgument("InvalidArgument", "cut points must be finite");
  }
  if (u > v) return InvalidArgument("InvalidArgument", "u must not exceed v");
  if (delta == 1 && gamma == 0) return noise.ConditionalMean(ExtReal::NegInf(), ExtReal(u));
  if (delta == 0 && gamma == 0) return noise.ConditionalMean(ExtReal(v), ExtReal::PosInf());
  if (delta == 0 && gamma == 1) {
    if (!(SegmentMass(u, v, noise) >= kMinSegmentMass)) {
      return InvalidArgument("DegenerateSegment",
                             absl::StrCat("no noise mass on (", u, ", ", v, "]"));
    }
    return noise.ConditionalMean(ExtReal(u), ExtReal(v));
  }
  return InvalidArgument("InvalidArgument",
                         absl::StrCat("invalid indicator pair (", delta, ", ", gamma, ")"));
}

absl::StatusOr<double> ConditionalMeanInterval(const ExtReal& a, const ExtReal& b,
                                               const NoiseModel& noise) {
  if (!(a < b)) return InvalidArgument("InvalidArgument", "empty interval");
  if (a.is_finite() && b.is_finite() &&
      !(SegmentMass(a.value(), b.value(), noise) >= kMinSegmentMass)) {
    return InvalidArgument("DegenerateSegment", absl::StrCat("no noise mass on (", a.value(),
                                                             ", ", b.value(), "]"));
  }
  return noise.ConditionalMean(a, b);
}

}  // namespace intpriv
