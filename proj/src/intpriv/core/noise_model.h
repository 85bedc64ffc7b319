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

#ifndef INTPRIV_CORE_NOISE_MODEL_H_
#define INTPRIV_CORE_NOISE_MODEL_H_

#include <string>

#include "absl/status/statusor.h"
#include "intpriv/core/range.h"

namespace intpriv {

// Zero-mean additive error law of a regression model. `scale` is the
// logistic scale parameter s (sd = s * pi / sqrt(3)) or the Gaussian sd.
class NoiseModel {
 public:
  enum class Kind { kLogistic, kGaussian };

  static absl::StatusOr<NoiseModel> Make(Kind kind, double scale);
  static NoiseModel StandardLogistic() { return NoiseModel(Kind::kLogistic, 1.0); }
  static NoiseModel StandardGaussian() { return NoiseModel(Kind::kGaussian, 1.0); }

  Kind kind() const { return kind_; }
  double scale() const { return scale_; }
  double Variance() const;
  // Same family with a new scale; requires scale > 0.
  NoiseModel WithScale(double scale) const { return NoiseModel(kind_, scale); }
  // Same family, scale chosen so the variance equals `variance`.
  NoiseModel WithVariance(double variance) const;
  std::string Name() const;

  // F(s). Non-finite arguments follow the limits.
  double Cdf(double s) const;
  double Cdf(const ExtReal& s) const;
  // G(s) = integral_{-inf}^{s} x dF(x); G(-inf) = G(+inf) = 0.
  double PartialMean(double s) const;
  double PartialMean(const ExtReal& s) const;

  // E(e | a < e <= b). Tail-stable: uses log-domain / Mills-ratio forms
  // where F underflows. The result always lies in [a, b].
  double ConditionalMean(const ExtReal& a, const ExtReal& b) const;
  // E(e | e in r) for a union of intervals.
  double ConditionalMean(const Range& r) const;
  // E(e^2 | a < e <= b).
  double ConditionalSecondMoment(const ExtReal& a, const ExtReal& b) const;
  double ConditionalSecondMoment(const Range& r) const;

  bool operator==(const NoiseModel&) const = default;

 private:
  NoiseModel(Kind kind, double scale) : kind_(kind), scale_(scale) {}

  // Standardized (scale 1) helpers.
  double StdLeftTailMean(double z) const;
  double StdMiddleMean(double za, double zb) const;

  Kind kind_;
  double scale_;
};

}  // namespace intpriv

#endif  // INTPRIV_CORE_NOISE_MODEL_H_
