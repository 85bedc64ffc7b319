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

#ifndef INTPRIV_ESTIMATION_FUNCTIONALS_H_
#define INTPRIV_ESTIMATION_FUNCTIONALS_H_

#include <functional>
#include <span>

#include "absl/status/statusor.h"
#include "intpriv/core/record.h"
#include "intpriv/core/step_cdf.h"

namespace intpriv {

struct MeanEstimate {
  double mu = 0.0;
  double std_err = 0.0;
};

// Unbiased mean from single-anchor records with anchors ~ Uniform[a, b]:
// average of D (2U - b) + (1 - D)(2U - a) where D = 1{Y <= U}. Fails with
// WrongShape unless every record is a two-way canonical record.
absl::StatusOr<MeanEstimate> MeanEstimatorCase1(std::span<const PrivatizedRecord> records,
                                                double a, double b);

// sum over jumps of phi(x) times the jump's mass.
double LinearFunctional(const StepCdf& cdf, const std::function<double(double)>& phi);

// int_lo^hi (F1 - F2)^2 dy, exact for step functions.
absl::StatusOr<double> EnergyDistance(const StepCdf& f1, const StepCdf& f2, double lo,
                                      double hi);

}  // namespace intpriv

#endif  // INTPRIV_ESTIMATION_FUNCTIONALS_H_
