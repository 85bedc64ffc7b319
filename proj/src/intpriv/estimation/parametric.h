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

#ifndef INTPRIV_ESTIMATION_PARAMETRIC_H_
#define INTPRIV_ESTIMATION_PARAMETRIC_H_

#include <span>

#include "absl/status/statusor.h"
#include "intpriv/core/record.h"

namespace intpriv {

struct LogisticFit {
  double loc = 0.0;
  double scale = 1.0;
  double log_likelihood = 0.0;
};

// Log-likelihood of range data under Logistic(loc, scale); disclosed values
// contribute their log density.
double LogisticLogLikelihood(std::span<const PrivatizedRecord> records, double loc,
                             double scale);

// Maximum likelihood over the logistic location-scale family: golden-section
// search on log-scale with an inner golden-section search on location,
// polished by damped Newton steps on finite-difference derivatives.
absl::StatusOr<LogisticFit> FitLogisticMle(std::span<const PrivatizedRecord> records);

}  // namespace intpriv

#endif  // INTPRIV_ESTIMATION_PARAMETRIC_H_
