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

#ifndef INTPRIV_COVERAGE_DESIGN_H_
#define INTPRIV_COVERAGE_DESIGN_H_

#include <vector>

#include "absl/status/statusor.h"
#include "intpriv/core/distribution.h"
#include "intpriv/core/prior.h"
#include "intpriv/mechanisms/anchor_sampler.h"

namespace intpriv {

enum class MechanismFamily { kCaseOne, kCaseTwo };

struct AnchorDesign {
  AnchorSampler sampler;
  double tau = 0.0;  // coverage at the returned parameters, by quadrature
  double pi1 = 0.0;  // weight of the tail component
  double sigma = 0.0;
  double mu_tail = 0.0;
  std::vector<double> centers;  // body component mean of each anchor
};

// Coverage of the canonical mechanism whose anchors are drawn independently
// from `anchor_laws` (one or two laws) and then sorted, measured against
// `prior`, by quadrature over the probability scale. The prior should be
// continuous.
absl::StatusOr<double> QuadratureCoverage(const std::vector<Distribution>& anchor_laws,
                                          const Prior& prior);

// Anchor laws reaching a target coverage. Each anchor mixes a Gaussian at
// the prior's 0.1% quantile (weight pi1) with a Gaussian at F^{-1}(k/(m)),
// i.e. the median for one anchor and the tertiles for two; both components
// share a small sigma and pi1 is found by bisection. Targets outside
// (1/2, 1) for one anchor, (1/3, 1) for two, or beyond what the tail
// component can reach fail with Unachievable.
absl::StatusOr<AnchorDesign> DesignAnchorForCoverage(double target, const Prior& prior,
                                                     MechanismFamily family);

}  // namespace intpriv

#endif  // INTPRIV_COVERAGE_DESIGN_H_
