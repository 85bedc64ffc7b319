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

#ifndef INTPRIV_ESTIMATION_OPTIMAL_DENSITY_H_
#define INTPRIV_ESTIMATION_OPTIMAL_DENSITY_H_

#include <functional>
#include <vector>

#include "absl/status/statusor.h"
#include "intpriv/core/distribution.h"
#include "intpriv/mechanisms/anchor_sampler.h"

namespace intpriv {

struct OptimalDensity {
  Distribution law;              // grid law, normalized
  std::vector<double> x;         // the grid
  std::vector<double> density;   // normalized density at x
  double normalizer = 0.0;       // trapezoid integral of the raw density
  AnchorSampler sampler;         // one anchor from `law`
};

// Anchor density minimizing the asymptotic variance of the plug-in estimate
// of E phi(Y) from single-anchor data:
//   g(u) proportional to sqrt(F(u) (1 - F(u))) |phi'(u)|.
// The grid must be strictly increasing. The raw density is also integrated
// over one grid width beyond each end; if that tail exceeds 1e-6 of the
// total the density is rejected with NotIntegrable.
absl::StatusOr<OptimalDensity> OptimalAnchorDensity(const std::function<double(double)>& cdf,
                                                    const std::function<double(double)>& dphi,
                                                    std::vector<double> grid);

}  // namespace intpriv

#endif  // INTPRIV_ESTIMATION_OPTIMAL_DENSITY_H_
