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

#include "intpriv/estimation/functionals.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "intpriv/core/errors.h"
#include "intpriv/kernels/parallel.h"

namespace intpriv {

absl::StatusOr<MeanEstimate> MeanEstimatorCase1(std::span<const PrivatizedRecord> records,
                                                double a, double b) {
  if (records.empty()) return InvalidArgument("NoData", "no records");
  if (!(a < b)) return InvalidArgument("ValidationError", "a: must be below b");
  RunningMoments m;
  for (const auto& rec : records) {
    if (rec.anchors().size() != 1 || rec.partition().size() != 2 ||
        rec.partition().topology() != Topology::kCanonical) {
      return InvalidArgument("WrongShape", "mean estimator takes two-way records");
    }
    const double u = rec.anchors()[0];
    const bool below = rec.choice() == 1;
    m.Add(below ? 2.0 * u - b : 2.0 * u - a);
  }
  return MeanEstimate{m.mean, m.StdErr()};
}

double LinearFunctional(const StepCdf& cdf, const std::function<double(double)>& phi) {
  double total = 0.0;
  for (size_t i = 0; i < cdf.jumps().size(); ++i) {
    const double w = cdf.MassAt(i);
    if (w != 0.0) total += w * phi(cdf.jumps()[i].x);
  }
  return total;
}

absl::StatusOr<double> EnergyDistance(const StepCdf& f1, const StepCdf& f2, double lo,
                                      double hi) {
  if (!(lo < hi)) return InvalidArgument("ValidationError", "domain: lo must be below hi");
  std::vector<double> xs = {lo, hi};
  for (const auto* f : {&f1, &f2}) {
    for (const auto& j : f->jumps()) {
      if (j.x > lo && j.x < hi) xs.push_back(j.x);
    }
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  double total = 0.0;
  for (size_t i = 0; i + 1 < xs.size(); ++i) {
    // Both CDFs are constant on [xs[i], xs[i+1]).
    const double d = f1(xs[i]) - f2(xs[i]);
    total += d * d * (xs[i + 1] - xs[i]);
  }
  return total;
}

}  // namespace intpriv
