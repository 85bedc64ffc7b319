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

#include "intpriv/core/step_cdf.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "intpriv/core/errors.h"

namespace intpriv {

absl::StatusOr<StepCdf> StepCdf::FromJumps(std::vector<Jump> jumps) {
  if (jumps.empty()) return InvalidArgument("InvalidCdf", "no jumps");
  double prev_f = 0.0;
  for (size_t i = 0; i < jumps.size(); ++i) {
    const Jump& j = jumps[i];
    if (!std::isfinite(j.x)) return InvalidArgument("InvalidCdf", "non-finite x");
    if (i > 0 && !(jumps[i - 1].x < j.x)) {
      return InvalidArgument("InvalidCdf", "jump points must strictly increase");
    }
    if (!(j.cdf >= prev_f) || j.cdf > 1.0 + 1e-12) {
      return InvalidArgument("InvalidCdf",
                             absl::StrCat("F must be non-decreasing in [0,1] at x=", j.x));
    }
    prev_f = j.cdf;
  }
  if (std::abs(jumps.back().cdf - 1.0) > 1e-12) {
    return InvalidArgument("InvalidCdf",
                           absl::StrCat("final F = ", jumps.back().cdf, " != 1"));
  }
  jumps.back().cdf = 1.0;
  for (Jump& j : jumps) j.cdf = std::min(j.cdf, 1.0);
  return StepCdf(std::move(jumps));
}

absl::StatusOr<StepCdf> StepCdf::FromMasses(
    std::vector<std::pair<double, double>> masses) {
  std::sort(masses.begin(), masses.end());
  double total = 0.0;
  for (const auto& [x, m] : masses) {
    if (!std::isfinite(x) || !(m >= 0.0)) {
      return InvalidArgument("InvalidCdf", "masses must be finite and non-negative");
    }
    total += m;
  }
  if (!(total > 0.0)) return InvalidArgument("InvalidCdf", "zero total mass");
  std::vector<Jump> jumps;
  double acc = 0.0;
  for (const auto& [x, m] : masses) {
    if (m == 0.0) continue;
    acc += m;
    if (!jumps.empty() && jumps.back().x == x) {
      jumps.back().cdf = acc / total;
    } else {
      jumps.push_back({x, acc / total});
    }
  }
  jumps.back().cdf = 1.0;
  return StepCdf(std::move(jumps));
}

absl::StatusOr<StepCdf> StepCdf::Empirical(std::span<const double> values) {
  std::vector<std::pair<double, double>> masses;
  masses.reserve(values.size());
  for (double v : values) masses.emplace_back(v, 1.0);
  return FromMasses(std::move(masses));
}

double StepCdf::operator()(double x) const {
  auto it = std::upper_bound(jumps_.begin(), jumps_.end(), x,
                             [](double v, const Jump& j) { return v < j.x; });
  if (it == jumps_.begin()) return 0.0;
  return std::prev(it)->cdf;
}

double StepCdf::Eval(const ExtReal& x) const {
  if (x.is_neg_inf()) return 0.0;
  if (x.is_pos_inf()) return 1.0;
  return (*this)(x.value());
}

double StepCdf::LeftLimit(double x) const {
  auto it = std::lower_bound(jumps_.begin(), jumps_.end(), x,
                             [](const Jump& j, double v) { return j.x < v; });
  if (it == jumps_.begin()) return 0.0;
  return std::prev(it)->cdf;
}

double StepCdf::Mass(const Range& r) const {
  double total = 0.0;
  for (const Interval& iv : r.parts()) total += Eval(iv.hi) - Eval(iv.lo);
  return std::clamp(total, 0.0, 1.0);
}

}  // namespace intpriv
