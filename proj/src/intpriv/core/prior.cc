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

#include "intpriv/core/prior.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace intpriv {

absl::string_view ProvenanceName(PriorProvenance p) {
  switch (p) {
    case PriorProvenance::kKnownCdf:
      return "known-CDF";
    case PriorProvenance::kNpmlePlugIn:
      return "NPMLE-plug-in";
    case PriorProvenance::kEmpirical:
      return "empirical";
  }
  return "unknown";
}

double Prior::Cdf(const ExtReal& x) const {
  if (x.is_neg_inf()) return 0.0;
  if (x.is_pos_inf()) return 1.0;
  if (const auto* d = std::get_if<Distribution>(&source_)) return d->Cdf(x.value());
  if (const auto* s = std::get_if<StepCdf>(&source_)) return (*s)(x.value());
  return std::get<Custom>(source_).cdf(x.value());
}

double Prior::Mass(const Range& r) const {
  double total = 0.0;
  for (const Interval& iv : r.parts()) total += Cdf(iv.hi) - Cdf(iv.lo);
  return std::clamp(total, 0.0, 1.0);
}

double Prior::Quantile(double p) const {
  if (const auto* d = std::get_if<Distribution>(&source_)) return d->Quantile(p);
  if (const auto* s = std::get_if<StepCdf>(&source_)) {
    const auto& jumps = s->jumps();
    auto it = std::lower_bound(jumps.begin(), jumps.end(), p,
                               [](const StepCdf::Jump& j, double v) { return j.cdf < v; });
    if (it == jumps.end()) --it;
    return it->x;
  }
  const auto& cdf = std::get<Custom>(source_).cdf;
  double lo = -1.0, hi = 1.0;
  while (cdf(lo) >= p && lo > -1e300) lo *= 2.0;
  while (cdf(hi) < p && hi < 1e300) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-12 * (1.0 + std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (cdf(mid) >= p ? hi : lo) = mid;
  }
  return hi;
}

bool Prior::CanSample() const {
  if (const auto* c = std::get_if<Custom>(&source_)) return static_cast<bool>(c->sampler);
  return true;
}

double Prior::Sample(Rng& rng) const {
  if (const auto* d = std::get_if<Distribution>(&source_)) return d->Sample(rng);
  if (const auto* s = std::get_if<StepCdf>(&source_)) {
    const double u = rng.Uniform01();
    const auto& jumps = s->jumps();
    auto it = std::lower_bound(jumps.begin(), jumps.end(), u,
                               [](const StepCdf::Jump& j, double v) { return j.cdf < v; });
    if (it == jumps.end()) --it;
    return it->x;
  }
  const auto& c = std::get<Custom>(source_);
  if (!c.sampler) std::abort();
  return c.sampler(rng);
}

}  // namespace intpriv
