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

#ifndef INTPRIV_CORE_PRIOR_H_
#define INTPRIV_CORE_PRIOR_H_

#include <functional>
#include <optional>
#include <string>
#include <variant>

#include "absl/strings/string_view.h"
#include "intpriv/core/distribution.h"
#include "intpriv/core/range.h"
#include "intpriv/core/rng.h"
#include "intpriv/core/step_cdf.h"

namespace intpriv {

// Where the prior used to measure coverage came from.
enum class PriorProvenance { kKnownCdf, kNpmlePlugIn, kEmpirical };

absl::string_view ProvenanceName(PriorProvenance p);

// The law of Y used to measure coverage L(S) = P_Y(S). Either an analytic
// distribution, a step CDF (NPMLE or empirical), or an arbitrary CDF given
// as a function (optionally with a sampler).
class Prior {
 public:
  struct Custom {
    std::function<double(double)> cdf;
    std::function<double(Rng&)> sampler;  // may be empty
  };

  Prior(Distribution d)  // NOLINT: implicit by design of the call sites.
      : source_(std::move(d)), provenance_(PriorProvenance::kKnownCdf) {}
  Prior(StepCdf cdf, PriorProvenance provenance)
      : source_(std::move(cdf)), provenance_(provenance) {}
  Prior(Custom custom)  // NOLINT
      : source_(std::move(custom)), provenance_(PriorProvenance::kKnownCdf) {}

  PriorProvenance provenance() const { return provenance_; }

  double Cdf(const ExtReal& x) const;
  double Cdf(double x) const { return Cdf(ExtReal(x)); }
  double Mass(const Range& r) const;
  // Smallest x with F(x) >= p, for p in (0, 1). Custom CDFs are inverted by
  // bisection.
  double Quantile(double p) const;

  bool CanSample() const;
  // Requires CanSample().
  double Sample(Rng& rng) const;

  const Distribution* distribution() const { return std::get_if<Distribution>(&source_); }
  const StepCdf* step_cdf() const { return std::get_if<StepCdf>(&source_); }

 private:
  std::variant<Distribution, StepCdf, Custom> source_;
  PriorProvenance provenance_;
};

}  // namespace intpriv

#endif  // INTPRIV_CORE_PRIOR_H_
