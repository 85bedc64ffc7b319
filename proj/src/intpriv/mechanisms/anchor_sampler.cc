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

#include "intpriv/mechanisms/anchor_sampler.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "absl/strings/str_cat.h"
#include "intpriv/core/errors.h"

namespace intpriv {

namespace {

bool StrictlyIncreasing(const std::vector<double>& v) {
  for (size_t i = 1; i < v.size(); ++i) {
    if (!(v[i - 1] < v[i])) return false;
  }
  return true;
}

absl::Status TooManyTies() {
  return FailedPrecondition(
      "DegenerateAnchors",
      absl::StrCat("no tie-free anchor vector after ", AnchorSampler::kMaxAttempts,
                   " attempts"));
}

}  // namespace

absl::StatusOr<AnchorSampler> AnchorSampler::Iid(Distribution law, size_t count) {
  if (count == 0) return InvalidArgument("InvalidSampler", "anchor count must be >= 1");
  return AnchorSampler(Shape::kIid, {std::move(law)}, count, {});
}

absl::StatusOr<AnchorSampler> AnchorSampler::Centered(Distribution law,
                                                      std::vector<double> offsets) {
  if (offsets.empty() || !StrictlyIncreasing(offsets)) {
    return InvalidArgument("InvalidSampler", "offsets must be non-empty and increasing");
  }
  for (double o : offsets) {
    if (!std::isfinite(o)) return InvalidArgument("InvalidSampler", "offsets must be finite");
  }
  const size_t count = offsets.size();
  return AnchorSampler(Shape::kCentered, {std::move(law)}, count, std::move(offsets));
}

absl::StatusOr<AnchorSampler> AnchorSampler::PerAnchor(std::vector<Distribution> laws) {
  if (laws.empty()) return InvalidArgument("InvalidSampler", "need at least one law");
  const size_t count = laws.size();
  return AnchorSampler(Shape::kPerAnchor, std::move(laws), count, {});
}

size_t AnchorSampler::count() const { return count_; }

absl::StatusOr<std::vector<double>> AnchorSampler::Draw(Rng& rng) const {
  std::vector<double> out(count_);
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    switch (shape_) {
      case Shape::kIid:
        for (double& a : out) a = laws_[0].Sample(rng);
        break;
      case Shape::kCentered: {
        const double c = laws_[0].Sample(rng);
        for (size_t k = 0; k < count_; ++k) out[k] = c + offsets_[k];
        break;
      }
      case Shape::kPerAnchor:
        for (size_t k = 0; k < count_; ++k) out[k] = laws_[k].Sample(rng);
        break;
    }
    std::sort(out.begin(), out.end());
    if (StrictlyIncreasing(out)) return out;
  }
  return TooManyTies();
}

absl::StatusOr<std::vector<double>> AnchorSampler::DrawWithin(double lo, double hi,
                                                              bool truncated_base,
                                                              Rng& rng) const {
  if (!(lo < hi)) return InvalidArgument("InvalidRange", "empty range for anchors");
  std::vector<double> out(count_);
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    for (double& a : out) {
      a = truncated_base ? laws_[0].SampleTruncated(lo, hi, rng) : rng.Uniform(lo, hi);
      // Uniform01 is open, so a lies in (lo, hi); keep it off hi so that
      // both sub-ranges stay non-empty.
      if (!(a < hi)) a = std::nextafter(hi, lo);
      if (!(a > lo)) a = std::nextafter(lo, hi);
    }
    std::sort(out.begin(), out.end());
    if (StrictlyIncreasing(out)) return out;
  }
  return TooManyTies();
}

}  // namespace intpriv
