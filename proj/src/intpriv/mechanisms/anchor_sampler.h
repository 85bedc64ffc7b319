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

#ifndef INTPRIV_MECHANISMS_ANCHOR_SAMPLER_H_
#define INTPRIV_MECHANISMS_ANCHOR_SAMPLER_H_

#include <vector>

#include "absl/status/statusor.h"
#include "intpriv/core/distribution.h"
#include "intpriv/core/rng.h"

namespace intpriv {

// Draws the anchor vector of one privatization. Anchors never depend on the
// value being privatized. Three shapes are supported:
//   Iid:       count i.i.d. draws from one law, sorted;
//   Centered:  one draw c from the law, anchors c + offsets;
//   PerAnchor: anchor k drawn from its own law, then sorted.
// Draws with tied anchors are redrawn as a whole vector, at most
// kMaxAttempts times.
class AnchorSampler {
 public:
  enum class Shape { kIid, kCentered, kPerAnchor };
  static constexpr int kMaxAttempts = 100;

  static absl::StatusOr<AnchorSampler> Iid(Distribution law, size_t count);
  static absl::StatusOr<AnchorSampler> Centered(Distribution law,
                                                std::vector<double> offsets);
  static absl::StatusOr<AnchorSampler> PerAnchor(std::vector<Distribution> laws);

  Shape shape() const { return shape_; }
  size_t count() const;
  // The law of the first (or only) component. Progressive flows truncate it.
  const Distribution& base_law() const { return laws_.front(); }
  const std::vector<Distribution>& laws() const { return laws_; }
  const std::vector<double>& offsets() const { return offsets_; }

  // Strictly increasing anchors.
  absl::StatusOr<std::vector<double>> Draw(Rng& rng) const;
  // count() anchors inside (lo, hi]: uniform there, or the base law
  // truncated to (lo, hi] when truncated_base is set.
  absl::StatusOr<std::vector<double>> DrawWithin(double lo, double hi,
                                                 bool truncated_base,
                                                 Rng& rng) const;

 private:
  AnchorSampler(Shape shape, std::vector<Distribution> laws, size_t count,
                std::vector<double> offsets)
      : shape_(shape), laws_(std::move(laws)), count_(count), offsets_(std::move(offsets)) {}

  Shape shape_;
  std::vector<Distribution> laws_;
  size_t count_;
  std::vector<double> offsets_;
};

}  // namespace intpriv

#endif  // INTPRIV_MECHANISMS_ANCHOR_SAMPLER_H_
