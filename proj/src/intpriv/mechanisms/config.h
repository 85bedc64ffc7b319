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

#ifndef INTPRIV_MECHANISMS_CONFIG_H_
#define INTPRIV_MECHANISMS_CONFIG_H_

#include <optional>
#include <vector>

#include "absl/status/statusor.h"
#include "intpriv/core/distribution.h"
#include "intpriv/core/prior.h"
#include "intpriv/core/range.h"
#include "intpriv/mechanisms/anchor_sampler.h"
#include "intpriv/mechanisms/transform.h"
#include "json.hpp"

namespace intpriv {

inline constexpr int kConfigSchemaVersion = 1;

// Where the exact value is disclosed instead of a range.
struct AcceptableRegion {
  enum class Kind { kNone, kFixedRange, kPartitionIndices };
  Kind kind = Kind::kNone;
  Range range;                  // kFixedRange
  std::vector<size_t> indices;  // kPartitionIndices, 1-based

  static AcceptableRegion None() { return {}; }
  static AcceptableRegion Fixed(Range r) { return {Kind::kFixedRange, std::move(r), {}}; }
  static AcceptableRegion Indices(std::vector<size_t> idx) {
    return {Kind::kPartitionIndices, Range(), std::move(idx)};
  }
};

struct SelectiveParams {
  double tau = 0.0;
  double rho = 1.0;
  Prior prior;
};

struct ProgressiveParams {
  int max_rounds = 3;
  double tau = 0.0;
  // Anchors of each round: uniform on the current range, or the sampler's
  // base law truncated to it.
  bool truncated_base = false;
  // Needed when tau > 0, to evaluate L of the cumulative range.
  std::optional<Prior> prior;
};

class MechanismConfig {
 public:
  // `ranges` is m for canonical topologies and q for rings. The sampler must
  // produce m - 1 (canonical) or q (ring) anchors.
  static absl::StatusOr<MechanismConfig> Make(
      Topology topology, size_t ranges, AnchorSampler sampler,
      AcceptableRegion acceptable = AcceptableRegion::None(),
      std::optional<SelectiveParams> selective = std::nullopt,
      std::optional<ProgressiveParams> progressive = std::nullopt,
      std::optional<MonotoneTransform> transform = std::nullopt);

  // Case-I: one anchor, two ranges.
  static absl::StatusOr<MechanismConfig> CaseOne(Distribution law);

  Topology topology() const { return topology_; }
  size_t num_ranges() const { return num_ranges_; }
  const AnchorSampler& sampler() const { return sampler_; }
  const AcceptableRegion& acceptable() const { return acceptable_; }
  const std::optional<SelectiveParams>& selective() const { return selective_; }
  const std::optional<ProgressiveParams>& progressive() const { return progressive_; }
  const std::optional<MonotoneTransform>& transform() const { return transform_; }

  MechanismConfig WithTransform(MonotoneTransform g) const;
  MechanismConfig WithSampler(AnchorSampler s) const;

  nlohmann::json ToJson() const;
  static absl::StatusOr<MechanismConfig> FromJson(const nlohmann::json& j);

 private:
  MechanismConfig(Topology topology, size_t ranges, AnchorSampler sampler)
      : topology_(topology), num_ranges_(ranges), sampler_(std::move(sampler)) {}

  Topology topology_;
  size_t num_ranges_;
  AnchorSampler sampler_;
  AcceptableRegion acceptable_;
  std::optional<SelectiveParams> selective_;
  std::optional<ProgressiveParams> progressive_;
  std::optional<MonotoneTransform> transform_;
};

// JSON forms shared with survey definitions and CLI configs.
//   law:     {"kind":"uniform","a","b"} | {"kind":"logistic","loc","scale"} |
//            {"kind":"gaussian","mean","sd"} |
//            {"kind":"mixture","weight","mean_a","mean_b","sigma"} |
//            {"kind":"grid","x":[...],"density":[...]}
//   sampler: {"law":law,"count":k} | {"law":law,"offsets":[...]} |
//            {"per_anchor":[law,...]}
//   prior:   {"kind":"distribution","law":law} |
//            {"kind":"step","jumps":[[x,F],...],"provenance":"empirical"|...}
nlohmann::json DistributionToJson(const Distribution& d);
absl::StatusOr<Distribution> DistributionFromJson(const nlohmann::json& j);
nlohmann::json SamplerToJson(const AnchorSampler& s);
absl::StatusOr<AnchorSampler> SamplerFromJson(const nlohmann::json& j);
// Custom priors have no JSON form and serialize to null.
nlohmann::json PriorToJson(const Prior& p);
absl::StatusOr<Prior> PriorFromJson(const nlohmann::json& j);

}  // namespace intpriv

#endif  // INTPRIV_MECHANISMS_CONFIG_H_
