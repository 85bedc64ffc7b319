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

#ifndef INTPRIV_MECHANISMS_MECHANISMS_H_
#define INTPRIV_MECHANISMS_MECHANISMS_H_

#include <optional>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "intpriv/core/record.h"
#include "intpriv/core/rng.h"
#include "intpriv/mechanisms/config.h"

namespace intpriv {

// Deterministic core shared by every mechanism: build the partition induced
// by `anchors`, locate y and disclose it when it falls in the acceptable
// region.
absl::StatusOr<PrivatizedRecord> PrivatizeWithAnchors(
    double y, std::span<const double> anchors, Topology topology,
    const AcceptableRegion& acceptable = AcceptableRegion::None());

// Case-I: a single anchor u, ranges (-inf, u] and (u, inf).
absl::StatusOr<PrivatizedRecord> PrivatizeCaseOne(double y, const AnchorSampler& sampler,
                                                  Rng& rng);

// One draw of the question `cfg` asks, before any value is seen: the
// realized anchors and partition on the data scale (pullback applied).
// g_index[k] is the 1-based g-scale index of range k + 1; the identity when
// there is no transform.
struct DrawnPartition {
  std::vector<double> anchors;
  Partition partition;
  std::vector<size_t> g_index;
};
absl::StatusOr<DrawnPartition> DrawPartition(const MechanismConfig& cfg, Rng& rng);

// Canonical or ring mechanism per `cfg`, applying the pullback transform
// when one is attached. Selective and progressive parameters are ignored
// here; see PrivatizeSelective and ProgressiveSession.
absl::StatusOr<PrivatizedRecord> Privatize(double y, const MechanismConfig& cfg, Rng& rng);

// Records the gate draws next to the emitted datum so that ignorability can
// be measured.
struct SelectiveOutcome {
  WireRecord record;
  double coverage = 0.0;  // L(S_Z) of the candidate record
  bool w = false;          // the Bernoulli(rho) gate
  bool emitted = false;
};

// (tau, rho)-selective mechanism: emits the candidate iff L(S_Z) >= tau and
// W = 1, otherwise a null record (the candidate's anchors are discarded).
absl::StatusOr<SelectiveOutcome> PrivatizeSelective(double y, const MechanismConfig& cfg,
                                                    Rng& rng);

// Record-level ensemble: pooled anchors, the partition of all non-empty
// pairwise intersections, and the intersection of the two chosen ranges.
// Fails with InconsistentRecords when the two cannot describe one value.
absl::StatusOr<PrivatizedRecord> Ensemble(const PrivatizedRecord& a, const PrivatizedRecord& b);
absl::StatusOr<PrivatizedRecord> Ensemble(std::span<const PrivatizedRecord> records);

// Pullback of `cfg` through g: anchors are drawn on the g-scale and mapped
// back with g^{-1}.
// Fails with Unsupported when `cfg` already carries a transform.
absl::StatusOr<MechanismConfig> Pullback(const MechanismConfig& cfg,
                                         const MonotoneTransform& g);

}  // namespace intpriv

#endif  // INTPRIV_MECHANISMS_MECHANISMS_H_
