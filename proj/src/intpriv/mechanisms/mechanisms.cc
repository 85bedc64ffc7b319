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

#include "intpriv/mechanisms/mechanisms.h"

#include <algorithm>
#include <utility>

#include "absl/strings/str_cat.h"
#include "intpriv/core/errors.h"

namespace intpriv {

namespace {

bool InAcceptable(const AcceptableRegion& acc, const Partition& p, size_t choice,
                  double y) {
  switch (acc.kind) {
    case AcceptableRegion::Kind::kNone:
      return false;
    case AcceptableRegion::Kind::kFixedRange:
      return acc.range.Contains(y);
    case AcceptableRegion::Kind::kPartitionIndices:
      return std::find(acc.indices.begin(), acc.indices.end(), choice) != acc.indices.end() &&
             p.range(choice).Contains(y);
  }
  return false;
}

// Partition on the g-scale pulled back to the data scale. Ranges whose
// pre-image is empty are dropped; kept[k] is the 1-based g-scale index of
// pulled-back range k + 1.
struct PulledBack {
  std::vector<double> anchors;
  Partition partition;
  std::vector<size_t> kept;
};

absl::StatusOr<PulledBack> PullBackPartition(const std::vector<double>& q, Topology topology,
                                             const MonotoneTransform& g) {
  INTPRIV_ASSIGN_OR_RETURN(Partition gp, topology == Topology::kRing ? Partition::Ring(q)
                                                                      : Partition::Canonical(q));
  PulledBack out;
  for (double a : q) {
    const ExtReal x = g.Inverse(a);
    if (x.is_finite()) out.anchors.push_back(x.value());
  }
  // Distinct g-scale anchors can also collapse numerically under g^{-1}.
  out.anchors.erase(std::unique(out.anchors.begin(), out.anchors.end()), out.anchors.end());
  if (topology == Topology::kCanonical) {
    INTPRIV_ASSIGN_OR_RETURN(out.partition, Partition::Canonical(out.anchors));
  } else if (out.anchors.size() == q.size()) {
    INTPRIV_ASSIGN_OR_RETURN(out.partition, Partition::Ring(out.anchors));
  } else {
    std::vector<Range> ranges;
    for (const Range& r : gp.ranges()) {
      Range back = g.PullBack(r);
      if (!back.empty()) ranges.push_back(std::move(back));
    }
    INTPRIV_ASSIGN_OR_RETURN(out.partition, Partition::FromRanges(std::move(ranges)));
  }
  // Map each data-scale range to its g-scale index through an interior point.
  for (const Range& r : out.partition.ranges()) {
    const Interval& iv = r.parts().front();
    double probe = 0.0;
    if (iv.lo.is_finite() && iv.hi.is_finite()) {
      probe = 0.5 * (iv.lo.value() + iv.hi.value());
    } else if (iv.hi.is_finite()) {
      probe = iv.hi.value() - 1.0;
    } else if (iv.lo.is_finite()) {
      probe = iv.lo.value() + 1.0;
    }
    out.kept.push_back(gp.Locate(g.Apply(probe)));
  }
  return out;
}

}  // namespace

absl::StatusOr<PrivatizedRecord> PrivatizeWithAnchors(double y,
                                                      std::span<const double> anchors,
                                                      Topology topology,
                                                      const AcceptableRegion& acceptable) {
  INTPRIV_ASSIGN_OR_RETURN(Partition p, topology == Topology::kRing
                                            ? Partition::Ring(anchors)
                                            : Partition::Canonical(anchors));
  const size_t choice = p.Locate(y);
  std::optional<double> exact;
  if (InAcceptable(acceptable, p, choice, y)) exact = y;
  return PrivatizedRecord::Make(std::vector<double>(anchors.begin(), anchors.end()),
                                std::move(p), choice, exact);
}

absl::StatusOr<PrivatizedRecord> PrivatizeCaseOne(double y, const AnchorSampler& sampler,
                                                  Rng& rng) {
  if (sampler.count() != 1) {
    return InvalidArgument("WrongShape", "Case-I needs a one-anchor sampler");
  }
  INTPRIV_ASSIGN_OR_RETURN(std::vector<double> anchors, sampler.Draw(rng));
  return PrivatizeWithAnchors(y, anchors, Topology::kCanonical);
}

absl::StatusOr<DrawnPartition> DrawPartition(const MechanismConfig& cfg, Rng& rng) {
  INTPRIV_ASSIGN_OR_RETURN(std::vector<double> q, cfg.sampler().Draw(rng));
  DrawnPartition out;
  if (!cfg.transform()) {
    INTPRIV_ASSIGN_OR_RETURN(out.partition, cfg.topology() == Topology::kRing
                                                ? Partition::Ring(q)
                                                : Partition::Canonical(q));
    out.g_index.resize(out.partition.size());
    for (size_t k = 0; k < out.g_index.size(); ++k) out.g_index[k] = k + 1;
    out.anchors = std::move(q);
    return out;
  }
  INTPRIV_ASSIGN_OR_RETURN(PulledBack pb, PullBackPartition(q, cfg.topology(), *cfg.transform()));
  out.anchors = std::move(pb.anchors);
  out.partition = std::move(pb.partition);
  out.g_index = std::move(pb.kept);
  return out;
}

absl::StatusOr<PrivatizedRecord> Privatize(double y, const MechanismConfig& cfg, Rng& rng) {
  INTPRIV_ASSIGN_OR_RETURN(DrawnPartition d, DrawPartition(cfg, rng));
  const size_t choice = d.partition.Locate(y);
  std::optional<double> exact;
  const AcceptableRegion& acc = cfg.acceptable();
  if (!cfg.transform()) {
    if (InAcceptable(acc, d.partition, choice, y)) exact = y;
  } else if (acc.kind == AcceptableRegion::Kind::kFixedRange) {
    if (cfg.transform()->PullBack(acc.range).Contains(y)) exact = y;
  } else if (acc.kind == AcceptableRegion::Kind::kPartitionIndices) {
    const size_t g_index = d.g_index[choice - 1];
    if (std::find(acc.indices.begin(), acc.indices.end(), g_index) != acc.indices.end()) {
      exact = y;
    }
  }
  return PrivatizedRecord::Make(std::move(d.anchors), std::move(d.partition), choice, exact);
}

absl::StatusOr<SelectiveOutcome> PrivatizeSelective(double y, const MechanismConfig& cfg,
                                                    Rng& rng) {
  if (!cfg.selective()) {
    return InvalidArgument("ValidationError", "config has no selective parameters");
  }
  const SelectiveParams& sp = *cfg.selective();
  INTPRIV_ASSIGN_OR_RETURN(PrivatizedRecord candidate, Privatize(y, cfg, rng));
  SelectiveOutcome out{NullRecord{}, 0.0, false, false};
  out.coverage = candidate.exact() ? 0.0 : sp.prior.Mass(candidate.chosen_range());
  out.w = rng.Bernoulli(sp.rho);
  out.emitted = out.w && out.coverage >= sp.tau;
  if (out.emitted) out.record = std::move(candidate);
  return out;
}

absl::StatusOr<PrivatizedRecord> Ensemble(const PrivatizedRecord& a,
                                          const PrivatizedRecord& b) {
  if (a.exact() && b.exact() && *a.exact() != *b.exact()) {
    return InvalidArgument("InconsistentRecords", "records disclose different exact values");
  }
  const Range inter = a.chosen_range().Intersect(b.chosen_range());
  if (inter.empty()) {
    return InvalidArgument("InconsistentRecords",
                           absl::StrCat("chosen ranges ", a.chosen_range().ToString(), " and ",
                                        b.chosen_range().ToString(), " are disjoint"));
  }
  const std::optional<double> exact = a.exact() ? a.exact() : b.exact();
  if (exact && !inter.Contains(*exact)) {
    return InvalidArgument("InconsistentRecords", "exact value outside the joint range");
  }
  std::vector<double> anchors = a.anchors();
  anchors.insert(anchors.end(), b.anchors().begin(), b.anchors().end());
  std::sort(anchors.begin(), anchors.end());
  anchors.erase(std::unique(anchors.begin(), anchors.end()), anchors.end());

  Partition partition;
  if (a.partition().topology() == Topology::kCanonical &&
      b.partition().topology() == Topology::kCanonical) {
    INTPRIV_ASSIGN_OR_RETURN(partition, Partition::Canonical(anchors));
  } else {
    std::vector<Range> cells;
    for (const Range& ra : a.partition().ranges()) {
      for (const Range& rb : b.partition().ranges()) {
        Range c = ra.Intersect(rb);
        if (!c.empty()) cells.push_back(std::move(c));
      }
    }
    std::sort(cells.begin(), cells.end(), [](const Range& x, const Range& y) {
      return x.parts().front().lo < y.parts().front().lo;
    });
    INTPRIV_ASSIGN_OR_RETURN(partition, Partition::FromRanges(std::move(cells)));
  }
  size_t choice = 0;
  for (size_t i = 1; i <= partition.size(); ++i) {
    if (partition.range(i) == inter) {
      choice = i;
      break;
    }
  }
  if (choice == 0) return InvalidArgument("InconsistentRecords", "joint range not a cell");
  std::optional<std::vector<double>> features = a.features() ? a.features() : b.features();
  return PrivatizedRecord::Make(std::move(anchors), std::move(partition), choice, exact,
                                std::move(features), a.meta());
}

absl::StatusOr<PrivatizedRecord> Ensemble(std::span<const PrivatizedRecord> records) {
  if (records.empty()) return InvalidArgument("NoData", "empty ensemble");
  PrivatizedRecord acc = records.front();
  for (size_t i = 1; i < records.size(); ++i) {
    INTPRIV_ASSIGN_OR_RETURN(acc, Ensemble(acc, records[i]));
  }
  return acc;
}

absl::StatusOr<MechanismConfig> Pullback(const MechanismConfig& cfg,
                                         const MonotoneTransform& g) {
  if (cfg.transform()) {
    return InvalidArgument("Unsupported", "config already carries a transform");
  }
  if (cfg.progressive()) {
    return InvalidArgument("Unsupported", "progressive configs cannot be pulled back");
  }
  return cfg.WithTransform(g);
}

}  // namespace intpriv
