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

#include "intpriv/mechanisms/progressive.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "intpriv/core/errors.h"
#include "intpriv/mechanisms/mechanisms.h"

namespace intpriv {

ProgressiveAnswer TruthfulAnswer(const ProgressiveQuestion& q, double y) {
  for (size_t i = 0; i < q.choices.size(); ++i) {
    if (q.choices[i].Contains(y)) return ProgressiveAnswer::Choose(i + 1);
  }
  return ProgressiveAnswer::OptOut();
}

absl::StatusOr<ProgressiveSession> ProgressiveSession::Start(double lo, double hi,
                                                             const MechanismConfig& cfg) {
  if (!cfg.progressive()) {
    return InvalidArgument("ValidationError", "config has no progressive parameters");
  }
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    return InvalidArgument("ValidationError", "progressive domain must be finite, lo < hi");
  }
  return ProgressiveSession(lo, hi, cfg);
}

absl::StatusOr<ProgressiveQuestion> ProgressiveSession::Issue(Rng& rng) {
  const Interval& iv = current_.parts().front();
  INTPRIV_ASSIGN_OR_RETURN(
      std::vector<double> anchors,
      cfg_.sampler().DrawWithin(iv.lo.value(), iv.hi.value(), cfg_.progressive()->truncated_base,
                                rng));
  ProgressiveQuestion q;
  q.round = round_ + 1;
  double prev = iv.lo.value();
  for (double a : anchors) {
    q.choices.push_back(Range::Between(prev, a));
    prev = a;
  }
  q.choices.push_back(Range::Between(prev, iv.hi.value()));
  q.anchors = std::move(anchors);
  pending_ = q;
  return q;
}

absl::StatusOr<ProgressiveQuestion> ProgressiveSession::Begin(Rng& rng) {
  if (status_ != ProgressiveStatus::kActive) {
    return FailedPrecondition("SessionClosed", "progressive flow already ended");
  }
  if (round_ != 0 || pending_) {
    return FailedPrecondition("RoundNotReady", "flow already started");
  }
  return Issue(rng);
}

void ProgressiveSession::Abandon() {
  if (status_ != ProgressiveStatus::kActive) return;
  pending_.reset();
  status_ = round_ == 0 ? ProgressiveStatus::kNullResponse : ProgressiveStatus::kDone;
}

absl::StatusOr<ProgressiveSession::StepResult> ProgressiveSession::Step(
    const ProgressiveAnswer& answer, Rng& rng) {
  if (status_ != ProgressiveStatus::kActive) {
    return FailedPrecondition("SessionClosed", "progressive flow already ended");
  }
  if (!pending_) return FailedPrecondition("RoundNotReady", "no question is pending");
  const ProgressiveQuestion q = *std::move(pending_);
  pending_.reset();
  const ProgressiveParams& pp = *cfg_.progressive();

  if (!answer.choice) {
    Abandon();
    return StepResult{status_, std::nullopt};
  }
  const size_t c = *answer.choice;
  if (c < 1 || c > q.choices.size()) {
    pending_ = q;
    return InvalidArgument("ValidationError",
                           absl::StrCat("choice ", c, " outside [1, ", q.choices.size(), "]"));
  }
  const Range& candidate = q.choices[c - 1];
  if (pp.tau > 0.0 && pp.prior->Mass(candidate) < pp.tau) {
    // The narrowed range is too revealing: keep what was collected so far.
    Abandon();
    return StepResult{status_, std::nullopt};
  }
  INTPRIV_ASSIGN_OR_RETURN(Partition p, Partition::Canonical(q.anchors));
  INTPRIV_ASSIGN_OR_RETURN(PrivatizedRecord z,
                           PrivatizedRecord::Make(q.anchors, std::move(p), c));
  history_.push_back(std::move(z));
  current_ = candidate;
  round_ = q.round;
  if (round_ >= pp.max_rounds) {
    status_ = ProgressiveStatus::kDone;
    return StepResult{status_, std::nullopt};
  }
  INTPRIV_ASSIGN_OR_RETURN(ProgressiveQuestion next, Issue(rng));
  return StepResult{status_, std::move(next)};
}

absl::StatusOr<WireRecord> ProgressiveSession::Collected() const {
  if (history_.empty()) return WireRecord(NullRecord{});
  std::vector<double> anchors = {lo_, hi_};
  for (const PrivatizedRecord& z : history_) {
    anchors.insert(anchors.end(), z.anchors().begin(), z.anchors().end());
  }
  std::sort(anchors.begin(), anchors.end());
  anchors.erase(std::unique(anchors.begin(), anchors.end()), anchors.end());
  INTPRIV_ASSIGN_OR_RETURN(Partition p, Partition::Canonical(anchors));
  const size_t choice = p.Locate(current_.parts().back().hi.value());
  if (!(p.range(choice) == current_)) {
    return FailedPrecondition("InconsistentRecords", "cumulative range is not a cell");
  }
  INTPRIV_ASSIGN_OR_RETURN(PrivatizedRecord r,
                           PrivatizedRecord::Make(std::move(anchors), std::move(p), choice));
  return WireRecord(std::move(r));
}

}  // namespace intpriv
