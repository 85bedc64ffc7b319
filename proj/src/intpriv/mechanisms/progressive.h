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

#ifndef INTPRIV_MECHANISMS_PROGRESSIVE_H_
#define INTPRIV_MECHANISMS_PROGRESSIVE_H_

#include <optional>
#include <vector>

#include "absl/status/statusor.h"
#include "intpriv/core/range.h"
#include "intpriv/core/record.h"
#include "intpriv/core/rng.h"
#include "intpriv/mechanisms/config.h"

namespace intpriv {

enum class ProgressiveStatus { kActive, kDone, kNullResponse };

struct ProgressiveQuestion {
  int round = 0;                // 1-based
  std::vector<double> anchors;  // inside the current range
  std::vector<Range> choices;   // the current range cut at the anchors
};

// A respondent's reply: a 1-based choice, or "not wish to answer".
struct ProgressiveAnswer {
  std::optional<size_t> choice;
  static ProgressiveAnswer OptOut() { return {}; }
  static ProgressiveAnswer Choose(size_t i) { return {i}; }
};

// The answer of a respondent holding value y (which must lie in the
// question's current range).
ProgressiveAnswer TruthfulAnswer(const ProgressiveQuestion& q, double y);

// Multi-round refinement over a finite domain (lo, hi]. Each round draws
// anchors inside the current range; the answer narrows it. The flow stops
// after max_rounds answers, on opt-out, or when the prior mass of the new
// cumulative range would fall below tau; in the last case the round is
// discarded. Stopping in round 1 by opt-out or tau yields a null response.
class ProgressiveSession {
 public:
  static absl::StatusOr<ProgressiveSession> Start(double lo, double hi,
                                                  const MechanismConfig& cfg);

  // Issues the round-1 question.
  absl::StatusOr<ProgressiveQuestion> Begin(Rng& rng);
  // Answers the pending question and, when the flow continues, issues the
  // next one. Fails with SessionClosed after termination and RoundNotReady
  // when no question is pending.
  struct StepResult {
    ProgressiveStatus status;
    std::optional<ProgressiveQuestion> next;
  };
  absl::StatusOr<StepResult> Step(const ProgressiveAnswer& answer, Rng& rng);
  // Ends an active flow as if the respondent had walked away.
  void Abandon();

  ProgressiveStatus status() const { return status_; }
  int round() const { return round_; }
  const Range& current_range() const { return current_; }
  const std::vector<PrivatizedRecord>& history() const { return history_; }
  const std::optional<ProgressiveQuestion>& pending() const { return pending_; }

  // The collected datum: a canonical record whose anchors are the domain
  // bounds plus every accepted anchor and whose chosen cell is the
  // cumulative range; null when nothing was accepted.
  absl::StatusOr<WireRecord> Collected() const;

 private:
  ProgressiveSession(double lo, double hi, MechanismConfig cfg)
      : lo_(lo), hi_(hi), cfg_(std::move(cfg)), current_(Range::Between(lo, hi)) {}

  absl::StatusOr<ProgressiveQuestion> Issue(Rng& rng);

  double lo_;
  double hi_;
  MechanismConfig cfg_;
  ProgressiveStatus status_ = ProgressiveStatus::kActive;
  int round_ = 0;  // accepted rounds
  Range current_;
  std::vector<PrivatizedRecord> history_;
  std::optional<ProgressiveQuestion> pending_;
};

}  // namespace intpriv

#endif  // INTPRIV_MECHANISMS_PROGRESSIVE_H_
