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

#ifndef INTPRIV_ESTIMATION_TURNBULL_H_
#define INTPRIV_ESTIMATION_TURNBULL_H_

#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "intpriv/core/range.h"
#include "intpriv/core/record.h"
#include "intpriv/kernels/em_step.h"

namespace intpriv {

// One support cell of the likelihood. Interval atoms are (lo, hi], or
// (lo, hi) when hi is itself a disclosed point; point atoms are {lo}.
struct Atom {
  ExtReal lo;
  ExtReal hi;
  bool point = false;
  bool hi_open = false;

  bool Contains(double y) const {
    if (point) return y == lo.value();
    return lo < y && (hi_open ? hi > y : hi >= y);
  }
  // Where the atom's mass is reported: the right endpoint, or lo when the
  // atom is unbounded above.
  double Location() const { return hi.is_finite() ? hi.value() : lo.value(); }
};

struct TurnbullSupport {
  std::vector<Atom> atoms;
  // Record r covers atoms in its spans; null records are not listed.
  AtomIncidence incidence;
  // Number of records that carry no information (the full line).
  size_t uninformative = 0;
};

// Cuts the line at every finite endpoint of every chosen range and at every
// disclosed value. Of the resulting cells it keeps the disclosed points and
// the innermost intervals: cells inside at least one observed range whose
// left cut is some part's lower end and whose right cut is some part's upper
// end. Every other cell is covered by a subset of the records covering a
// kept neighbour, so the likelihood is maximized with no mass on it. Each
// record becomes contiguous spans of kept atoms. Fails with NoData when no
// record is non-null.
absl::StatusOr<TurnbullSupport> BuildTurnbullSupport(std::span<const PrivatizedRecord> records);

}  // namespace intpriv

#endif  // INTPRIV_ESTIMATION_TURNBULL_H_
