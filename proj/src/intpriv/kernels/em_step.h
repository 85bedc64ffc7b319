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

#ifndef INTPRIV_KERNELS_EM_STEP_H_
#define INTPRIV_KERNELS_EM_STEP_H_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "intpriv/kernels/parallel.h"

namespace intpriv {

// Which atoms each record covers, as half-open index spans [begin, end).
// Record r owns spans[offsets[r] .. offsets[r + 1]).
struct AtomIncidence {
  size_t num_atoms = 0;
  std::vector<uint32_t> offsets = {0};
  std::vector<std::pair<uint32_t, uint32_t>> spans;

  size_t num_records() const { return offsets.size() - 1; }
  void AddRecord(std::span<const std::pair<uint32_t, uint32_t>> record_spans) {
    spans.insert(spans.end(), record_spans.begin(), record_spans.end());
    offsets.push_back(static_cast<uint32_t>(spans.size()));
  }
};

// One self-consistency update,
//   next[a] = mass[a] * (1/n) * sum over records r covering a of 1 / mass(r),
// in O(n + atoms) through prefix sums and a difference array. Returns the
// log-likelihood sum_r log mass(r) evaluated at `mass`.
double SelfConsistencyStep(const AtomIncidence& inc, std::span<const double> mass,
                           std::span<double> next, Execution exec = Execution::kParallel);

// Direct evaluation of the same update, touching every covered atom of every
// record. Reference for tests and benchmarks.
double SelfConsistencyStepNaive(const AtomIncidence& inc, std::span<const double> mass,
                                std::span<double> next);

}  // namespace intpriv

#endif  // INTPRIV_KERNELS_EM_STEP_H_
