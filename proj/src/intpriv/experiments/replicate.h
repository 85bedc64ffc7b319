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

#ifndef INTPRIV_EXPERIMENTS_REPLICATE_H_
#define INTPRIV_EXPERIMENTS_REPLICATE_H_

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "intpriv/kernels/parallel.h"

namespace intpriv {

// Runs fn(i) for i in [0, reps) and returns the results in index order.
// Replications must derive their randomness from i alone; the work inside
// fn should run serially. The error of the lowest failing index wins.
template <class T, class F>
absl::StatusOr<std::vector<T>> Replicate(size_t reps, Execution exec, F&& fn) {
  std::vector<std::optional<absl::StatusOr<T>>> slots(reps);
  const auto n = static_cast<std::ptrdiff_t>(reps);
  if (exec == Execution::kParallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < n; ++i) slots[static_cast<size_t>(i)].emplace(fn(static_cast<size_t>(i)));
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) slots[static_cast<size_t>(i)].emplace(fn(static_cast<size_t>(i)));
  }
  std::vector<T> out;
  out.reserve(reps);
  for (auto& s : slots) {
    if (!s->ok()) return s->status();
    out.push_back(*std::move(*s));
  }
  return out;
}

}  // namespace intpriv

#endif  // INTPRIV_EXPERIMENTS_REPLICATE_H_
