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

#include "intpriv/kernels/em_step.h"

#include <cmath>

namespace intpriv {

double SelfConsistencyStep(const AtomIncidence& inc, std::span<const double> mass,
                           std::span<double> next, Execution exec) {
  const size_t atoms = inc.num_atoms;
  const size_t n = inc.num_records();
  // Extended precision keeps mass(r) = P[end] - P[begin] accurate for
  // narrow spans deep into the cumulative sum.
  std::vector<long double> prefix(atoms + 1, 0.0L);
  for (size_t a = 0; a < atoms; ++a) prefix[a + 1] = prefix[a] + mass[a];

  std::vector<double> weight(n);
  const double loglik = BlockedSum(n, exec, [&](size_t r) {
    long double den = 0.0L;
    for (uint32_t k = inc.offsets[r]; k < inc.offsets[r + 1]; ++k) {
      den += prefix[inc.spans[k].second] - prefix[inc.spans[k].first];
    }
    weight[r] = static_cast<double>(1.0L / den);
    return std::log(static_cast<double>(den));
  });

  std::vector<long double> diff(atoms + 1, 0.0L);
  for (size_t r = 0; r < n; ++r) {
    for (uint32_t k = inc.offsets[r]; k < inc.offsets[r + 1]; ++k) {
      diff[inc.spans[k].first] += weight[r];
      diff[inc.spans[k].second] -= weight[r];
    }
  }
  std::vector<double> load(atoms);
  long double run = 0.0L;
  for (size_t a = 0; a < atoms; ++a) {
    run += diff[a];
    load[a] = static_cast<double>(run);
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  ForEachBlock(atoms, exec, [&](size_t, size_t begin, size_t end) {
    for (size_t a = begin; a < end; ++a) next[a] = mass[a] * load[a] * inv_n;
  });
  return loglik;
}

double SelfConsistencyStepNaive(const AtomIncidence& inc, std::span<const double> mass,
                                std::span<double> next) {
  const size_t n = inc.num_records();
  for (size_t a = 0; a < inc.num_atoms; ++a) next[a] = 0.0;
  double loglik = 0.0;
  for (size_t r = 0; r < n; ++r) {
    double den = 0.0;
    for (uint32_t k = inc.offsets[r]; k < inc.offsets[r + 1]; ++k) {
      for (uint32_t a = inc.spans[k].first; a < inc.spans[k].second; ++a) den += mass[a];
    }
    loglik += std::log(den);
    for (uint32_t k = inc.offsets[r]; k < inc.offsets[r + 1]; ++k) {
      for (uint32_t a = inc.spans[k].first; a < inc.spans[k].second; ++a) {
        next[a] += mass[a] / den;
      }
    }
  }
  for (size_t a = 0; a < inc.num_atoms; ++a) next[a] /= static_cast<double>(n);
  return loglik;
}

}  // namespace intpriv
