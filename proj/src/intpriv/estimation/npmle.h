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

#ifndef INTPRIV_ESTIMATION_NPMLE_H_
#define INTPRIV_ESTIMATION_NPMLE_H_

#include <functional>
#include <string>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "intpriv/core/record.h"
#include "intpriv/core/step_cdf.h"
#include "intpriv/estimation/turnbull.h"
#include "intpriv/kernels/parallel.h"
#include "json.hpp"

namespace intpriv {

// kAuto uses the exact current-status solver when every non-null record is a
// single-anchor canonical record without a disclosed value, and EM
// otherwise.
enum class NpmleMethod { kAuto, kEm, kCurrentStatus };

struct NpmleOptions {
  NpmleMethod method = NpmleMethod::kAuto;
  double tol = 1e-8;  // on the largest absolute mass change
  int max_iter = 10000;
  Execution exec = Execution::kParallel;
  // Keep the log-likelihood of every iteration.
  bool keep_trace = false;
};

struct NpmleResult {
  StepCdf cdf;
  double log_likelihood = 0.0;
  std::string method;  // "em" or "current-status"
  int iterations = 0;
  bool converged = false;
  double final_delta = 0.0;
  TurnbullSupport support;
  std::vector<double> masses;  // per atom of `support`, before pruning
  std::vector<double> trace;   // log-likelihood per iteration, if kept

  nlohmann::json ToJson() const;
  // "x,F" rows at the jumps.
  std::string ToCsv() const;
};

// Masses below this are dropped before the step CDF is formed.
inline constexpr double kPruneMass = 1e-12;

// Self-consistency fixed point of the range-data likelihood
//   psi(F) = sum_r log F(S_r),
// started from uniform mass over the atoms, or solved exactly by weighted
// pool-adjacent-violators for current-status data. Null records are skipped. Mass
// is reported at each atom's right endpoint. Fails with DegenerateSupport
// when every record is the whole line, NoData when none is non-null.
absl::StatusOr<NpmleResult> Npmle(std::span<const WireRecord> records,
                                  const NpmleOptions& opts = {});
absl::StatusOr<NpmleResult> Npmle(std::span<const PrivatizedRecord> records,
                                  const NpmleOptions& opts = {});

// sup_x |F_hat(x) - F(x)| for a continuous F, checked on both sides of
// every jump.
double SupNormDistance(const StepCdf& f_hat, const std::function<double(double)>& f);

}  // namespace intpriv

#endif  // INTPRIV_ESTIMATION_NPMLE_H_
