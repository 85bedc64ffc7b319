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

#ifndef INTPRIV_COVERAGE_COVERAGE_H_
#define INTPRIV_COVERAGE_COVERAGE_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "intpriv/core/prior.h"
#include "intpriv/core/record.h"
#include "intpriv/kernels/parallel.h"
#include "intpriv/mechanisms/config.h"
#include "json.hpp"

namespace intpriv {

struct CoverageReport {
  double tau = 0.0;
  double leakage = 1.0;  // always 1 - tau
  double std_err = 0.0;
  size_t n = 0;  // records averaged over
  std::optional<std::vector<double>> per_record;
  PriorProvenance prior = PriorProvenance::kKnownCdf;
  // Selective configurations only: share of draws that were emitted.
  std::optional<double> emission_rate;

  nlohmann::json ToJson() const;
  // Fixed-layout text table: tau, leakage, stderr, n, prior.
  std::string ToTable() const;
};

// L(S_z): prior mass of the chosen range, 0 for a disclosed value.
double IndividualCoverage(const PrivatizedRecord& rec, const Prior& prior);

// Average of L over records, with the sample standard error. Null records
// are skipped.
absl::StatusOr<CoverageReport> CoverageOfRecords(std::span<const WireRecord> records,
                                                 const Prior& prior,
                                                 bool keep_per_record = false);

// Plug-in estimate n^-1 sum [F(u)^2 + (1 - F(u))^2] for single-anchor data.
double CoverageEstimatorCase1(std::span<const double> anchors, const Prior& prior);

struct McOptions {
  size_t draws = 100000;
  uint64_t seed = 1;
  Execution exec = Execution::kParallel;
  bool keep_per_record = false;
  // Required for progressive configurations: the finite domain (lo, hi].
  std::optional<std::pair<double, double>> domain;
};

// Monte Carlo tau(M): Y is drawn from `prior`, privatized per `cfg` (with
// truthful answers for progressive flows) and L is measured under the same
// prior. Selective configurations average over emitted records and report
// the emission rate.
absl::StatusOr<CoverageReport> MechanismCoverageMc(const MechanismConfig& cfg,
                                                   const Prior& prior,
                                                   const McOptions& opts);

// Produces the records of several mechanisms applied to the same value. The
// mechanisms may depend on each other through the shared rng.
using RecordGenerator =
    std::function<absl::StatusOr<std::vector<PrivatizedRecord>>(double y, Rng& rng)>;

struct CompositionCheck {
  double lhs = 0.0;  // leakage of the ensemble
  double rhs = 0.0;  // sum of individual leakages
  double lhs_stderr = 0.0;
  double rhs_stderr = 0.0;
  double diff_stderr = 0.0;  // stderr of the per-draw rhs - lhs
  bool holds = false;        // lhs <= rhs + 3 * diff_stderr
};

// Both sides are measured on the same draws of Y and of the anchors.
absl::StatusOr<CompositionCheck> CompositionBoundCheck(const RecordGenerator& generate,
                                                       const Prior& prior,
                                                       const McOptions& opts);
absl::StatusOr<CompositionCheck> CompositionBoundCheck(std::span<const MechanismConfig> configs,
                                                       const Prior& prior,
                                                       const McOptions& opts);

}  // namespace intpriv

#endif  // INTPRIV_COVERAGE_COVERAGE_H_
