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

#include "intpriv/coverage/coverage.h"

#include <array>
#include <cmath>
#include <limits>

#include "absl/strings/str_format.h"
#include "intpriv/core/errors.h"
#include "intpriv/mechanisms/mechanisms.h"
#include "intpriv/mechanisms/progressive.h"

namespace intpriv {

using nlohmann::json;

namespace {

CoverageReport FromMoments(const RunningMoments& m, PriorProvenance prior) {
  CoverageReport r;
  r.tau = std::clamp(m.mean, 0.0, 1.0);
  r.leakage = 1.0 - r.tau;
  r.std_err = m.StdErr();
  r.n = static_cast<size_t>(m.count);
  r.prior = prior;
  return r;
}

// One privatization of y under cfg, or nullopt when nothing is emitted.
absl::StatusOr<std::optional<PrivatizedRecord>> Draw(double y, const MechanismConfig& cfg,
                                                     const McOptions& opts, Rng& rng) {
  if (cfg.progressive()) {
    INTPRIV_ASSIGN_OR_RETURN(
        ProgressiveSession s,
        ProgressiveSession::Start(opts.domain->first, opts.domain->second, cfg));
    INTPRIV_ASSIGN_OR_RETURN(ProgressiveQuestion q, s.Begin(rng));
    while (s.status() == ProgressiveStatus::kActive) {
      INTPRIV_ASSIGN_OR_RETURN(auto step, s.Step(TruthfulAnswer(*s.pending(), y), rng));
      (void)step;
    }
    (void)q;
    INTPRIV_ASSIGN_OR_RETURN(WireRecord w, s.Collected());
    if (auto* p = std::get_if<PrivatizedRecord>(&w)) return std::optional(std::move(*p));
    return std::optional<PrivatizedRecord>();
  }
  if (cfg.selective()) {
    INTPRIV_ASSIGN_OR_RETURN(SelectiveOutcome out, PrivatizeSelective(y, cfg, rng));
    if (!out.emitted) return std::optional<PrivatizedRecord>();
    return std::optional(std::get<PrivatizedRecord>(std::move(out.record)));
  }
  INTPRIV_ASSIGN_OR_RETURN(PrivatizedRecord rec, Privatize(y, cfg, rng));
  return std::optional(std::move(rec));
}

}  // namespace

json CoverageReport::ToJson() const {
  json j;
  j["tau"] = tau;
  j["leakage"] = leakage;
  j["stderr"] = std_err;
  j["n"] = n;
  j["prior"] = std::string(ProvenanceName(prior));
  j["per_record"] = per_record ? json(*per_record) : json(nullptr);
  j["emission_rate"] = emission_rate ? json(*emission_rate) : json(nullptr);
  return j;
}

std::string CoverageReport::ToTable() const {
  std::string out = absl::StrFormat("%-10s %-10s %-10s %-10s %s\n", "tau", "leakage", "stderr",
                                    "n", "prior");
  absl::StrAppendFormat(&out, "%-10.6f %-10.6f %-10.6f %-10d %s\n", tau, leakage, std_err, n,
                        ProvenanceName(prior));
  if (emission_rate) absl::StrAppendFormat(&out, "emission rate %.6f\n", *emission_rate);
  return out;
}

double IndividualCoverage(const PrivatizedRecord& rec, const Prior& prior) {
  if (rec.exact()) return 0.0;
  return prior.Mass(rec.chosen_range());
}

absl::StatusOr<CoverageReport> CoverageOfRecords(std::span<const WireRecord> records,
                                                 const Prior& prior, bool keep_per_record) {
  RunningMoments m;
  std::vector<double> per;
  for (const auto& w : records) {
    const auto* rec = std::get_if<PrivatizedRecord>(&w);
    if (rec == nullptr) continue;
    const double l = IndividualCoverage(*rec, prior);
    m.Add(l);
    if (keep_per_record) per.push_back(l);
  }
  if (m.count == 0.0) return InvalidArgument("NoData", "no non-null records");
  CoverageReport r = FromMoments(m, prior.provenance());
  if (keep_per_record) r.per_record = std::move(per);
  return r;
}

double CoverageEstimatorCase1(std::span<const double> anchors, const Prior& prior) {
  if (anchors.empty()) return std::numeric_limits<double>::quiet_NaN();
  double total = 0.0;
  for (double u : anchors) {
    const double f = prior.Cdf(u);
    total += f * f + (1.0 - f) * (1.0 - f);
  }
  return total / static_cast<double>(anchors.size());
}

absl::StatusOr<CoverageReport> MechanismCoverageMc(const MechanismConfig& cfg,
                                                   const Prior& prior,
                                                   const McOptions& opts) {
  if (opts.draws < 1) return InvalidArgument("ValidationError", "draws: must be >= 1");
  if (!prior.CanSample()) {
    return InvalidArgument("ValidationError", "prior: cannot be sampled");
  }
  if (cfg.progressive() && !opts.domain) {
    return InvalidArgument("ValidationError", "domain: required for progressive flows");
  }
  constexpr double kNotEmitted = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> per(opts.keep_per_record ? opts.draws : 0);
  auto acc = BlockedMonteCarlo<2>(
      opts.draws, opts.seed,
      [&](Rng& rng, size_t i, std::array<RunningMoments, 2>& m) -> absl::Status {
        const double y = prior.Sample(rng);
        INTPRIV_ASSIGN_OR_RETURN(auto rec, Draw(y, cfg, opts, rng));
        m[1].Add(rec ? 1.0 : 0.0);
        const double l = rec ? IndividualCoverage(*rec, prior) : kNotEmitted;
        if (rec) m[0].Add(l);
        if (opts.keep_per_record) per[i] = l;
        return absl::OkStatus();
      },
      opts.exec);
  if (!acc.ok()) return acc.status();
  CoverageReport r = FromMoments((*acc)[0], prior.provenance());
  if (opts.keep_per_record) {
    std::vector<double> kept;
    for (double l : per) {
      if (!std::isnan(l)) kept.push_back(l);
    }
    r.per_record = std::move(kept);
  }
  if (cfg.selective() || cfg.progressive()) r.emission_rate = (*acc)[1].mean;
  if (r.n == 0) return FailedPrecondition("NoData", "no record was emitted");
  return r;
}

absl::StatusOr<CompositionCheck> CompositionBoundCheck(const RecordGenerator& generate,
                                                       const Prior& prior,
                                                       const McOptions& opts) {
  if (opts.draws < 1) return InvalidArgument("ValidationError", "draws: must be >= 1");
  auto acc = BlockedMonteCarlo<3>(
      opts.draws, opts.seed,
      [&](Rng& rng, size_t, std::array<RunningMoments, 3>& m) -> absl::Status {
        const double y = prior.Sample(rng);
        INTPRIV_ASSIGN_OR_RETURN(std::vector<PrivatizedRecord> recs, generate(y, rng));
        if (recs.empty()) return InvalidArgument("ValidationError", "no records generated");
        double rhs = 0.0;
        for (const auto& r : recs) rhs += 1.0 - IndividualCoverage(r, prior);
        INTPRIV_ASSIGN_OR_RETURN(PrivatizedRecord ens, Ensemble(recs));
        const double lhs = 1.0 - IndividualCoverage(ens, prior);
        m[0].Add(lhs);
        m[1].Add(rhs);
        m[2].Add(rhs - lhs);
        return absl::OkStatus();
      },
      opts.exec);
  if (!acc.ok()) return acc.status();
  CompositionCheck c;
  c.lhs = (*acc)[0].mean;
  c.rhs = (*acc)[1].mean;
  c.lhs_stderr = (*acc)[0].StdErr();
  c.rhs_stderr = (*acc)[1].StdErr();
  c.diff_stderr = (*acc)[2].StdErr();
  c.holds = c.lhs <= c.rhs + 3.0 * c.diff_stderr;
  return c;
}

absl::StatusOr<CompositionCheck> CompositionBoundCheck(std::span<const MechanismConfig> configs,
                                                       const Prior& prior,
                                                       const McOptions& opts) {
  for (const auto& cfg : configs) {
    if (cfg.selective() || cfg.progressive()) {
      return InvalidArgument("Unsupported",
                             "composition check takes plain canonical or ring mechanisms");
    }
  }
  std::vector<MechanismConfig> copies(configs.begin(), configs.end());
  return CompositionBoundCheck(
      [copies](double y, Rng& rng) -> absl::StatusOr<std::vector<PrivatizedRecord>> {
        std::vector<PrivatizedRecord> out;
        for (const auto& cfg : copies) {
          INTPRIV_ASSIGN_OR_RETURN(PrivatizedRecord r, Privatize(y, cfg, rng));
          out.push_back(std::move(r));
        }
        return out;
      },
      prior, opts);
}

}  // namespace intpriv
