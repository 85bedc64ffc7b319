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

#include "intpriv/experiments/tradeoff.h"

#include "absl/strings/str_format.h"
#include "intpriv/core/errors.h"
#include "intpriv/core/rng.h"
#include "intpriv/experiments/json_fields.h"
#include "intpriv/kernels/parallel.h"

namespace intpriv {

using nlohmann::json;

absl::StatusOr<TradeoffConfig> TradeoffConfig::FromJson(const json& j) {
  TradeoffConfig c;
  INTPRIV_RETURN_IF_ERROR(CheckKeys(j, {"name", "scales", "reps", "seed", "regression"}));
  INTPRIV_RETURN_IF_ERROR(ReadField(j, "scales", c.scales));
  INTPRIV_RETURN_IF_ERROR(ReadField(j, "reps", c.reps));
  INTPRIV_RETURN_IF_ERROR(ReadField(j, "seed", c.base.seed));
  if (j.contains("regression")) {
    json base = c.base.ToJson();
    base.merge_patch(j["regression"]);
    auto parsed = RegressionExpConfig::FromJson(base);
    if (!parsed.ok()) return WithPrefix(parsed.status(), "regression.");
    const uint64_t seed = c.base.seed;
    c.base = *parsed;
    if (!j["regression"].contains("seed")) c.base.seed = seed;
  }
  if (c.scales.size() < 2) return ConfigError("scales", "need at least 2 scales");
  for (double s : c.scales) {
    if (!(s > 0.0)) return ConfigError("scales", "must be positive");
  }
  if (c.base.template_name != "linear") return ConfigError("regression.template", "must be linear");
  if (c.reps < 1) return ConfigError("reps", "must be >= 1");
  return c;
}

json TradeoffConfig::ToJson() const {
  json b = base.ToJson();
  b.erase("anchor_scale");
  b.erase("reps");
  return {{"name", "tradeoff"}, {"scales", scales}, {"reps", reps}, {"seed", base.seed},
          {"regression", b}};
}

absl::StatusOr<TradeoffResult> RunTradeoffSweep(const TradeoffConfig& cfg) {
  TradeoffResult out;
  for (size_t s = 0; s < cfg.scales.size(); ++s) {
    RegressionExpConfig rc = cfg.base;
    rc.anchor_scale = cfg.scales[s];
    rc.reps = cfg.reps;
    // Every scale sees the same training and test samples.
    INTPRIV_ASSIGN_OR_RETURN(RegressionExpResult r, RunRegressionExperiment(rc));
    RunningMoments cov, mse;
    std::vector<double> finals;
    for (const RegressionRep& rep : r.reps) {
      cov.Add(rep.coverage);
      mse.Add(rep.test_mse.back());
      finals.push_back(rep.test_mse.back());
    }
    out.points.push_back(
        {cfg.scales[s], cov.mean, cov.StdErr(), mse.mean, mse.StdErr(), Median(finals)});
  }
  return out;
}

std::string TradeoffResult::ToCsv() const {
  std::string out = "scale,coverage,coverage_se,mse,mse_se,median_mse\n";
  for (const TradeoffPoint& p : points) {
    absl::StrAppendFormat(&out, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", p.scale, p.coverage,
                          p.coverage_se, p.mse, p.mse_se, p.median_mse);
  }
  return out;
}

json TradeoffResult::ToJson() const {
  json pts = json::array();
  for (const TradeoffPoint& p : points) {
    pts.push_back({{"scale", p.scale},
                   {"coverage", p.coverage},
                   {"coverage_se", p.coverage_se},
                   {"mse", p.mse},
                   {"mse_se", p.mse_se},
                   {"median_mse", p.median_mse}});
  }
  return {{"points", pts}};
}

}  // namespace intpriv
