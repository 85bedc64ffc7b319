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

#include "intpriv/experiments/progressive_sim.h"

#include <cmath>

#include "absl/strings/str_format.h"
#include "intpriv/core/errors.h"
#include "intpriv/core/rng.h"
#include "intpriv/experiments/json_fields.h"
#include "intpriv/experiments/regression_exp.h"
#include "intpriv/experiments/replicate.h"
#include "intpriv/mechanisms/config.h"
#include "intpriv/service/survey_service.h"

namespace intpriv {

using nlohmann::json;

namespace {

absl::StatusOr<Distribution> DefaultLaw(double lo, double hi) {
  std::vector<double> x, d;
  const int points = 601;
  for (int i = 0; i < points; ++i) {
    const double v = lo + (hi - lo) * i / (points - 1);
    x.push_back(v);
    d.push_back(v > 0 ? v * std::exp(-v / 25.0) : 0.0);
  }
  return Distribution::Grid(std::move(x), std::move(d));
}

json SurveyJson(const ProgressiveSimConfig& c) {
  json mech = {{"schema", 1},
               {"topology", "canonical"},
               {"ranges", 2},
               {"sampler", {{"law", {{"kind", "uniform"}, {"a", c.lo}, {"b", c.hi}}}, {"count", 1}}},
               {"acceptable", nullptr},
               {"selective", nullptr},
               {"progressive",
                {{"max_rounds", c.max_rounds}, {"tau", 0.0}, {"law", "uniform"}, {"prior", nullptr}}},
               {"transform", nullptr}};
  return {{"schema", 1},
          {"title", "simulated progressive survey"},
          {"questions",
           {{{"prompt", "value"},
             {"domain", {c.lo, c.hi}},
             {"mechanism", mech},
             {"allow_opt_out", true}}}}};
}

absl::StatusOr<ProgressiveSimRow> OneSeed(const ProgressiveSimConfig& cfg, const Distribution& law,
                                          uint64_t seed) {
  SurveyService::Options opts;
  opts.seed = seed;
  opts.clock = [] { return std::string("1970-01-01T00:00:00Z"); };
  opts.exec = Execution::kSerial;
  INTPRIV_ASSIGN_OR_RETURN(std::unique_ptr<SurveyService> svc,
                           SurveyService::Create(nullptr, opts));
  INTPRIV_ASSIGN_OR_RETURN(std::string survey, svc->CreateSurvey(SurveyJson(cfg)));
  Rng rng(DeriveSeed(seed, {1}));
  for (int i = 0; i < cfg.n; ++i) {
    const double y = law.Sample(rng);
    // Rounds this respondent is willing to answer.
    double u = rng.Uniform01();
    int rounds = cfg.max_rounds;
    for (int k = 0; k < cfg.max_rounds; ++k) {
      if (u < cfg.willingness[static_cast<size_t>(k)]) {
        rounds = k + 1;
        break;
      }
      u -= cfg.willingness[static_cast<size_t>(k)];
    }
    INTPRIV_ASSIGN_OR_RETURN(std::string sid, svc->StartSession(survey));
    INTPRIV_ASSIGN_OR_RETURN(QuestionPayload q, svc->NextQuestion(sid, 0));
    for (int round = 1;; ++round) {
      Answer a;
      a.issue = q.issue;
      if (round > rounds) {
        a.opt_out = true;
      } else {
        for (size_t c = 0; c < q.choices.size(); ++c) {
          if (q.choices[c].Contains(y)) a.choice = c + 1;
        }
        if (!a.choice) return absl::InternalError("value outside every choice");
      }
      INTPRIV_ASSIGN_OR_RETURN(AnswerResult r, svc->SubmitAnswer(sid, 0, a));
      if (r.outcome != AnswerOutcome::kNextRound) break;
      q = *r.next;
    }
  }
  std::vector<double> points(static_cast<size_t>(cfg.n));
  for (double& v : points) v = law.Sample(rng);
  INTPRIV_ASSIGN_OR_RETURN(StepCdf reference, StepCdf::Empirical(points));
  ProgressiveSimRow row;
  row.seed = seed;
  EstimateOptions eo;
  eo.reference = reference;
  eo.rounds = RoundSelection::kFirst;
  INTPRIV_ASSIGN_OR_RETURN(EstimateResult first, svc->Estimate(survey, 0, eo));
  eo.rounds = RoundSelection::kAll;
  INTPRIV_ASSIGN_OR_RETURN(EstimateResult all, svc->Estimate(survey, 0, eo));
  row.ed_round1 = *first.energy_distance;
  row.ed_roundx = *all.energy_distance;
  row.coverage_round1 = first.coverage.tau;
  row.coverage_roundx = all.coverage.tau;
  return row;
}

}  // namespace

absl::StatusOr<ProgressiveSimConfig> ProgressiveSimConfig::FromJson(const json& j) {
  ProgressiveSimConfig c;
  INTPRIV_RETURN_IF_ERROR(CheckKeys(
      j, {"name", "n", "seeds", "seed", "max_rounds", "domain", "law", "willingness"}));
  INTPRIV_RETURN_IF_ERROR(ReadField(j, "n", c.n));
  INTPRIV_RETURN_IF_ERROR(ReadField(j, "seeds", c.seeds));
  INTPRIV_RETURN_IF_ERROR(ReadField(j, "seed", c.seed));
  INTPRIV_RETURN_IF_ERROR(ReadField(j, "max_rounds", c.max_rounds));
  if (j.contains("domain")) {
    std::vector<double> d;
    INTPRIV_RETURN_IF_ERROR(ReadField(j, "domain", d));
    if (d.size() != 2) return ConfigError("domain", "must be [lo, hi]");
    c.lo = d[0];
    c.hi = d[1];
  }
  if (j.contains("law") && !j["law"].is_null()) {
    auto law = DistributionFromJson(j["law"]);
    if (!law.ok()) return WithPrefix(law.status(), "law: ");
    c.law = *law;
  }
  INTPRIV_RETURN_IF_ERROR(ReadField(j, "willingness", c.willingness));
  if (c.n < 1) return ConfigError("n", "must be >= 1");
  if (c.seeds < 1) return ConfigError("seeds", "must be >= 1");
  if (c.max_rounds < 1) return ConfigError("max_rounds", "must be >= 1");
  if (!(c.lo < c.hi)) return ConfigError("domain", "need lo < hi");
  if (c.willingness.empty()) c.willingness.assign(c.max_rounds, 1.0 / c.max_rounds);
  if (c.willingness.size() != static_cast<size_t>(c.max_rounds)) {
    return ConfigError("willingness", "need one probability per round");
  }
  double total = 0.0;
  for (double p : c.willingness) {
    if (!(p >= 0.0)) return ConfigError("willingness", "probabilities must be >= 0");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) return ConfigError("willingness", "must sum to 1");
  return c;
}

json ProgressiveSimConfig::ToJson() const {
  return {{"name", "progressive"},
          {"n", n},
          {"seeds", seeds},
          {"seed", seed},
          {"max_rounds", max_rounds},
          {"domain", {lo, hi}},
          {"law", law ? DistributionToJson(*law) : json(nullptr)},
          {"willingness", willingness}};
}

absl::StatusOr<ProgressiveSimResult> RunProgressiveSimulation(const ProgressiveSimConfig& in) {
  ProgressiveSimConfig cfg = in;
  if (cfg.willingness.empty()) cfg.willingness.assign(cfg.max_rounds, 1.0 / cfg.max_rounds);
  if (!cfg.law) {
    INTPRIV_ASSIGN_OR_RETURN(cfg.law, DefaultLaw(cfg.lo, cfg.hi));
  }
  const Distribution& law = *cfg.law;
  ProgressiveSimResult out;
  INTPRIV_ASSIGN_OR_RETURN(out.rows, Replicate<ProgressiveSimRow>(
                                         static_cast<size_t>(cfg.seeds), cfg.exec,
                                         [&](size_t s) {
                                           return OneSeed(cfg, law, DeriveSeed(cfg.seed, {s}));
                                         }));
  return out;
}

double ProgressiveSimResult::MedianRound1() const {
  std::vector<double> v;
  for (const auto& r : rows) v.push_back(r.ed_round1);
  return Median(v);
}

double ProgressiveSimResult::MedianRoundX() const {
  std::vector<double> v;
  for (const auto& r : rows) v.push_back(r.ed_roundx);
  return Median(v);
}

std::string ProgressiveSimResult::ToCsv() const {
  std::string out = "seed,ed_round1,ed_roundx,coverage_round1,coverage_roundx\n";
  for (const auto& r : rows) {
    absl::StrAppendFormat(&out, "%d,%.17g,%.17g,%.17g,%.17g\n", r.seed, r.ed_round1, r.ed_roundx,
                          r.coverage_round1, r.coverage_roundx);
  }
  return out;
}

json ProgressiveSimResult::ToJson() const {
  json rs = json::array();
  for (const auto& r : rows) {
    rs.push_back({{"seed", r.seed},
                  {"ed_round1", r.ed_round1},
                  {"ed_roundx", r.ed_roundx},
                  {"coverage_round1", r.coverage_round1},
                  {"coverage_roundx", r.coverage_roundx}});
  }
  return {{"rows", rs}, {"median_ed_round1", MedianRound1()}, {"median_ed_roundx", MedianRoundX()}};
}

}  // namespace intpriv
