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

#include "intpriv/experiments/regression_exp.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_format.h"
#include "intpriv/core/errors.h"
#include "intpriv/core/noise_model.h"
#include "intpriv/core/prior.h"
#include "intpriv/core/rng.h"
#include "intpriv/coverage/coverage.h"
#include "intpriv/experiments/json_fields.h"
#include "intpriv/experiments/replicate.h"
#include "intpriv/mechanisms/mechanisms.h"
#include "intpriv/regression/interval_regression.h"

namespace intpriv {

using nlohmann::json;

namespace {

// Stream tags under a replication seed.
constexpr uint64_t kTrainStream = 0;
constexpr uint64_t kTestStream = 1;
constexpr uint64_t kPriorStream = 2;
constexpr int kPriorSample = 20000;

bool Quadratic(const RegressionExpConfig& c) { return c.template_name == "quadratic"; }

double TrueF(const RegressionExpConfig& c, double x) {
  return Quadratic(c) ? x * x - 2.0 * x + 3.0 : c.beta * x;
}

std::vector<double> Features(const RegressionExpConfig& c, double x) {
  if (Quadratic(c)) return {x, x * x};
  return {x};
}

std::string LearnerSpec(const RegressionExpConfig& c) {
  if (!c.learner.empty()) return c.learner;
  return Quadratic(c) ? "knn:10" : "ols";
}

absl::StatusOr<NoiseModel> NoiseFor(const RegressionExpConfig& c) {
  const auto kind =
      c.noise_model == "gaussian" ? NoiseModel::Kind::kGaussian : NoiseModel::Kind::kLogistic;
  if (c.noise_model_scale) return NoiseModel::Make(kind, *c.noise_model_scale);
  INTPRIV_ASSIGN_OR_RETURN(NoiseModel unit, NoiseModel::Make(kind, 1.0));
  return unit.WithVariance(c.noise_sd * c.noise_sd);
}

RegressionOptions OptionsFor(const RegressionExpConfig& c) {
  RegressionOptions o;
  o.tol = c.run_all_iterations ? 0.0 : c.tol;
  o.max_iter = c.max_iter;
  o.estimate_sigma = c.estimate_sigma;
  o.exec = Execution::kSerial;
  return o;
}

}  // namespace

double Median(std::vector<double> v) {
  if (v.empty()) return NAN;
  const size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

absl::StatusOr<RegressionExpConfig> RegressionExpConfig::FromJson(const json& j) {
  RegressionExpConfig c;
  INTPRIV_RETURN_IF_ERROR(CheckKeys(
      j, {"name", "template", "n", "beta", "noise_sd", "anchor_scale", "learner", "noise_model",
          "noise_model_scale", "estimate_sigma", "max_iter", "tol", "run_all_iterations",
          "test_n", "reps", "seed"}));
  INTPRIV_RETURN_IF_ERROR(ReadField(j, "template", c.template_name));
  INTPRIV_RETURN_IF_ERROR(ReadField(j, "n", c.n));
  INTPRIV_RETURN_IF_ERROR(ReadField(j, "beta", c.beta));
  INTPRIV_RETURN_IF_ERROR(ReadField(j, "noise_sd", c.noise_sd));
  INTPRIV_RETURN_IF_ERROR(ReadField(j, "anchor_scale", c.anchor_scale));
  INTPRIV_RETURN_IF_ERROR(ReadField(j, "learner", c.learner));
  INTPRIV_RETURN_IF_ERROR(ReadField(j, "noise_model", c.noise_model));
  if (j.contains("noise_model_scale") && !j["noise_model_scale"].is_null()) {
    double s = 0.0;
    INTPRIV_RETURN_IF_ERROR(ReadField(j, "noise_model_scale", s));
    c.noise_model_scale = s;
  }
  INTPRIV_RETURN_IF_ERROR(ReadField(j, "estimate_sigma", c.estimate_sigma));
  INTPRIV_RETURN_IF_ERROR(ReadField(j, "max_iter", c.max_iter));
  INTPRIV_RETURN_IF_ERROR(ReadField(j, "tol", c.tol));
  INTPRIV_RETURN_IF_ERROR(ReadField(j, "run_all_iterations", c.run_all_iterations));
  INTPRIV_RETURN_IF_ERROR(ReadField(j, "test_n", c.test_n));
  INTPRIV_RETURN_IF_ERROR(ReadField(j, "reps", c.reps));
  INTPRIV_RETURN_IF_ERROR(ReadField(j, "seed", c.seed));
  if (c.template_name != "linear" && c.template_name != "quadratic") {
    return ConfigError("template", "must be linear or quadratic");
  }
  if (c.n < 2) return ConfigError("n", "must be >= 2");
  if (!(c.noise_sd > 0.0)) return ConfigError("noise_sd", "must be positive");
  if (!(c.anchor_scale > 0.0)) return ConfigError("anchor_scale", "must be positive");
  if (c.noise_model != "logistic" && c.noise_model != "gaussian") {
    return ConfigError("noise_model", "must be logistic or gaussian");
  }
  if (c.noise_model_scale && !(*c.noise_model_scale > 0.0)) {
    return ConfigError("noise_model_scale", "must be positive");
  }
  if (c.max_iter < 1) return ConfigError("max_iter", "must be >= 1");
  if (!(c.tol >= 0.0)) return ConfigError("tol", "must be >= 0");
  if (c.test_n < 1) return ConfigError("test_n", "must be >= 1");
  if (c.reps < 1) return ConfigError("reps", "must be >= 1");
  if (auto l = MakeLearner(LearnerSpec(c)); !l.ok()) return ConfigError("learner", l.status().message());
  return c;
}

json RegressionExpConfig::ToJson() const {
  return {{"name", "regression"},
          {"template", template_name},
          {"n", n},
          {"beta", beta},
          {"noise_sd", noise_sd},
          {"anchor_scale", anchor_scale},
          {"learner", LearnerSpec(*this)},
          {"noise_model", noise_model},
          {"noise_model_scale", noise_model_scale ? json(*noise_model_scale) : json(nullptr)},
          {"estimate_sigma", estimate_sigma},
          {"max_iter", max_iter},
          {"tol", tol},
          {"run_all_iterations", run_all_iterations},
          {"test_n", test_n},
          {"reps", reps},
          {"seed", seed}};
}

absl::StatusOr<RegressionRep> RunRegressionReplication(const RegressionExpConfig& cfg,
                                                       uint64_t seed) {
  INTPRIV_ASSIGN_OR_RETURN(Distribution anchor_law, Distribution::Logistic(0, cfg.anchor_scale));
  const int m = Quadratic(cfg) ? 2 : 1;

  Rng rng(DeriveSeed(seed, {kTrainStream}));
  std::vector<PrivatizedRecord> records;
  records.reserve(static_cast<size_t>(cfg.n));
  for (int i = 0; i < cfg.n; ++i) {
    const double x = rng.Normal(0, 1);
    const double y = TrueF(cfg, x) + rng.Normal(0, cfg.noise_sd);
    std::vector<double> anchors;
    for (int k = 0; k < m; ++k) anchors.push_back(anchor_law.Sample(rng));
    std::sort(anchors.begin(), anchors.end());
    INTPRIV_ASSIGN_OR_RETURN(PrivatizedRecord r,
                             PrivatizeWithAnchors(y, anchors, Topology::kCanonical));
    records.push_back(r.WithFeatures(Features(cfg, x)));
  }

  Rng test_rng(DeriveSeed(seed, {kTestStream}));
  Eigen::MatrixXd test_x(cfg.test_n, Quadratic(cfg) ? 2 : 1);
  Eigen::VectorXd test_f(cfg.test_n);
  for (int i = 0; i < cfg.test_n; ++i) {
    const double x = test_rng.Normal(0, 1);
    const std::vector<double> f = Features(cfg, x);
    for (size_t k = 0; k < f.size(); ++k) test_x(i, static_cast<Eigen::Index>(k)) = f[k];
    test_f(i) = TrueF(cfg, x);
  }

  // Coverage under the law of Y, approximated by a large independent sample.
  Rng prior_rng(DeriveSeed(seed, {kPriorStream}));
  std::vector<double> ys(kPriorSample);
  for (double& y : ys) y = TrueF(cfg, prior_rng.Normal(0, 1)) + prior_rng.Normal(0, cfg.noise_sd);
  INTPRIV_ASSIGN_OR_RETURN(StepCdf empirical, StepCdf::Empirical(ys));
  const Prior prior(empirical, PriorProvenance::kEmpirical);
  RegressionRep out;
  {
    double total = 0.0;
    for (const PrivatizedRecord& r : records) total += IndividualCoverage(r, prior);
    out.coverage = total / static_cast<double>(records.size());
  }

  INTPRIV_ASSIGN_OR_RETURN(IntervalRegressionDataset data,
                           IntervalRegressionDataset::Make(std::move(records)));
  INTPRIV_ASSIGN_OR_RETURN(std::unique_ptr<BaseLearner> learner, MakeLearner(LearnerSpec(cfg)));
  INTPRIV_ASSIGN_OR_RETURN(NoiseModel noise, NoiseFor(cfg));
  RegressionOptions opts = OptionsFor(cfg);
  std::vector<double> surrogate_norm;
  absl::Status predict_status;
  opts.on_iteration = [&](const IterationSnapshot& s) {
    surrogate_norm.push_back(s.surrogates.cwiseAbs().maxCoeff());
    for (size_t i = 0; i < data.size(); ++i) {
      const Range& r = data.records()[i].chosen_range();
      const double v = s.surrogates(static_cast<Eigen::Index>(i));
      const Interval& part = r.parts().front();
      if ((part.lo.is_finite() && v < part.lo.value()) ||
          (part.hi.is_finite() && v > part.hi.value())) {
        out.contained = false;
      }
    }
    auto pred = s.model.Predict(test_x);
    if (!pred.ok()) {
      predict_status = pred.status();
      return;
    }
    out.test_mse.push_back((*pred - test_f).squaredNorm() / cfg.test_n);
  };
  INTPRIV_ASSIGN_OR_RETURN(FitReport report, FitIntervalRegression(data, *learner, noise, opts));
  INTPRIV_RETURN_IF_ERROR(predict_status);
  out.iterations = report.iterations;
  out.training_mse = report.training_mse;
  out.surrogate_delta = report.surrogate_trace;
  // The stop rule compares iteration k's change against the size of the
  // surrogates it produced, which round k + 1 was fit on.
  for (size_t k = 0; k + 1 < surrogate_norm.size() && k < report.surrogate_trace.size(); ++k) {
    if (report.surrogate_trace[k] <= cfg.tol * (1.0 + surrogate_norm[k + 1])) {
      out.converged_at = static_cast<int>(k) + 1;
      break;
    }
  }
  if (!out.converged_at && !cfg.run_all_iterations && report.converged) {
    out.converged_at = report.iterations;
  }
  if (!Quadratic(cfg)) {
    out.beta_hat = static_cast<const LinearModel&>(*report.model).coef()(0);
  }
  return out;
}

absl::StatusOr<RegressionExpResult> RunRegressionExperiment(const RegressionExpConfig& cfg) {
  RegressionExpResult result;
  INTPRIV_ASSIGN_OR_RETURN(result.reps, Replicate<RegressionRep>(
                                            static_cast<size_t>(cfg.reps), cfg.exec,
                                            [&](size_t rep) {
                                              return RunRegressionReplication(
                                                  cfg, DeriveSeed(cfg.seed, {rep}));
                                            }));
  return result;
}

std::string RegressionExpResult::TraceCsv() const {
  std::string out = "rep,iteration,training_mse,test_mse,max_surrogate_delta\n";
  for (size_t r = 0; r < reps.size(); ++r) {
    const RegressionRep& rep = reps[r];
    for (size_t k = 0; k < rep.test_mse.size(); ++k) {
      absl::StrAppendFormat(&out, "%d,%d,%.17g,%.17g,%.17g\n", r, k + 1, rep.training_mse[k],
                            rep.test_mse[k], rep.surrogate_delta[k]);
    }
  }
  return out;
}

std::string RegressionExpResult::SummaryCsv() const {
  std::string out = "rep,iterations,converged_at,beta_hat,coverage,final_test_mse\n";
  for (size_t r = 0; r < reps.size(); ++r) {
    const RegressionRep& rep = reps[r];
    absl::StrAppendFormat(&out, "%d,%d,%s,%s,%.17g,%.17g\n", r, rep.iterations,
                          rep.converged_at ? absl::StrCat(*rep.converged_at) : "",
                          rep.beta_hat ? absl::StrFormat("%.17g", *rep.beta_hat) : "",
                          rep.coverage, rep.test_mse.empty() ? NAN : rep.test_mse.back());
  }
  return out;
}

std::vector<double> RegressionExpResult::MedianTestMse() const {
  size_t len = 0;
  for (const RegressionRep& r : reps) len = std::max(len, r.test_mse.size());
  std::vector<double> out;
  for (size_t k = 0; k < len; ++k) {
    std::vector<double> col;
    for (const RegressionRep& r : reps) {
      if (k < r.test_mse.size()) col.push_back(r.test_mse[k]);
    }
    out.push_back(Median(col));
  }
  return out;
}

json RegressionExpResult::ToJson() const {
  json rs = json::array();
  for (const RegressionRep& r : reps) {
    rs.push_back({{"iterations", r.iterations},
                  {"converged_at", r.converged_at ? json(*r.converged_at) : json(nullptr)},
                  {"beta_hat", r.beta_hat ? json(*r.beta_hat) : json(nullptr)},
                  {"coverage", r.coverage},
                  {"contained", r.contained},
                  {"test_mse", r.test_mse}});
  }
  return {{"reps", rs}, {"median_test_mse", MedianTestMse()}};
}

absl::StatusOr<RecordFit> FitRecords(const std::vector<WireRecord>& records,
                                     const RegressionExpConfig& cfg) {
  INTPRIV_ASSIGN_OR_RETURN(IntervalRegressionDataset data,
                           IntervalRegressionDataset::Make(NonNull(records)));
  INTPRIV_ASSIGN_OR_RETURN(std::unique_ptr<BaseLearner> learner,
                           MakeLearner(cfg.learner.empty() ? "ols" : cfg.learner));
  INTPRIV_ASSIGN_OR_RETURN(NoiseModel noise, NoiseFor(cfg));
  RegressionOptions opts = OptionsFor(cfg);
  opts.tol = cfg.tol;
  INTPRIV_ASSIGN_OR_RETURN(FitReport report, FitIntervalRegression(data, *learner, noise, opts));
  RecordFit out;
  out.report = report.ToJson();
  out.report["records"] = data.size();
  out.report["shape"] = ShapeName(data.shape());
  out.trace_csv = report.TraceCsv();
  return out;
}

}  // namespace intpriv
