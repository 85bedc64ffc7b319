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

#include "intpriv/regression/interval_regression.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "intpriv/core/errors.h"

namespace intpriv {

namespace {

ExtReal ShiftDown(const ExtReal& x, double f) {
  return x.is_finite() ? ExtReal(x.value() - f) : x;
}

// Rounding slack for y = f + (x - f) landing back inside [lo, hi].
bool WithinClosure(double y, const Interval& iv) {
  const double slack = 8 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(y));
  if (iv.lo.is_finite() && y < iv.lo.value() - slack) return false;
  if (iv.hi.is_finite() && y > iv.hi.value() + slack) return false;
  return true;
}

// Runs body(i) -> Status for every record; returns the lowest-index error.
template <typename Body>
absl::Status ForEachRecord(size_t n, Execution exec, Body body) {
  std::vector<absl::Status> block_status(NumBlocks(n));
  ForEachBlock(n, exec, [&](size_t b, size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      absl::Status s = body(i);
      if (!s.ok()) {
        block_status[b] = std::move(s);
        return;
      }
    }
  });
  for (absl::Status& s : block_status) {
    if (!s.ok()) return s;
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<Eigen::VectorXd> ComputeSurrogates(const IntervalRegressionDataset& data,
                                                  const Eigen::VectorXd& fitted,
                                                  const NoiseModel& noise, Execution exec) {
  const size_t n = data.size();
  if (static_cast<size_t>(fitted.size()) != n) {
    return InvalidArgument("ShapeMismatch", "fitted values and records differ in count");
  }
  Eigen::VectorXd out(static_cast<Eigen::Index>(n));
  INTPRIV_RETURN_IF_ERROR(ForEachRecord(n, exec, [&](size_t i) -> absl::Status {
    const PrivatizedRecord& r = data.records()[i];
    const auto idx = static_cast<Eigen::Index>(i);
    if (r.exact()) {
      out(idx) = *r.exact();
      return absl::OkStatus();
    }
    const double f = fitted(idx);
    const Interval& iv = r.chosen_range().parts().front();
    const double y = f + noise.ConditionalMean(ShiftDown(iv.lo, f), ShiftDown(iv.hi, f));
    if (!std::isfinite(y)) {
      return FailedPrecondition("NonFinite", absl::StrCat("surrogate for record ", i,
                                                          " is not finite (fit ", f, ")"));
    }
    if (!WithinClosure(y, iv)) {
      return absl::InternalError(absl::StrCat("ContainmentViolation: surrogate ", y,
                                              " of record ", i, " is outside ",
                                              r.chosen_range().ToString()));
    }
    out(idx) = y;
    return absl::OkStatus();
  }));
  return out;
}

absl::StatusOr<double> MeanConditionalSquaredResidual(const IntervalRegressionDataset& data,
                                                      const Eigen::VectorXd& fitted,
                                                      const NoiseModel& noise, Execution exec) {
  const size_t n = data.size();
  std::vector<double> second(n);
  INTPRIV_RETURN_IF_ERROR(ForEachRecord(n, exec, [&](size_t i) -> absl::Status {
    const PrivatizedRecord& r = data.records()[i];
    const double f = fitted(static_cast<Eigen::Index>(i));
    if (r.exact()) {
      second[i] = (*r.exact() - f) * (*r.exact() - f);
    } else {
      const Interval& iv = r.chosen_range().parts().front();
      second[i] = noise.ConditionalSecondMoment(ShiftDown(iv.lo, f), ShiftDown(iv.hi, f));
    }
    if (!std::isfinite(second[i])) {
      return FailedPrecondition("NonFinite",
                                absl::StrCat("second moment for record ", i, " is not finite"));
    }
    return absl::OkStatus();
  }));
  double sum = 0.0;
  for (double s : second) sum += s;
  return sum / static_cast<double>(n);
}

absl::StatusOr<FitReport> FitIntervalRegression(const IntervalRegressionDataset& data,
                                                const BaseLearner& learner, NoiseModel noise,
                                                const RegressionOptions& opts) {
  if (!(opts.tol >= 0.0) || opts.max_iter < 1) {
    return InvalidArgument("InvalidArgument", "tol must be >= 0 and max_iter >= 1");
  }
  const Eigen::MatrixXd& x = data.features();
  FitReport report;
  Eigen::VectorXd fitted = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(data.size()));
  INTPRIV_ASSIGN_OR_RETURN(Eigen::VectorXd surrogates,
                           ComputeSurrogates(data, fitted, noise, opts.exec));
  for (int k = 1; k <= opts.max_iter; ++k) {
    INTPRIV_ASSIGN_OR_RETURN(report.model, learner.Fit(x, surrogates));
    INTPRIV_ASSIGN_OR_RETURN(fitted, report.model->Predict(x));
    if (!fitted.allFinite()) {
      return FailedPrecondition("NonFinite", absl::StrCat("fitted values at iteration ", k));
    }
    report.training_mse.push_back((surrogates - fitted).squaredNorm() /
                                  static_cast<double>(data.size()));
    if (opts.estimate_sigma) {
      INTPRIV_ASSIGN_OR_RETURN(double var,
                               MeanConditionalSquaredResidual(data, fitted, noise, opts.exec));
      var = std::max(var, 1e-12);
      noise = noise.WithVariance(var);
      report.sigma_hat = std::sqrt(var);
    }
    INTPRIV_ASSIGN_OR_RETURN(Eigen::VectorXd next,
                             ComputeSurrogates(data, fitted, noise, opts.exec));
    const double delta = (next - surrogates).cwiseAbs().maxCoeff();
    const double threshold = opts.tol * (1.0 + next.cwiseAbs().maxCoeff());
    report.surrogate_trace.push_back(delta);
    report.thresholds.push_back(threshold);
    report.iterations = k;
    if (opts.on_iteration) {
      opts.on_iteration(IterationSnapshot{k, surrogates, fitted, *report.model, noise});
    }
    surrogates = std::move(next);
    if (delta <= threshold) {
      report.converged = true;
      break;
    }
  }
  report.noise = noise;
  report.fitted = std::move(fitted);
  return report;
}

absl::StatusOr<Eigen::VectorXd> Predict(const FitReport& report, const Eigen::MatrixXd& x) {
  if (!report.model) return FailedPrecondition("NotFitted", "report has no model");
  return report.model->Predict(x);
}

nlohmann::json FitReport::ToJson() const {
  nlohmann::json j;
  j["model"] = model ? model->ToJson() : nlohmann::json(nullptr);
  j["iterations"] = iterations;
  j["converged"] = converged;
  j["surrogate_trace"] = surrogate_trace;
  j["training_mse"] = training_mse;
  j["sigma_hat"] = sigma_hat ? nlohmann::json(*sigma_hat) : nlohmann::json(nullptr);
  j["noise"] = {{"kind", noise.kind() == NoiseModel::Kind::kLogistic ? "logistic" : "gaussian"},
                {"scale", noise.scale()}};
  return j;
}

std::string FitReport::TraceCsv() const {
  std::string out = "iteration,max_surrogate_delta,training_mse\n";
  for (size_t k = 0; k < surrogate_trace.size(); ++k) {
    absl::StrAppendFormat(&out, "%d,%.17g,%.17g\n", k + 1, surrogate_trace[k], training_mse[k]);
  }
  return out;
}

}  // namespace intpriv
