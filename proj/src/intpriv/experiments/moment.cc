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

#include "intpriv/experiments/moment.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "intpriv/core/errors.h"
#include "intpriv/core/prior.h"
#include "intpriv/core/rng.h"
#include "intpriv/coverage/coverage.h"
#include "intpriv/estimation/functionals.h"
#include "intpriv/estimation/npmle.h"
#include "intpriv/experiments/json_fields.h"
#include "intpriv/experiments/replicate.h"
#include "intpriv/mechanisms/mechanisms.h"

namespace intpriv {

using nlohmann::json;

absl::StatusOr<MomentConfig> MomentConfig::FromJson(const json& j) {
  MomentConfig c;
  INTPRIV_RETURN_IF_ERROR(CheckKeys(j, {"name", "ns", "outlier_rates", "reps", "seed", "mean",
                                        "sd", "outlier", "t_factor", "second_moment"}));
  INTPRIV_RETURN_IF_ERROR(ReadField(j, "ns", c.ns));
  INTPRIV_RETURN_IF_ERROR(ReadField(j, "outlier_rates", c.outlier_rates));
  INTPRIV_RETURN_IF_ERROR(ReadField(j, "reps", c.reps));
  INTPRIV_RETURN_IF_ERROR(ReadField(j, "seed", c.seed));
  INTPRIV_RETURN_IF_ERROR(ReadField(j, "mean", c.mean));
  INTPRIV_RETURN_IF_ERROR(ReadField(j, "sd", c.sd));
  INTPRIV_RETURN_IF_ERROR(ReadField(j, "outlier", c.outlier));
  INTPRIV_RETURN_IF_ERROR(ReadField(j, "t_factor", c.t_factor));
  INTPRIV_RETURN_IF_ERROR(ReadField(j, "second_moment", c.second_moment));
  if (c.ns.empty()) return ConfigError("ns", "at least one sample size");
  for (int n : c.ns) {
    if (n < 2) return ConfigError("ns", "sample sizes must be >= 2");
  }
  for (double r : c.outlier_rates) {
    if (!(r >= 0.0 && r < 1.0)) return ConfigError("outlier_rates", "must be in [0, 1)");
  }
  if (c.reps < 1) return ConfigError("reps", "must be >= 1");
  if (!(c.sd > 0.0)) return ConfigError("sd", "must be positive");
  if (!(c.t_factor > 0.0)) return ConfigError("t_factor", "must be positive");
  return c;
}

json MomentConfig::ToJson() const {
  return {{"name", "moment"}, {"ns", ns},     {"outlier_rates", outlier_rates},
          {"reps", reps},     {"seed", seed}, {"mean", mean},
          {"sd", sd},         {"outlier", outlier}, {"t_factor", t_factor},
          {"second_moment", second_moment}};
}

std::optional<MomentCell> MomentTable::Find(const std::string& target, int n, double rate,
                                            const std::string& method) const {
  for (const MomentCell& c : cells) {
    if (c.target == target && c.n == n && c.outlier_rate == rate && c.method == method) return c;
  }
  return std::nullopt;
}

std::string MomentTable::ToCsv() const {
  std::string out = "target,n,outlier_rate,method,mae,stderr\n";
  for (const MomentCell& c : cells) {
    absl::StrAppendFormat(&out, "%s,%d,%.17g,%s,%.17g,%.17g\n", c.target, c.n, c.outlier_rate,
                          c.method, c.mae, c.std_err);
  }
  return out;
}

std::string MomentTable::ToText() const {
  std::vector<std::string> targets;
  std::vector<double> rates;
  std::vector<int> ns;
  for (const MomentCell& c : cells) {
    if (std::find(targets.begin(), targets.end(), c.target) == targets.end()) {
      targets.push_back(c.target);
    }
    if (std::find(rates.begin(), rates.end(), c.outlier_rate) == rates.end()) {
      rates.push_back(c.outlier_rate);
    }
    if (std::find(ns.begin(), ns.end(), c.n) == ns.end()) ns.push_back(c.n);
  }
  std::string out = absl::StrFormat("%-12s %6s", "method", "n");
  for (const auto& t : targets) {
    for (double r : rates) out += absl::StrFormat(" %10s", absl::StrFormat("%s@%g%%", t, 100 * r));
  }
  out += "\n";
  for (const char* m : kMomentMethods) {
    for (int n : ns) {
      out += absl::StrFormat("%-12s %6d", m, n);
      for (const auto& t : targets) {
        for (double r : rates) {
          const auto c = Find(t, n, r, m);
          out += c ? absl::StrFormat(" %10.2f", c->mae) : absl::StrFormat(" %10s", "-");
        }
      }
      out += "\n";
    }
  }
  for (const auto& [n, cov] : coverage) {
    absl::StrAppendFormat(&out, "coverage of E(Y) anchors at n=%d: %.4f\n", n, cov);
  }
  return out;
}

json MomentTable::ToJson() const {
  json rows = json::array();
  for (const MomentCell& c : cells) {
    rows.push_back({{"target", c.target},
                    {"n", c.n},
                    {"outlier_rate", c.outlier_rate},
                    {"method", c.method},
                    {"mae", c.mae},
                    {"stderr", c.std_err}});
  }
  json cov = json::array();
  for (const auto& [n, v] : coverage) cov.push_back({{"n", n}, {"coverage", v}});
  return {{"cells", rows}, {"coverage", cov}};
}

namespace {

double Median(std::vector<double> v) {
  const size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

// Absolute errors of the four methods on one sample, plus the plug-in
// coverage of its anchors (E(Y) only).
struct RepResult {
  double err[4];
  double coverage;
};

absl::StatusOr<RepResult> OneReplication(const MomentConfig& cfg, bool square, int n,
                                         double rate, uint64_t seed, const Prior& clean) {
  Rng rng(seed);
  const double t = cfg.t_factor * std::cbrt(static_cast<double>(n));
  const double a = square ? 0.0 : -t;
  const double b = square ? 2.0 * t : t;
  const auto outliers = static_cast<int>(std::lround(rate * n));
  std::vector<double> z(static_cast<size_t>(n));
  std::vector<double> anchors(static_cast<size_t>(n));
  std::vector<PrivatizedRecord> records;
  records.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double y = rng.Normal(cfg.mean, cfg.sd);
    const double u = rng.Uniform(a, b);
    double v = square ? y * y : y;
    if (i < outliers) v = cfg.outlier;
    z[static_cast<size_t>(i)] = v;
    anchors[static_cast<size_t>(i)] = u;
    const double one_anchor[] = {u};
    INTPRIV_ASSIGN_OR_RETURN(PrivatizedRecord r,
                             PrivatizeWithAnchors(v, one_anchor, Topology::kCanonical));
    records.push_back(std::move(r));
  }
  const double truth = square ? cfg.mean * cfg.mean + cfg.sd * cfg.sd : cfg.mean;
  INTPRIV_ASSIGN_OR_RETURN(MeanEstimate ex2, MeanEstimatorCase1(records, a, b));
  NpmleOptions opts;
  opts.exec = Execution::kSerial;
  INTPRIV_ASSIGN_OR_RETURN(NpmleResult fit, Npmle(records, opts));
  const double npmle_mean = LinearFunctional(fit.cdf, [](double x) { return x; });
  double raw = 0.0;
  for (double v : z) raw += v;
  raw /= n;
  RepResult out;
  out.err[0] = std::abs(ex2.mu - truth);
  out.err[1] = std::abs(npmle_mean - truth);
  out.err[2] = std::abs(raw - truth);
  out.err[3] = std::abs(Median(z) - truth);
  out.coverage = square ? 0.0 : CoverageEstimatorCase1(anchors, clean);
  return out;
}

}  // namespace

absl::StatusOr<MomentTable> RunMomentExperiment(const MomentConfig& cfg) {
  INTPRIV_ASSIGN_OR_RETURN(Distribution law, Distribution::Gaussian(cfg.mean, cfg.sd));
  const Prior clean(law);
  MomentTable table;
  const int targets = cfg.second_moment ? 2 : 1;
  for (int target = 0; target < targets; ++target) {
    const bool square = target == 1;
    for (int n : cfg.ns) {
      for (size_t ri = 0; ri < cfg.outlier_rates.size(); ++ri) {
        const double rate = cfg.outlier_rates[ri];
        INTPRIV_ASSIGN_OR_RETURN(
            std::vector<RepResult> reps,
            Replicate<RepResult>(static_cast<size_t>(cfg.reps), cfg.exec, [&](size_t rep) {
              const uint64_t seed = DeriveSeed(
                  cfg.seed, {static_cast<uint64_t>(target), static_cast<uint64_t>(n), ri, rep});
              return OneReplication(cfg, square, n, rate, seed, clean);
            }));
        for (size_t m = 0; m < 4; ++m) {
          RunningMoments acc;
          for (const RepResult& r : reps) acc.Add(r.err[m]);
          table.cells.push_back({square ? "EY2" : "EY", n, rate, kMomentMethods[m], acc.mean,
                                 acc.StdErr()});
        }
        if (!square && ri == 0) {
          RunningMoments cov;
          for (const RepResult& r : reps) cov.Add(r.coverage);
          table.coverage.push_back({n, cov.mean});
        }
      }
    }
  }
  return table;
}

}  // namespace intpriv
