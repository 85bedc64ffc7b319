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

// Acceptance suite. Prints one PASS/FAIL line per check and exits non-zero
// if any check fails. Tolerances are the constants next to each check.
//
//   acceptance --cli path/to/intpriv [--only section]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <boost/math/distributions/chi_squared.hpp>

#include "CLI11.hpp"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "intpriv/core/distribution.h"
#include "intpriv/core/errors.h"
#include "intpriv/core/noise_model.h"
#include "intpriv/core/prior.h"
#include "intpriv/core/rng.h"
#include "intpriv/coverage/coverage.h"
#include "intpriv/coverage/design.h"
#include "intpriv/estimation/functionals.h"
#include "intpriv/estimation/npmle.h"
#include "intpriv/estimation/optimal_density.h"
#include "intpriv/estimation/turnbull.h"
#include "intpriv/experiments/moment.h"
#include "intpriv/experiments/progressive_sim.h"
#include "intpriv/experiments/regression_exp.h"
#include "intpriv/experiments/replicate.h"
#include "intpriv/kernels/parallel.h"
#include "intpriv/mechanisms/config.h"
#include "intpriv/mechanisms/mechanisms.h"
#include "intpriv/regression/conditional_mean.h"
#include "json.hpp"
#include "testing/oracles.h"

namespace intpriv {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr uint64_t kSeed = 20220401;

struct Suite {
  std::string only;
  int passed = 0;
  int failed = 0;

  bool Wants(const std::string& id) const { return id.rfind(only, 0) == 0 || only.empty(); }

  void Report(const std::string& id, bool pass, const std::string& detail) {
    std::cout << (pass ? "PASS  " : "FAIL  ") << absl::StrFormat("%-40s ", id) << detail
              << std::endl;
    (pass ? passed : failed)++;
  }
  void Error(const std::string& id, const absl::Status& s) {
    Report(id, false, absl::StrCat("error: ", s.ToString()));
  }
};

double MedianOf(std::vector<double> v) { return Median(std::move(v)); }

std::string Fmt(double x) { return absl::StrFormat("%.4g", x); }

// ---------------------------------------------------------------------------
// Moment estimation table: four cells against reference MAEs.

void MomentTableChecks(Suite& s) {
  if (!s.Wants("moment_table")) return;
  struct Cell {
    const char* id;
    int n;
    const char* method;
    double target;
    double tol;
  };
  const Cell cells[] = {{"moment_table.example2.n100", 100, "example2", 0.45, 0.05},
                        {"moment_table.npmle.n100", 100, "npmle", 0.32, 0.05},
                        {"moment_table.example2.n1000", 1000, "example2", 0.29, 0.05},
                        {"moment_table.npmle.n1000", 1000, "npmle", 0.12, 0.03}};
  constexpr double kRuntimeLimitSeconds = 300.0;
  MomentConfig cfg;  // n in {100, 1000}, 1000 replications
  const auto t0 = std::chrono::steady_clock::now();
  auto table = RunMomentExperiment(cfg);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!table.ok()) return s.Error("moment_table", table.status());
  for (const Cell& c : cells) {
    const auto cell = table->Find("EY", c.n, 0.0, c.method);
    if (!cell) {
      s.Report(c.id, false, "cell missing");
      continue;
    }
    s.Report(c.id, std::abs(cell->mae - c.target) <= c.tol,
             absl::StrCat("MAE ", Fmt(cell->mae), " (se ", Fmt(cell->std_err), "), target ",
                          c.target, " +- ", c.tol));
  }
  s.Report("moment_table.runtime", secs < kRuntimeLimitSeconds,
           absl::StrCat(Fmt(secs), " s for ", cfg.reps, " replications, limit ",
                        kRuntimeLimitSeconds, " s"));
}

// ---------------------------------------------------------------------------
// Unbiasedness and root-n scaling of the single-anchor mean estimator.

void MeanEstimator(Suite& s) {
  if (!s.Wants("mean_estimator")) return;
  constexpr int kReps = 10000;
  constexpr double kA = -8.0, kB = 8.0, kMu = 0.5;
  const Distribution y_law = *Distribution::Gaussian(kMu, 1.0);
  const AnchorSampler sampler = *AnchorSampler::Iid(*Distribution::Uniform(kA, kB), 1);
  std::vector<double> var_n;
  for (int n : {100, 1600}) {
    auto est = Replicate<double>(kReps, Execution::kParallel, [&](size_t rep) -> absl::StatusOr<double> {
      Rng rng(DeriveSeed(kSeed, {1, static_cast<uint64_t>(n), rep}));
      std::vector<PrivatizedRecord> records;
      records.reserve(static_cast<size_t>(n));
      for (int i = 0; i < n; ++i) {
        INTPRIV_ASSIGN_OR_RETURN(PrivatizedRecord r, PrivatizeCaseOne(y_law.Sample(rng), sampler, rng));
        records.push_back(std::move(r));
      }
      INTPRIV_ASSIGN_OR_RETURN(MeanEstimate m, MeanEstimatorCase1(records, kA, kB));
      return m.mu;
    });
    if (!est.ok()) return s.Error("mean_estimator", est.status());
    const double mean = std::accumulate(est->begin(), est->end(), 0.0) / kReps;
    double ss = 0.0;
    for (double v : *est) ss += (v - mean) * (v - mean);
    const double var = ss / (kReps - 1);
    const double se = std::sqrt(var / kReps);
    var_n.push_back(var * n);
    s.Report(absl::StrCat("mean_estimator.unbiased.n", n), std::abs(mean - kMu) <= 3 * se,
             absl::StrCat("mean ", Fmt(mean), ", |bias| ", Fmt(std::abs(mean - kMu)),
                          " vs 3 se = ", Fmt(3 * se)));
  }
  const double ratio = var_n[0] / var_n[1];
  s.Report("mean_estimator.variance_scaling", ratio >= 0.7 && ratio <= 1.4,
           absl::StrCat("n var(n=100) / n var(n=1600) = ", Fmt(ratio), ", allowed [0.7, 1.4]"));
}

// ---------------------------------------------------------------------------
// Leakage of an ensemble never exceeds the summed leakages.

absl::StatusOr<Distribution> RandomLaw(Rng& rng) {
  switch (rng.Below(3)) {
    case 0:
      return Distribution::Logistic(rng.Uniform(-1, 1), rng.Uniform(0.3, 3));
    case 1:
      return Distribution::Gaussian(rng.Uniform(-1, 1), rng.Uniform(0.3, 3));
    default: {
      const double a = rng.Uniform(-4, 0);
      return Distribution::Uniform(a, a + rng.Uniform(1, 6));
    }
  }
}

absl::StatusOr<MechanismConfig> RandomMechanism(Rng& rng) {
  INTPRIV_ASSIGN_OR_RETURN(Distribution law, RandomLaw(rng));
  if (rng.Bernoulli(0.3)) {
    const size_t q = 2 + rng.Below(2);
    INTPRIV_ASSIGN_OR_RETURN(AnchorSampler sampler, AnchorSampler::Iid(law, q));
    return MechanismConfig::Make(Topology::kRing, q, sampler);
  }
  const size_t m = 2 + rng.Below(3);
  INTPRIV_ASSIGN_OR_RETURN(AnchorSampler sampler, AnchorSampler::Iid(law, m - 1));
  return MechanismConfig::Make(Topology::kCanonical, m, sampler);
}

void Composition(Suite& s) {
  if (!s.Wants("composition")) return;
  constexpr int kEnsembles = 100;
  constexpr size_t kDraws = 20000;
  const Prior prior(*Distribution::Gaussian(0, 1));
  int held = 0, adaptive = 0;
  double worst = -1e300;
  for (int e = 0; e < kEnsembles; ++e) {
    Rng rng(DeriveSeed(kSeed, {3, static_cast<uint64_t>(e)}));
    const size_t k = 2 + rng.Below(3);
    std::vector<MechanismConfig> configs;
    for (size_t j = 0; j < k; ++j) {
      auto m = RandomMechanism(rng);
      if (!m.ok()) return s.Error("composition", m.status());
      configs.push_back(*m);
    }
    McOptions opts;
    opts.draws = kDraws;
    opts.seed = DeriveSeed(kSeed, {3, static_cast<uint64_t>(e), 1});
    absl::StatusOr<CompositionCheck> c;
    if (e % 2 == 0) {
      c = CompositionBoundCheck(configs, prior, opts);
    } else {
      // Adaptive: each later collector draws its anchors inside the range
      // the previous one recorded, or around its anchors when unbounded.
      ++adaptive;
      RecordGenerator gen = [&configs](double y, Rng& r)
          -> absl::StatusOr<std::vector<PrivatizedRecord>> {
        std::vector<PrivatizedRecord> out;
        INTPRIV_ASSIGN_OR_RETURN(PrivatizedRecord first, Privatize(y, configs[0], r));
        out.push_back(first);
        for (size_t j = 1; j < configs.size(); ++j) {
          const PrivatizedRecord& prev = out.back();
          const Interval& hull = prev.chosen_range().parts().front();
          const size_t count = configs[j].sampler().count();
          std::vector<double> anchors;
          while (anchors.size() < count) {
            double a;
            if (hull.lo.is_finite() && hull.hi.is_finite()) {
              a = r.Uniform(hull.lo.value(), hull.hi.value());
            } else {
              a = prev.anchors()[r.Below(prev.anchors().size())] + r.Normal(0, 1);
            }
            if (std::find(anchors.begin(), anchors.end(), a) == anchors.end()) anchors.push_back(a);
          }
          std::sort(anchors.begin(), anchors.end());
          INTPRIV_ASSIGN_OR_RETURN(PrivatizedRecord rec,
                                   PrivatizeWithAnchors(y, anchors, configs[j].topology()));
          out.push_back(std::move(rec));
        }
        return out;
      };
      c = CompositionBoundCheck(gen, prior, opts);
    }
    if (!c.ok()) return s.Error("composition", c.status());
    held += c->holds;
    worst = std::max(worst, (c->lhs - c->rhs) / std::max(c->diff_stderr, 1e-300));
  }
  s.Report("composition.composition_bound", held == kEnsembles,
           absl::StrCat(held, "/", kEnsembles, " ensembles (", adaptive,
                        " adaptive) satisfy leakage <= sum + 3 se; worst (lhs - rhs)/se = ",
                        Fmt(worst)));
}

// ---------------------------------------------------------------------------
// Validity: given the datum, Y follows the prior restricted to the chosen
// range. The restricted prior CDF maps Y to Uniform(0, 1) within every
// datum; the histogram of that transform, split by the chosen index, is
// tested against uniformity.

void Validity(Suite& s) {
  if (!s.Wants("validity")) return;
  constexpr size_t kSamples = 100000;
  constexpr int kBins = 20;
  constexpr double kLevel = 0.001;
  const Distribution y_law = *Distribution::Logistic(0.3, 1.0);
  const Prior prior(y_law);
  const Distribution anchor_law = *Distribution::Gaussian(0, 1.5);
  struct Case {
    std::string id;
    Topology topology;
    size_t ranges;
    size_t anchors;
  };
  const std::vector<Case> cases = {{"validity.canonical.m2", Topology::kCanonical, 2, 1},
                                   {"validity.canonical.m3", Topology::kCanonical, 3, 2},
                                   {"validity.canonical.m5", Topology::kCanonical, 5, 4},
                                   {"validity.ring.q2", Topology::kRing, 2, 2},
                                   {"validity.ring.q3", Topology::kRing, 3, 3}};
  for (const Case& c : cases) {
    auto cfg = MechanismConfig::Make(c.topology, c.ranges, *AnchorSampler::Iid(anchor_law, c.anchors));
    if (!cfg.ok()) return s.Error(c.id, cfg.status());
    std::vector<std::vector<double>> counts(c.ranges, std::vector<double>(kBins, 0.0));
    Rng rng(DeriveSeed(kSeed, {4, c.ranges, c.topology == Topology::kRing}));
    absl::Status err;
    for (size_t i = 0; i < kSamples && err.ok(); ++i) {
      const double y = y_law.Sample(rng);
      auto rec = Privatize(y, *cfg, rng);
      if (!rec.ok()) {
        err = rec.status();
        break;
      }
      const Range& set = rec->chosen_range();
      const double w = prior.Mass(set.Intersect(Range::AtMost(y))) / prior.Mass(set);
      const int bin = std::min(kBins - 1, static_cast<int>(w * kBins));
      counts[rec->choice() - 1][static_cast<size_t>(bin)] += 1.0;
    }
    if (!err.ok()) return s.Error(c.id, err);
    double stat = 0.0;
    int dof = 0;
    for (const auto& row : counts) {
      const double total = std::accumulate(row.begin(), row.end(), 0.0);
      if (total < 5.0 * kBins) continue;  // too few for the asymptotics
      const double expected = total / kBins;
      for (double o : row) stat += (o - expected) * (o - expected) / expected;
      dof += kBins - 1;
    }
    if (dof == 0) {
      s.Report(c.id, false, "no stratum with enough samples");
      continue;
    }
    const double p = boost::math::cdf(boost::math::complement(
        boost::math::chi_squared(dof), stat));
    s.Report(c.id, p >= kLevel,
             absl::StrCat("chi2 ", Fmt(stat), " on ", dof, " dof, p = ", Fmt(p),
                          " (reject below ", kLevel, ")"));
  }
}

// ---------------------------------------------------------------------------
// NPMLE: consistency trend under current-status data, and agreement with a
// grid search on tiny instances.

void NpmleChecks(Suite& s) {
  if (!s.Wants("npmle")) return;
  constexpr int kSeeds = 11;
  const std::vector<int> ns = {100, 300, 1000, 3000};
  const Distribution y_law = *Distribution::Logistic(0, 1);
  const Distribution u_law = *Distribution::Logistic(0, 2);
  std::vector<double> medians;
  for (int n : ns) {
    auto errs = Replicate<double>(kSeeds, Execution::kParallel, [&](size_t seed) -> absl::StatusOr<double> {
      Rng rng(DeriveSeed(kSeed, {5, static_cast<uint64_t>(n), seed}));
      std::vector<PrivatizedRecord> recs;
      for (int i = 0; i < n; ++i) {
        const std::vector<double> u = {u_law.Sample(rng)};
        INTPRIV_ASSIGN_OR_RETURN(PrivatizedRecord r,
                                 PrivatizeWithAnchors(y_law.Sample(rng), u, Topology::kCanonical));
        recs.push_back(std::move(r));
      }
      NpmleOptions opts;
      opts.exec = Execution::kSerial;
      INTPRIV_ASSIGN_OR_RETURN(NpmleResult fit, Npmle(recs, opts));
      return SupNormDistance(fit.cdf, [](double x) { return testing::LogisticCdf(x, 1.0); });
    });
    if (!errs.ok()) return s.Error("npmle", errs.status());
    medians.push_back(MedianOf(*errs));
  }
  bool monotone = true;
  std::string trail;
  for (size_t k = 0; k < ns.size(); ++k) {
    if (k > 0 && medians[k] >= medians[k - 1]) monotone = false;
    absl::StrAppend(&trail, k ? ", " : "", "n=", ns[k], ": ", Fmt(medians[k]));
  }
  s.Report("npmle.trend_decreasing", monotone, absl::StrCat("median sup error ", trail));
  s.Report("npmle.n1000_below_0.05", medians[2] < 0.05,
           absl::StrCat("median sup error at n=1000 = ", Fmt(medians[2]), ", target < 0.05"));

  // Brute force on instances with at most four atoms.
  constexpr double kMassTol = 2e-3;
  Rng rng(DeriveSeed(kSeed, {6}));
  int checked = 0;
  double worst = 0.0;
  while (checked < 50) {
    std::vector<PrivatizedRecord> recs;
    const size_t n = 2 + rng.Below(7);
    for (size_t i = 0; i < n; ++i) {
      std::vector<double> a;
      const size_t k = 1 + rng.Below(3);
      while (a.size() < k) {
        const double v = static_cast<double>(rng.Below(4));
        if (std::find(a.begin(), a.end(), v) == a.end()) a.push_back(v);
      }
      std::sort(a.begin(), a.end());
      const bool ring = a.size() >= 2 && rng.Bernoulli(0.3);
      recs.push_back(*PrivatizeWithAnchors(rng.Uniform(0, 3), a,
                                           ring ? Topology::kRing : Topology::kCanonical));
    }
    auto support = BuildTurnbullSupport(recs);
    if (!support.ok()) continue;
    if (support->atoms.size() > 4 || support->uninformative == recs.size()) continue;
    NpmleOptions opts;
    opts.tol = 1e-12;
    opts.max_iter = 200000;
    auto fit = Npmle(recs, opts);
    if (!fit.ok()) return s.Error("npmle.brute_force", fit.status());
    // Membership by probing a point of each atom against each record's set.
    std::vector<std::vector<char>> member(recs.size(), std::vector<char>(support->atoms.size()));
    for (size_t a = 0; a < support->atoms.size(); ++a) {
      const Atom& atom = support->atoms[a];
      double probe;
      if (atom.lo.is_finite() && atom.hi.is_finite()) {
        probe = 0.5 * (atom.lo.value() + atom.hi.value());
      } else if (atom.hi.is_finite()) {
        probe = atom.hi.value() - 1.0;
      } else {
        probe = atom.lo.value() + 1.0;
      }
      for (size_t r = 0; r < recs.size(); ++r) member[r][a] = recs[r].chosen_range().Contains(probe);
    }
    const std::vector<double> oracle = testing::BruteForceNpmle(member);
    for (size_t a = 0; a < oracle.size(); ++a) {
      worst = std::max(worst, std::abs(fit->masses[a] - oracle[a]));
    }
    ++checked;
  }
  s.Report("npmle.brute_force", worst <= kMassTol,
           absl::StrCat(checked, " instances, worst mass gap ", Fmt(worst), ", limit ", kMassTol));
}

// ---------------------------------------------------------------------------
// Variance-optimal anchor density.

void OptimalDensityChecks(Suite& s) {
  if (!s.Wants("optimal_density")) return;
  constexpr double kMassTol = 1e-6;
  std::vector<double> grid;
  for (int i = -6000; i <= 6000; ++i) grid.push_back(i / 100.0);
  const auto trapezoid = [&](const std::vector<double>& d) {
    double t = 0.0;
    for (size_t i = 1; i < grid.size(); ++i) t += 0.5 * (d[i] + d[i - 1]) * (grid[i] - grid[i - 1]);
    return t;
  };
  const auto logistic = [](double x) { return testing::LogisticCdf(x, 1.0); };
  const auto gaussian = [](double x) { return testing::GaussianCdf(x, 1.0); };
  auto linear_l = OptimalAnchorDensity(logistic, [](double) { return 1.0; }, grid);
  auto linear_g = OptimalAnchorDensity(gaussian, [](double) { return 1.0; }, grid);
  auto square = OptimalAnchorDensity(logistic, [](double u) { return 2.0 * u; }, grid);
  if (!linear_l.ok() || !linear_g.ok() || !square.ok()) {
    return s.Error("optimal_density", !linear_l.ok() ? linear_l.status()
                                      : !linear_g.ok() ? linear_g.status() : square.status());
  }
  double mass_gap = 0.0;
  for (const auto* od : {&*linear_l, &*linear_g, &*square}) {
    mass_gap = std::max(mass_gap, std::abs(trapezoid(od->density) - 1.0));
  }
  s.Report("optimal_density.normalized", mass_gap <= kMassTol,
           absl::StrCat("max |integral - 1| = ", Fmt(mass_gap), ", limit ", kMassTol));

  // Relative to the peak; F near 1 carries rounding of order 1e-9 here.
  constexpr double kSymmetryTol = 1e-6;
  double asym = 0.0, peak = 0.0;
  bool peak_at_median = true;
  for (const auto* od : {&*linear_l, &*linear_g}) {
    const auto top = std::max_element(od->density.begin(), od->density.end());
    peak_at_median = peak_at_median && std::abs(grid[top - od->density.begin()]) < 1e-9;
    for (size_t i = 0; i < grid.size(); ++i) {
      asym = std::max(asym, std::abs(od->density[i] - od->density[grid.size() - 1 - i]));
      peak = std::max(peak, od->density[i]);
    }
  }
  s.Report("optimal_density.symmetric_linear", asym <= kSymmetryTol * peak && peak_at_median,
           absl::StrCat("max |g(x) - g(-x)| = ", Fmt(asym), " for peak ", Fmt(peak),
                        peak_at_median ? ", maximum at the median" : ", maximum off the median"));

  const auto& d = square->density;
  const size_t mid = grid.size() / 2;
  std::vector<size_t> modes;
  const double top = *std::max_element(d.begin(), d.end());
  for (size_t i = 1; i + 1 < d.size(); ++i) {
    if (d[i] > d[i - 1] && d[i] >= d[i + 1] && d[i] > 1e-3 * top) modes.push_back(i);
  }
  const bool bimodal = modes.size() == 2 && grid[modes[0]] < 0 && grid[modes[1]] > 0;
  s.Report("optimal_density.square_bimodal", d[mid] == 0.0 && bimodal,
           absl::StrCat("g(median) = ", Fmt(d[mid]), ", ", modes.size(), " modes",
                        modes.size() == 2 ? absl::StrCat(" at ", Fmt(grid[modes[0]]), " and ",
                                                         Fmt(grid[modes[1]]))
                                          : ""));
}

// ---------------------------------------------------------------------------
// Interval regression on the linear and quadratic templates.

double Spearman(const std::vector<double>& a, const std::vector<double>& b) {
  const auto ranks = [](const std::vector<double>& v) {
    std::vector<size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](size_t i, size_t j) { return v[i] < v[j]; });
    std::vector<double> r(v.size());
    for (size_t k = 0; k < idx.size();) {
      size_t e = k;
      while (e + 1 < idx.size() && v[idx[e + 1]] == v[idx[k]]) ++e;
      for (size_t t = k; t <= e; ++t) r[idx[t]] = 0.5 * (k + e) + 1;
      k = e + 1;
    }
    return r;
  };
  const auto ra = ranks(a), rb = ranks(b);
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / ra.size();
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / rb.size();
  double num = 0, da = 0, db = 0;
  for (size_t i = 0; i < ra.size(); ++i) {
    num += (ra[i] - ma) * (rb[i] - mb);
    da += (ra[i] - ma) * (ra[i] - ma);
    db += (rb[i] - mb) * (rb[i] - mb);
  }
  return num / std::sqrt(da * db);
}

// Plateau rule on a per-iteration MSE trace (entry k is iteration k + 1):
// MSE(20) < MSE(1), Spearman(iteration, MSE) over 1..20 <= -0.9, and
// |MSE(40) - MSE(20)| <= 0.05 (MSE(1) - MSE(20)).
struct PlateauCheck {
  bool pass = false;
  std::string detail;
};

PlateauCheck Plateau(const std::vector<double>& mse) {
  constexpr double kSpearman = -0.9;
  constexpr double kPlateau = 0.05;
  PlateauCheck out;
  if (mse.size() < 40) {
    out.detail = "trace shorter than 40 iterations";
    return out;
  }
  std::vector<double> it(20), head(mse.begin(), mse.begin() + 20);
  std::iota(it.begin(), it.end(), 1.0);
  const double rho = Spearman(it, head);
  const double drop = mse[0] - mse[19];
  const double tail = std::abs(mse[39] - mse[19]);
  out.pass = drop > 0 && rho <= kSpearman && tail <= kPlateau * drop;
  out.detail = absl::StrCat("MSE(1) ", Fmt(mse[0]), ", MSE(20) ", Fmt(mse[19]), ", MSE(40) ",
                            Fmt(mse[39]), ", spearman ", Fmt(rho), ", |MSE40-MSE20| ", Fmt(tail),
                            " vs ", Fmt(kPlateau * drop));
  return out;
}

void Regression(Suite& s) {
  if (!s.Wants("linear_regression") && !s.Wants("quadratic_regression")) return;
  if (s.Wants("linear_regression")) {
    constexpr double kCoverage = 0.9, kCoverageTol = 0.02, kBetaTol = 0.1;
    RegressionExpConfig cfg;  // linear: n 200, beta 1, logistic(5) anchors
    cfg.reps = 50;
    cfg.max_iter = 40;
    cfg.run_all_iterations = true;
    cfg.seed = kSeed;
    auto r = RunRegressionExperiment(cfg);
    if (!r.ok()) return s.Error("linear_regression", r.status());
    std::vector<double> cov, dev;
    bool contained = true;
    for (const auto& rep : r->reps) {
      cov.push_back(rep.coverage);
      dev.push_back(std::abs(*rep.beta_hat - 1.0));
      contained = contained && rep.contained;
    }
    const double mean_cov = std::accumulate(cov.begin(), cov.end(), 0.0) / cov.size();
    s.Report("linear_regression.coverage", std::abs(mean_cov - kCoverage) <= kCoverageTol,
             absl::StrCat("mean plug-in coverage ", Fmt(mean_cov), ", target ", kCoverage, " +- ",
                          kCoverageTol));
    const double med = MedianOf(dev);
    s.Report("linear_regression.beta_error", med < kBetaTol,
             absl::StrCat("median |beta_hat - 1| over 50 seeds = ", Fmt(med), ", target < ",
                          kBetaTol));
    const PlateauCheck p = Plateau(r->MedianTestMse());
    s.Report("linear_regression.converged_by_20", p.pass, p.detail);
    s.Report("linear_regression.containment", contained, "surrogates inside their ranges at every iteration");
  }
  if (s.Wants("quadratic_regression")) {
    RegressionExpConfig cfg;
    cfg.template_name = "quadratic";  // two anchors, kNN learner
    cfg.reps = 20;
    cfg.max_iter = 40;
    cfg.run_all_iterations = true;
    cfg.seed = kSeed;
    auto r = RunRegressionExperiment(cfg);
    if (!r.ok()) return s.Error("quadratic_regression", r.status());
    const PlateauCheck p = Plateau(r->MedianTestMse());
    s.Report("quadratic_regression.monotone_to_plateau", p.pass, p.detail);
  }
}

// ---------------------------------------------------------------------------
// Closed-form conditional means against quadrature.

void ConditionalMeanChecks(Suite& s) {
  if (!s.Wants("conditional_mean")) return;
  constexpr double kTol = 1e-8;
  double worst = 0.0;
  std::string where;
  absl::Status err;
  for (const NoiseModel& nm :
       {NoiseModel::StandardLogistic(), *NoiseModel::Make(NoiseModel::Kind::kLogistic, 2.5),
        NoiseModel::StandardGaussian(), *NoiseModel::Make(NoiseModel::Kind::kGaussian, 0.7)}) {
    const double sc = nm.scale();
    const bool logistic = nm.kind() == NoiseModel::Kind::kLogistic;
    const std::function<double(double)> density = [sc, logistic](double x) {
      return logistic ? testing::LogisticDensity(x, sc) : testing::GaussianDensity(x, sc);
    };
    const auto track = [&](const absl::StatusOr<double>& got, double want, const std::string& at) {
      if (!got.ok()) {
        err = got.status();
        return;
      }
      if (std::abs(*got - want) > worst) {
        worst = std::abs(*got - want);
        where = absl::StrCat(nm.Name(), " ", at);
      }
    };
    for (double zu = -8; zu <= 8; zu += 0.5) {
      const double u = zu * sc;
      track(ConditionalMeanCase1(u, 1, nm), testing::Moments(density, -testing::kInf, u, sc).mean,
            absl::StrCat("(-inf, ", u, "]"));
      track(ConditionalMeanCase1(u, 0, nm), testing::Moments(density, u, testing::kInf, sc).mean,
            absl::StrCat("(", u, ", inf)"));
      for (double zv = zu + 0.5; zv <= 8; zv += 1.5) {
        const double v = zv * sc;
        track(ConditionalMeanCase2(u, v, 0, 1, nm), testing::Moments(density, u, v, sc).mean,
              absl::StrCat("(", u, ", ", v, "]"));
      }
    }
  }
  if (!err.ok()) return s.Error("conditional_mean.quadrature", err);
  s.Report("conditional_mean.quadrature", worst <= kTol,
           absl::StrCat("worst gap ", Fmt(worst), " at ", where, ", limit ", kTol));
  auto tail = ConditionalMeanCase1(0.0, 1, NoiseModel::StandardLogistic());
  if (!tail.ok()) return s.Error("conditional_mean.logistic_left_tail", tail.status());
  const double gap = std::abs(*tail + 2.0 * std::log(2.0));
  s.Report("conditional_mean.logistic_left_tail", gap <= 1e-10,
           absl::StrCat("E(e | e <= 0) = ", absl::StrFormat("%.15g", *tail), ", |gap| ",
                        Fmt(gap)));
}

// ---------------------------------------------------------------------------
// Selective mechanism: a null response is mostly explained by the coin.

void SelectiveNull(Suite& s) {
  if (!s.Wants("selective_null")) return;
  constexpr size_t kTrials = 1000000;
  constexpr double kTau = 0.6, kRho = 0.3;
  const Distribution unit = *Distribution::Uniform(0, 1);
  auto cfg = MechanismConfig::Make(Topology::kCanonical, 2, *AnchorSampler::Iid(unit, 1),
                                   AcceptableRegion::None(), SelectiveParams{kTau, kRho, Prior(unit)});
  if (!cfg.ok()) return s.Error("selective_null", cfg.status());
  struct Tally {
    double nulls = 0, coin_nulls = 0, covered = 0;
  };
  const size_t blocks = NumBlocks(kTrials);
  auto tallies = Replicate<Tally>(blocks, Execution::kParallel, [&](size_t b) -> absl::StatusOr<Tally> {
    Rng rng(DeriveSeed(kSeed, {7, b}));
    Tally t;
    const size_t end = std::min(kTrials, (b + 1) * kBlockSize);
    for (size_t i = b * kBlockSize; i < end; ++i) {
      INTPRIV_ASSIGN_OR_RETURN(SelectiveOutcome o, PrivatizeSelective(unit.Sample(rng), *cfg, rng));
      t.covered += o.coverage >= kTau;
      if (!o.emitted) {
        t.nulls += 1;
        t.coin_nulls += !o.w;
      }
    }
    return t;
  });
  if (!tallies.ok()) return s.Error("selective_null", tallies.status());
  Tally all;
  for (const Tally& t : *tallies) {
    all.nulls += t.nulls;
    all.coin_nulls += t.coin_nulls;
    all.covered += t.covered;
  }
  const double p = all.coin_nulls / all.nulls;
  const double se = std::sqrt(p * (1 - p) / all.nulls);
  const double p_cov = all.covered / kTrials;
  s.Report("selective_null.null_mostly_coin", p >= 0.5 - 3 * se,
           absl::StrCat("P(W=0 | null) = ", Fmt(p), " (se ", Fmt(se), "); P(L >= tau) = ",
                        Fmt(p_cov), ", rho = ", kRho));
}

// ---------------------------------------------------------------------------
// Coverage estimators and the anchor designer.

void CoverageMachinery(Suite& s) {
  if (!s.Wants("coverage")) return;
  {
    Rng rng(DeriveSeed(kSeed, {8}));
    double lowest = 1.0;
    for (int trial = 0; trial < 1000; ++trial) {
      const Prior prior(*RandomLaw(rng));
      const Distribution law = *RandomLaw(rng);
      std::vector<double> anchors(1 + rng.Below(50));
      for (double& a : anchors) a = law.Sample(rng);
      lowest = std::min(lowest, CoverageEstimatorCase1(anchors, prior));
    }
    s.Report("coverage.case1_at_least_half", lowest >= 0.5,
             absl::StrCat("smallest estimate over 1000 random cases = ", Fmt(lowest)));
  }
  {
    Rng rng(DeriveSeed(kSeed, {9}));
    std::vector<double> anchors(100000);
    for (double& a : anchors) a = rng.Uniform01();
    const double tau = CoverageEstimatorCase1(anchors, Prior(*Distribution::Uniform(0, 1)));
    s.Report("coverage.uniform_two_thirds", std::abs(tau - 2.0 / 3.0) <= 0.005,
             absl::StrCat("estimate ", Fmt(tau), " vs 2/3, limit 0.005"));
  }
  const Prior prior(*Distribution::Gaussian(0, 1));
  for (MechanismFamily family : {MechanismFamily::kCaseOne, MechanismFamily::kCaseTwo}) {
    const bool one = family == MechanismFamily::kCaseOne;
    for (double target : {0.6, 0.75, 0.9}) {
      const std::string id = absl::StrCat("coverage.design.", one ? "case1." : "case2.", target);
      auto design = DesignAnchorForCoverage(target, prior, family);
      if (!design.ok()) {
        s.Error(id, design.status());
        continue;
      }
      auto cfg = MechanismConfig::Make(Topology::kCanonical, one ? 2 : 3, design->sampler);
      if (!cfg.ok()) {
        s.Error(id, cfg.status());
        continue;
      }
      McOptions opts;
      opts.draws = 200000;
      opts.seed = DeriveSeed(kSeed, {10, one, static_cast<uint64_t>(target * 100)});
      auto mc = MechanismCoverageMc(*cfg, prior, opts);
      if (!mc.ok()) {
        s.Error(id, mc.status());
        continue;
      }
      const double limit = 1e-3 + 3 * mc->std_err;
      s.Report(id, std::abs(mc->tau - target) <= limit,
               absl::StrCat("Monte Carlo tau ", Fmt(mc->tau), " vs target ", target, ", limit ",
                            Fmt(limit)));
    }
  }
}

// ---------------------------------------------------------------------------
// CLI: byte-identical outputs across runs and thread counts, and the
// privatize -> regress pipeline.

std::string Quote(const std::string& s) { return "'" + s + "'"; }

int Run(const std::string& cmd) {
  const int rc = std::system((cmd + " >/dev/null 2>&1").c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool SameTree(const fs::path& a, const fs::path& b, std::string* why) {
  std::vector<std::string> names_a, names_b;
  for (const auto& e : fs::directory_iterator(a)) names_a.push_back(e.path().filename());
  for (const auto& e : fs::directory_iterator(b)) names_b.push_back(e.path().filename());
  std::sort(names_a.begin(), names_a.end());
  std::sort(names_b.begin(), names_b.end());
  if (names_a != names_b || names_a.empty()) {
    *why = "file lists differ";
    return false;
  }
  for (const auto& n : names_a) {
    if (Slurp(a / n) != Slurp(b / n)) {
      *why = absl::StrCat(n, " differs");
      return false;
    }
  }
  return true;
}

void Cli(Suite& s, const std::string& cli) {
  if (!s.Wants("cli") && !s.Wants("progressive") && !s.Wants("pipeline")) return;
  const fs::path root = fs::temp_directory_path() / absl::StrCat("intpriv_acceptance_", getpid());
  fs::remove_all(root);
  fs::create_directories(root);
  if (s.Wants("cli")) {
    if (cli.empty()) {
      s.Report("cli.determinism", false, "no --cli binary given");
    } else {
      const std::vector<std::pair<std::string, std::string>> runs = {
          {"moment-exp", "--reps 30"},
          {"regression-exp", "--reps 4"},
          {"tradeoff", "--reps 3"},
          {"progressive", "--reps 3"}};
      for (const auto& [cmd, extra] : runs) {
        std::string why;
        bool ok = true;
        const fs::path a = root / (cmd + "_t1"), b = root / (cmd + "_t4"), c = root / (cmd + "_t4b");
        for (const auto& [dir, threads] :
             std::vector<std::pair<fs::path, int>>{{a, 1}, {b, 4}, {c, 4}}) {
          const int rc = Run(absl::StrCat(Quote(cli), " ", cmd, " ", extra, " --seed 7 --threads ",
                                          threads, " --out ", Quote(dir.string())));
          if (rc != 0) {
            ok = false;
            why = absl::StrCat("exit code ", rc);
          }
        }
        ok = ok && SameTree(a, b, &why) && SameTree(b, c, &why);
        s.Report(absl::StrCat("cli.determinism.", cmd), ok,
                 ok ? "identical across two runs and 1 vs 4 threads" : why);
      }
    }
  }
  if (s.Wants("progressive")) {
    ProgressiveSimConfig cfg;  // n 300, 20 seeds
    cfg.seed = kSeed;
    auto r = RunProgressiveSimulation(cfg);
    if (!r.ok()) {
      s.Error("progressive.round_x_beats_round_1", r.status());
    } else {
      s.Report("progressive.round_x_beats_round_1", r->MedianRoundX() <= r->MedianRound1(),
               absl::StrCat("median energy distance: all rounds ", Fmt(r->MedianRoundX()),
                            ", first round ", Fmt(r->MedianRound1()), " over ", r->rows.size(),
                            " seeds"));
    }
  }
  if (s.Wants("pipeline")) {
    constexpr int kRows = 1000;
    constexpr double kSlopeTol = 0.3;
    const fs::path csv = root / "synthetic.csv", mech = root / "mechanism.json",
                   records = root / "records.jsonl", fit_dir = root / "fit";
    {
      Rng rng(DeriveSeed(kSeed, {11}));
      std::ofstream out(csv);
      out << "id,x,z,y\n";
      for (int i = 0; i < kRows; ++i) {
        const double x = rng.Normal(0, 1), z = rng.Uniform01();
        out << absl::StrFormat("%d,%.9g,%.9g,%.9g\n", i, x, z, 1 + 2 * x - z + rng.Normal(0, 1));
      }
      std::ofstream m(mech);
      m << json{{"schema", 1},
                {"topology", "canonical"},
                {"ranges", 3},
                {"sampler", {{"law", {{"kind", "logistic"}, {"loc", 1.0}, {"scale", 1.0}}}, {"count", 2}}},
                {"acceptable", nullptr},
                {"selective", nullptr},
                {"progressive", nullptr},
                {"transform", nullptr}}
               .dump();
    }
    std::string detail;
    bool ok = false;
    if (cli.empty()) {
      detail = "no --cli binary given";
    } else if (int rc = Run(absl::StrCat(Quote(cli), " privatize --config ", Quote(mech.string()),
                                         " --input ", Quote(csv.string()),
                                         " --column y --features x,z --seed 3 --out ",
                                         Quote(records.string())));
               rc != 0) {
      detail = absl::StrCat("privatize exit code ", rc);
    } else if (int rc = Run(absl::StrCat(Quote(cli), " regression-exp --input ",
                                         Quote(records.string()), " --out ",
                                         Quote(fit_dir.string())));
               rc != 0) {
      detail = absl::StrCat("regression-exp exit code ", rc);
    } else {
      const std::string lines = Slurp(records);
      const long n = std::count(lines.begin(), lines.end(), '\n');
      const json fit = json::parse(Slurp(fit_dir / "fit.json"), nullptr, false);
      if (fit.is_discarded() || !fit.contains("model")) {
        detail = "fit.json unreadable";
      } else {
        const auto coef = fit["model"]["coef"].get<std::vector<double>>();
        ok = n == kRows && coef.size() == 2 && std::abs(coef[0] - 2) <= kSlopeTol &&
             std::abs(coef[1] + 1) <= kSlopeTol && fs::exists(fit_dir / "manifest.json");
        detail = absl::StrCat(n, " records, coef (", Fmt(coef.at(0)), ", ", Fmt(coef.at(1)),
                              ") vs (2, -1), limit ", kSlopeTol);
      }
    }
    s.Report("pipeline.privatize_regress", ok, detail);
  }
  fs::remove_all(root);
}

}  // namespace
}  // namespace intpriv

int main(int argc, char** argv) {
  CLI::App app{"acceptance suite"};
  std::string cli;
  intpriv::Suite suite;
  app.add_option("--cli", cli, "path to the intpriv binary");
  app.add_option("--only", suite.only, "run only the section with this name");
  CLI11_PARSE(app, argc, argv);

  intpriv::MomentTableChecks(suite);
  intpriv::MeanEstimator(suite);
  intpriv::Composition(suite);
  intpriv::Validity(suite);
  intpriv::NpmleChecks(suite);
  intpriv::OptimalDensityChecks(suite);
  intpriv::Regression(suite);
  intpriv::ConditionalMeanChecks(suite);
  intpriv::SelectiveNull(suite);
  intpriv::CoverageMachinery(suite);
  intpriv::Cli(suite, cli);
  std::cout << suite.passed << " passed, " << suite.failed << " failed" << std::endl;
  return suite.failed == 0 ? 0 : 1;
}
