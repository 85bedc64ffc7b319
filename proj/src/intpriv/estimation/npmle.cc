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

#include "intpriv/estimation/npmle.h"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "intpriv/core/errors.h"

namespace intpriv {

namespace {

bool IsCurrentStatus(std::span<const PrivatizedRecord> records) {
  for (const PrivatizedRecord& r : records) {
    if (r.exact() || r.anchors().size() != 1 || r.partition().size() != 2 ||
        r.partition().topology() != Topology::kCanonical) {
      return false;
    }
  }
  return true;
}

// F at the distinct anchors, maximizing sum log F(u) over "Y <= u" records
// plus sum log(1 - F(u)) over "Y > u" records: the weighted isotonic
// regression of the indicator on the anchor.
struct IsotonicCdf {
  std::vector<double> u;
  std::vector<double> f;

  double At(const ExtReal& x) const {
    if (x.is_neg_inf()) return 0.0;
    if (x.is_pos_inf()) return 1.0;
    const auto it = std::lower_bound(u.begin(), u.end(), x.value());
    assert(it != u.end() && *it == x.value());
    return f[static_cast<size_t>(it - u.begin())];
  }
};

IsotonicCdf FitCurrentStatus(std::span<const PrivatizedRecord> records) {
  std::vector<std::pair<double, bool>> obs;
  obs.reserve(records.size());
  for (const PrivatizedRecord& r : records) obs.push_back({r.anchors()[0], r.choice() == 1});
  std::sort(obs.begin(), obs.end());
  IsotonicCdf out;
  std::vector<double> weight;
  std::vector<double> value;
  for (size_t i = 0; i < obs.size();) {
    size_t j = i;
    double ones = 0.0;
    for (; j < obs.size() && obs[j].first == obs[i].first; ++j) ones += obs[j].second;
    out.u.push_back(obs[i].first);
    weight.push_back(static_cast<double>(j - i));
    value.push_back(ones / static_cast<double>(j - i));
    i = j;
  }
  // Blocks of pooled points: [start, end), weight, mean.
  struct Block {
    size_t start, end;
    double w, mean;
  };
  std::vector<Block> blocks;
  for (size_t i = 0; i < value.size(); ++i) {
    blocks.push_back({i, i + 1, weight[i], value[i]});
    while (blocks.size() > 1 && blocks[blocks.size() - 2].mean >= blocks.back().mean) {
      Block b = blocks.back();
      blocks.pop_back();
      Block& a = blocks.back();
      a.mean = (a.w * a.mean + b.w * b.mean) / (a.w + b.w);
      a.w += b.w;
      a.end = b.end;
    }
  }
  out.f.resize(value.size());
  for (const Block& b : blocks) {
    for (size_t i = b.start; i < b.end; ++i) out.f[i] = b.mean;
  }
  return out;
}

}  // namespace

absl::StatusOr<NpmleResult> Npmle(std::span<const WireRecord> records, const NpmleOptions& opts) {
  const std::vector<PrivatizedRecord> kept = NonNull({records.begin(), records.end()});
  return Npmle(std::span<const PrivatizedRecord>(kept), opts);
}

absl::StatusOr<NpmleResult> Npmle(std::span<const PrivatizedRecord> records,
                                  const NpmleOptions& opts) {
  INTPRIV_ASSIGN_OR_RETURN(TurnbullSupport support, BuildTurnbullSupport(records));
  if (support.uninformative == records.size()) {
    return InvalidArgument("DegenerateSupport", "every record is the whole line");
  }
  const size_t atoms = support.atoms.size();
  std::vector<double> mass(atoms, 1.0 / static_cast<double>(atoms));
  std::vector<double> next(atoms);
  NpmleResult out;
  [[maybe_unused]] double loglik = -INFINITY;
  int it = 0;
  double delta = INFINITY;
  bool exact = false;
  if (opts.method == NpmleMethod::kCurrentStatus && !IsCurrentStatus(records)) {
    return InvalidArgument("WrongShape", "current-status solver needs single-anchor records");
  }
  if (opts.method != NpmleMethod::kEm && IsCurrentStatus(records)) {
    // Between innermost atoms the isotonic fit is flat, so differencing it
    // across each atom distributes the whole mass.
    const IsotonicCdf fit = FitCurrentStatus(records);
    for (size_t a = 0; a < atoms; ++a) {
      mass[a] = std::max(0.0, fit.At(support.atoms[a].hi) - fit.At(support.atoms[a].lo));
    }
    exact = true;
    delta = 0.0;
  }
  out.method = exact ? "current-status" : "em";
  while (!exact && it < opts.max_iter) {
    const double ll = SelfConsistencyStep(support.incidence, mass, next, opts.exec);
    if (!std::isfinite(ll)) {
      return FailedPrecondition("NonFiniteLikelihood", "a record lost all its mass");
    }
    // EM never decreases the likelihood; allow rounding noise.
    assert(ll >= loglik - 1e-9 * (1.0 + std::abs(loglik)));
    loglik = ll;
    if (opts.keep_trace) out.trace.push_back(ll);
    delta = 0.0;
    for (size_t a = 0; a < atoms; ++a) delta = std::max(delta, std::abs(next[a] - mass[a]));
    mass.swap(next);
    ++it;
    if (delta <= opts.tol) break;
  }
  // Likelihood at the returned masses.
  out.log_likelihood = SelfConsistencyStep(support.incidence, mass, next, opts.exec);
  out.iterations = it;
  out.converged = delta <= opts.tol;
  out.final_delta = delta;

  std::vector<std::pair<double, double>> located;
  double total = 0.0;
  for (size_t a = 0; a < atoms; ++a) {
    if (mass[a] < kPruneMass) continue;
    located.push_back({support.atoms[a].Location(), mass[a]});
    total += mass[a];
  }
  if (!(total > 0.0)) return FailedPrecondition("NonFiniteLikelihood", "all mass pruned");
  INTPRIV_ASSIGN_OR_RETURN(out.cdf, StepCdf::FromMasses(std::move(located)));
  out.support = std::move(support);
  out.masses = std::move(mass);
  return out;
}

nlohmann::json NpmleResult::ToJson() const {
  nlohmann::json jumps = nlohmann::json::array();
  for (const auto& j : cdf.jumps()) jumps.push_back({j.x, j.cdf});
  nlohmann::json out;
  out["cdf"] = std::move(jumps);
  out["log_likelihood"] = log_likelihood;
  out["method"] = method;
  out["iterations"] = iterations;
  out["converged"] = converged;
  out["final_delta"] = final_delta;
  return out;
}

std::string NpmleResult::ToCsv() const {
  std::string s = "x,F\n";
  for (const auto& j : cdf.jumps()) absl::StrAppendFormat(&s, "%.17g,%.17g\n", j.x, j.cdf);
  return s;
}

double SupNormDistance(const StepCdf& f_hat, const std::function<double(double)>& f) {
  double worst = 0.0;
  double prev = 0.0;
  for (const auto& j : f_hat.jumps()) {
    const double fx = f(j.x);
    worst = std::max({worst, std::abs(prev - fx), std::abs(j.cdf - fx)});
    prev = j.cdf;
  }
  return worst;
}

}  // namespace intpriv
