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

#include "intpriv/coverage/design.h"

#include <cmath>

#include "absl/strings/str_cat.h"
#include "intpriv/core/errors.h"

namespace intpriv {

namespace {

constexpr size_t kGrid = size_t{1} << 16;
constexpr double kTailQuantile = 1e-3;
constexpr double kSigmaFraction = 1e-4;

// Midpoint rule on (0, 1) in the probability scale x = F(u). With
// H_j(x) = P(F(U_j) <= x) = G_j(F^{-1}(x)):
//   E A = int (1 - H),  E A^2 = int 2x (1 - H),  E max(A, B) = int (1 - H_A H_B).
class ProbabilityGrid {
 public:
  explicit ProbabilityGrid(const Prior& prior) : q_(kGrid) {
    for (size_t k = 0; k < kGrid; ++k) q_[k] = prior.Quantile(X(k));
  }

  double Tau(const std::vector<Distribution>& laws) const {
    const double h = 1.0 / static_cast<double>(kGrid);
    if (laws.size() == 1) {
      double ea = 0.0, ea2 = 0.0;
      for (size_t k = 0; k < kGrid; ++k) {
        const double s = 1.0 - laws[0].Cdf(q_[k]);
        ea += s;
        ea2 += 2.0 * X(k) * s;
      }
      ea *= h;
      ea2 *= h;
      return 2.0 * ea2 - 2.0 * ea + 1.0;
    }
    // s^2 + (t - s)^2 + (1 - t)^2 with s = min, t = max of (A, B) expands to
    // 2A^2 + 2B^2 - 2AB - 2 max(A, B) + 1.
    double ea = 0.0, eb = 0.0, ea2 = 0.0, eb2 = 0.0, emax = 0.0;
    for (size_t k = 0; k < kGrid; ++k) {
      const double ha = laws[0].Cdf(q_[k]);
      const double hb = laws[1].Cdf(q_[k]);
      ea += 1.0 - ha;
      eb += 1.0 - hb;
      ea2 += 2.0 * X(k) * (1.0 - ha);
      eb2 += 2.0 * X(k) * (1.0 - hb);
      emax += 1.0 - ha * hb;
    }
    ea *= h;
    eb *= h;
    ea2 *= h;
    eb2 *= h;
    emax *= h;
    return 2.0 * ea2 + 2.0 * eb2 - 2.0 * ea * eb - 2.0 * emax + 1.0;
  }

 private:
  static double X(size_t k) { return (static_cast<double>(k) + 0.5) / static_cast<double>(kGrid); }
  std::vector<double> q_;
};

}  // namespace

absl::StatusOr<double> QuadratureCoverage(const std::vector<Distribution>& anchor_laws,
                                          const Prior& prior) {
  if (anchor_laws.empty() || anchor_laws.size() > 2) {
    return InvalidArgument("Unsupported", "quadrature coverage takes one or two anchors");
  }
  return ProbabilityGrid(prior).Tau(anchor_laws);
}

absl::StatusOr<AnchorDesign> DesignAnchorForCoverage(double target, const Prior& prior,
                                                     MechanismFamily family) {
  const bool one = family == MechanismFamily::kCaseOne;
  const double floor = one ? 0.5 : 1.0 / 3.0;
  if (!(target > floor && target < 1.0)) {
    return InvalidArgument("Unachievable",
                           absl::StrCat("target ", target, " outside (", floor, ", 1)"));
  }
  const double mu_tail = prior.Quantile(kTailQuantile);
  const double spread = prior.Quantile(1.0 - kTailQuantile) - mu_tail;
  if (!(spread > 0.0) || !std::isfinite(spread)) {
    return InvalidArgument("Unachievable", "prior has no spread");
  }
  const double sigma = kSigmaFraction * spread;
  std::vector<double> centers;
  if (one) {
    centers = {prior.Quantile(0.5)};
  } else {
    centers = {prior.Quantile(1.0 / 3.0), prior.Quantile(2.0 / 3.0)};
  }
  const ProbabilityGrid grid(prior);
  const auto laws_at = [&](double pi1) -> absl::StatusOr<std::vector<Distribution>> {
    std::vector<Distribution> laws;
    for (double c : centers) {
      INTPRIV_ASSIGN_OR_RETURN(Distribution d,
                               Distribution::TwoGaussianMixture(pi1, mu_tail, c, sigma));
      laws.push_back(std::move(d));
    }
    return laws;
  };
  const auto tau_at = [&](double pi1) -> absl::StatusOr<double> {
    INTPRIV_ASSIGN_OR_RETURN(auto laws, laws_at(pi1));
    return grid.Tau(laws);
  };
  INTPRIV_ASSIGN_OR_RETURN(const double lo_tau, tau_at(0.0));
  INTPRIV_ASSIGN_OR_RETURN(const double hi_tau, tau_at(1.0));
  if (target > hi_tau) {
    return InvalidArgument("Unachievable",
                           absl::StrCat("target ", target, " above the reachable maximum ",
                                        hi_tau));
  }
  double lo = 0.0, hi = 1.0, best = 0.0, best_tau = lo_tau;
  if (target > lo_tau) {
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      INTPRIV_ASSIGN_OR_RETURN(const double t, tau_at(mid));
      (t < target ? lo : hi) = mid;
      best = mid;
      best_tau = t;
      if (std::abs(t - target) < 1e-9) break;
    }
  }
  INTPRIV_ASSIGN_OR_RETURN(auto laws, laws_at(best));
  absl::StatusOr<AnchorSampler> sampler = one ? AnchorSampler::Iid(laws[0], 1)
                                              : AnchorSampler::PerAnchor(laws);
  if (!sampler.ok()) return sampler.status();
  return AnchorDesign{*std::move(sampler), best_tau, best, sigma, mu_tail, centers};
}

}  // namespace intpriv
