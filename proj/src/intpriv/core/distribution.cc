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

#include "intpriv/core/distribution.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/normal.hpp>

#include "absl/strings/str_cat.h"
#include "intpriv/core/errors.h"

namespace intpriv {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool Positive(double v) { return std::isfinite(v) && v > 0.0; }

double MixtureCdf(const TwoGaussianMixtureLaw& m, double x) {
  return m.weight * NormalCdf((x - m.mean_a) / m.sigma) +
         (1.0 - m.weight) * NormalCdf((x - m.mean_b) / m.sigma);
}

// Solves Cdf(x) = p by bisection on a bracket known to contain the answer.
template <typename F>
double InvertByBisection(F cdf, double p, double lo, double hi) {
  for (int i = 0; i < 200 && hi - lo > 1e-15 * (1.0 + std::abs(lo) + std::abs(hi)); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double NormalCdf(double z) { return 0.5 * std::erfc(-z * kInvSqrt2); }

double NormalPdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

double NormalQuantile(double p) {
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

double MillsRatio(double x) {
  if (x < 25.0) return 0.5 * std::erfc(x * kInvSqrt2) / NormalPdf(x);
  // Continued fraction 1 / (x + 1 / (x + 2 / (x + 3 / ...))).
  double t = x;
  for (int k = 80; k >= 1; --k) t = x + k / t;
  return 1.0 / t;
}

absl::StatusOr<Distribution> Distribution::Uniform(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
    return InvalidArgument("InvalidSampler", "uniform needs finite a < b");
  }
  return Distribution(UniformLaw{a, b});
}

absl::StatusOr<Distribution> Distribution::Logistic(double loc, double scale) {
  if (!std::isfinite(loc) || !Positive(scale)) {
    return InvalidArgument("InvalidSampler", "logistic needs scale > 0");
  }
  return Distribution(LogisticLaw{loc, scale});
}

absl::StatusOr<Distribution> Distribution::Gaussian(double mean, double sd) {
  if (!std::isfinite(mean) || !Positive(sd)) {
    return InvalidArgument("InvalidSampler", "gaussian needs sd > 0");
  }
  return Distribution(GaussianLaw{mean, sd});
}

absl::StatusOr<Distribution> Distribution::TwoGaussianMixture(double weight,
                                                              double mean_a,
                                                              double mean_b,
                                                              double sigma) {
  if (!(weight >= 0.0 && weight <= 1.0) || !std::isfinite(mean_a) ||
      !std::isfinite(mean_b) || !Positive(sigma)) {
    return InvalidArgument("InvalidSampler",
                           "mixture needs weight in [0,1] and sigma > 0");
  }
  return Distribution(TwoGaussianMixtureLaw{weight, mean_a, mean_b, sigma});
}

absl::StatusOr<Distribution> Distribution::Grid(std::vector<double> x,
                                                std::vector<double> density) {
  if (x.size() < 2 || x.size() != density.size()) {
    return InvalidArgument("InvalidSampler",
                           "grid law needs >= 2 points and matching sizes");
  }
  for (size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !(density[i] >= 0.0) || !std::isfinite(density[i])) {
      return InvalidArgument("InvalidSampler", "grid values must be finite, density >= 0");
    }
    if (i > 0 && !(x[i - 1] < x[i])) {
      return InvalidArgument("InvalidSampler", "grid x must strictly increase");
    }
  }
  std::vector<double> cdf(x.size(), 0.0);
  for (size_t i = 1; i < x.size(); ++i) {
    cdf[i] = cdf[i - 1] + 0.5 * (density[i - 1] + density[i]) * (x[i] - x[i - 1]);
  }
  const double total = cdf.back();
  if (!(total > 0.0)) return InvalidArgument("InvalidSampler", "grid density has zero mass");
  for (double& d : density) d /= total;
  for (double& c : cdf) c /= total;
  cdf.back() = 1.0;
  return Distribution(GridLaw{std::move(x), std::move(density), std::move(cdf)});
}

std::string Distribution::Name() const {
  return std::visit(
      Overloaded{
          [](const UniformLaw& l) { return absl::StrCat("Uniform(", l.a, ", ", l.b, ")"); },
          [](const LogisticLaw& l) {
            return absl::StrCat("Logistic(", l.loc, ", ", l.scale, ")");
          },
          [](const GaussianLaw& l) {
            return absl::StrCat("Gaussian(", l.mean, ", ", l.sd, ")");
          },
          [](const TwoGaussianMixtureLaw& l) {
            return absl::StrCat("TwoGaussianMixture(", l.weight, ", ", l.mean_a, ", ",
                                l.mean_b, ", ", l.sigma, ")");
          },
          [](const GridLaw& l) { return absl::StrCat("Grid(", l.x.size(), " points)"); },
      },
      law_);
}

double Distribution::Cdf(double x) const {
  return std::visit(
      Overloaded{
          [x](const UniformLaw& l) { return std::clamp((x - l.a) / (l.b - l.a), 0.0, 1.0); },
          [x](const LogisticLaw& l) { return 1.0 / (1.0 + std::exp(-(x - l.loc) / l.scale)); },
          [x](const GaussianLaw& l) { return NormalCdf((x - l.mean) / l.sd); },
          [x](const TwoGaussianMixtureLaw& l) { return MixtureCdf(l, x); },
          [x](const GridLaw& l) {
            if (x <= l.x.front()) return 0.0;
            if (x >= l.x.back()) return 1.0;
            const size_t k =
                std::upper_bound(l.x.begin(), l.x.end(), x) - l.x.begin() - 1;
            const double h = l.x[k + 1] - l.x[k];
            const double t = x - l.x[k];
            const double slope = (l.density[k + 1] - l.density[k]) / h;
            return std::min(1.0, l.cdf[k] + l.density[k] * t + 0.5 * slope * t * t);
          },
      },
      law_);
}

double Distribution::Cdf(const ExtReal& x) const {
  if (x.is_neg_inf()) return 0.0;
  if (x.is_pos_inf()) return 1.0;
  return Cdf(x.value());
}

double Distribution::Pdf(double x) const {
  return std::visit(
      Overloaded{
          [x](const UniformLaw& l) {
            return (x > l.a && x <= l.b) ? 1.0 / (l.b - l.a) : 0.0;
          },
          [x](const LogisticLaw& l) {
            const double e = std::exp(-std::abs(x - l.loc) / l.scale);
            return e / (l.scale * (1.0 + e) * (1.0 + e));
          },
          [x](const GaussianLaw& l) { return NormalPdf((x - l.mean) / l.sd) / l.sd; },
          [x](const TwoGaussianMixtureLaw& l) {
            return (l.weight * NormalPdf((x - l.mean_a) / l.sigma) +
                    (1.0 - l.weight) * NormalPdf((x - l.mean_b) / l.sigma)) /
                   l.sigma;
          },
          [x](const GridLaw& l) {
            if (x < l.x.front() || x > l.x.back()) return 0.0;
            const size_t k = std::min<size_t>(
                std::upper_bound(l.x.begin(), l.x.end(), x) - l.x.begin() - 1,
                l.x.size() - 2);
            const double t = (x - l.x[k]) / (l.x[k + 1] - l.x[k]);
            return (1.0 - t) * l.density[k] + t * l.density[k + 1];
          },
      },
      law_);
}

double Distribution::Quantile(double p) const {
  return std::visit(
      Overloaded{
          [p](const UniformLaw& l) { return l.a + p * (l.b - l.a); },
          [p](const LogisticLaw& l) { return l.loc + l.scale * std::log(p / (1.0 - p)); },
          [p](const GaussianLaw& l) { return l.mean + l.sd * NormalQuantile(p); },
          [p](const TwoGaussianMixtureLaw& l) {
            const double span = 40.0 * l.sigma;
            return InvertByBisection([&l](double x) { return MixtureCdf(l, x); }, p,
                                     std::min(l.mean_a, l.mean_b) - span,
                                     std::max(l.mean_a, l.mean_b) + span);
          },
          [p](const GridLaw& l) {
            size_t k = std::upper_bound(l.cdf.begin(), l.cdf.end(), p) - l.cdf.begin();
            k = std::clamp<size_t>(k, 1, l.cdf.size() - 1) - 1;
            // Skip zero-mass segments so the quadratic below is well posed.
            while (k + 1 < l.cdf.size() - 1 && l.cdf[k + 1] <= p) ++k;
            const double h = l.x[k + 1] - l.x[k];
            const double d0 = l.density[k];
            const double s = 0.5 * (l.density[k + 1] - d0) / h;
            const double r = std::max(0.0, p - l.cdf[k]);
            const double denom = d0 + std::sqrt(std::max(0.0, d0 * d0 + 4.0 * s * r));
            double t = denom > 0.0 ? 2.0 * r / denom : 0.0;
            return l.x[k] + std::clamp(t, 0.0, h);
          },
      },
      law_);
}

double Distribution::Mass(const Range& r) const {
  double total = 0.0;
  for (const Interval& iv : r.parts()) total += Cdf(iv.hi) - Cdf(iv.lo);
  return std::clamp(total, 0.0, 1.0);
}

double Distribution::Sample(Rng& rng) const {
  return std::visit(
      Overloaded{
          [&rng](const UniformLaw& l) { return rng.Uniform(l.a, l.b); },
          [&rng](const LogisticLaw& l) { return rng.Logistic(l.loc, l.scale); },
          [&rng](const GaussianLaw& l) { return rng.Normal(l.mean, l.sd); },
          [&rng](const TwoGaussianMixtureLaw& l) {
            const double mean = rng.Bernoulli(l.weight) ? l.mean_a : l.mean_b;
            return rng.Normal(mean, l.sigma);
          },
          [this, &rng](const GridLaw&) { return Quantile(rng.Uniform01()); },
      },
      law_);
}

double Distribution::SampleTruncated(double lo, double hi, Rng& rng) const {
  const double u = rng.Uniform01();
  const double pl = Cdf(lo);
  const double ph = Cdf(hi);
  double x;
  if (!(ph - pl > 1e-300)) {
    x = lo + u * (hi - lo);
  } else {
    x = Quantile(pl + u * (ph - pl));
  }
  if (!(x > lo)) x = std::nextafter(lo, hi);
  if (x > hi) x = hi;
  return x;
}

double Distribution::SupportLo() const {
  return std::visit(
      Overloaded{
          [](const UniformLaw& l) { return l.a; },
          [](const LogisticLaw& l) { return l.loc - 28.0 * l.scale; },
          [](const GaussianLaw& l) { return l.mean - 7.5 * l.sd; },
          [](const TwoGaussianMixtureLaw& l) {
            return std::min(l.mean_a, l.mean_b) - 7.5 * l.sigma;
          },
          [](const GridLaw& l) { return l.x.front(); },
      },
      law_);
}

double Distribution::SupportHi() const {
  return std::visit(
      Overloaded{
          [](const UniformLaw& l) { return l.b; },
          [](const LogisticLaw& l) { return l.loc + 28.0 * l.scale; },
          [](const GaussianLaw& l) { return l.mean + 7.5 * l.sd; },
          [](const TwoGaussianMixtureLaw& l) {
            return std::max(l.mean_a, l.mean_b) + 7.5 * l.sigma;
          },
          [](const GridLaw& l) { return l.x.back(); },
      },
      law_);
}

}  // namespace intpriv
