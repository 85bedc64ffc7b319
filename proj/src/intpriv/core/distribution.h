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

#ifndef INTPRIV_CORE_DISTRIBUTION_H_
#define INTPRIV_CORE_DISTRIBUTION_H_

#include <string>
#include <variant>
#include <vector>

#include "absl/status/statusor.h"
#include "intpriv/core/range.h"
#include "intpriv/core/rng.h"

namespace intpriv {

struct UniformLaw {
  double a;
  double b;
};

struct LogisticLaw {
  double loc;
  double scale;
};

struct GaussianLaw {
  double mean;
  double sd;
};

// weight * N(mean_a, sigma^2) + (1 - weight) * N(mean_b, sigma^2).
struct TwoGaussianMixtureLaw {
  double weight;
  double mean_a;
  double mean_b;
  double sigma;
};

// Piecewise-linear density through (x[k], density[k]); normalized on
// construction. Zero outside [x.front(), x.back()].
struct GridLaw {
  std::vector<double> x;
  std::vector<double> density;
  std::vector<double> cdf;  // cumulative at each x, filled by Make().
};

// A univariate continuous law, used both for anchor sampling and as an
// analytic prior for Y.
class Distribution {
 public:
  using Law = std::variant<UniformLaw, LogisticLaw, GaussianLaw,
                           TwoGaussianMixtureLaw, GridLaw>;

  static absl::StatusOr<Distribution> Uniform(double a, double b);
  static absl::StatusOr<Distribution> Logistic(double loc, double scale);
  static absl::StatusOr<Distribution> Gaussian(double mean, double sd);
  static absl::StatusOr<Distribution> TwoGaussianMixture(double weight,
                                                         double mean_a,
                                                         double mean_b,
                                                         double sigma);
  static absl::StatusOr<Distribution> Grid(std::vector<double> x,
                                           std::vector<double> density);

  const Law& law() const { return law_; }
  std::string Name() const;

  double Cdf(double x) const;
  double Cdf(const ExtReal& x) const;
  double Pdf(double x) const;
  // Inverse CDF on (0, 1).
  double Quantile(double p) const;
  double Mass(const Range& r) const;

  double Sample(Rng& rng) const;
  // Draw from the law restricted to (lo, hi] by inverse-CDF sampling.
  // Falls back to uniform on (lo, hi] when the law puts no mass there.
  double SampleTruncated(double lo, double hi, Rng& rng) const;

  // Lower/upper points outside which the law has negligible (< 1e-12) mass.
  double SupportLo() const;
  double SupportHi() const;

 private:
  explicit Distribution(Law law) : law_(std::move(law)) {}
  Law law_;
};

// Standard normal helpers shared by several modules.
double NormalCdf(double z);
double NormalPdf(double z);
double NormalQuantile(double p);
// (1 - Phi(x)) / phi(x), accurate for all x >= 0.
double MillsRatio(double x);

}  // namespace intpriv

#endif  // INTPRIV_CORE_DISTRIBUTION_H_
