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

#include "intpriv/core/noise_model.h"

#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "testing/oracles.h"

namespace intpriv {
namespace {

using ::intpriv::testing::GaussianDensity;
using ::intpriv::testing::LogisticDensity;
using ::intpriv::testing::Moments;
using ::intpriv::testing::PartialMeanOracle;

std::function<double(double)> DensityOf(const NoiseModel& nm) {
  const double s = nm.scale();
  if (nm.kind() == NoiseModel::Kind::kLogistic) {
    return [s](double x) { return LogisticDensity(x, s); };
  }
  return [s](double x) { return GaussianDensity(x, s); };
}

std::vector<NoiseModel> Models() {
  return {NoiseModel::StandardLogistic(), *NoiseModel::Make(NoiseModel::Kind::kLogistic, 2.0),
          NoiseModel::StandardGaussian(), *NoiseModel::Make(NoiseModel::Kind::kGaussian, 0.5)};
}

TEST(NoiseModelTest, PointValues) {
  const NoiseModel lg = NoiseModel::StandardLogistic();
  EXPECT_DOUBLE_EQ(lg.Cdf(0.0), 0.5);
  EXPECT_NEAR(lg.PartialMean(0.0), -std::log(2.0), 1e-15);
  const NoiseModel ga = NoiseModel::StandardGaussian();
  EXPECT_DOUBLE_EQ(ga.Cdf(0.0), 0.5);
  EXPECT_NEAR(ga.PartialMean(0.0), -1.0 / std::sqrt(2.0 * M_PI), 1e-15);
  const NoiseModel lg2 = *NoiseModel::Make(NoiseModel::Kind::kLogistic, 2.0);
  EXPECT_NEAR(lg2.Cdf(1.0), 0.6224593312018546, 1e-15);
}

TEST(NoiseModelTest, LimitsAtInfinity) {
  for (const NoiseModel& nm : Models()) {
    EXPECT_EQ(nm.Cdf(ExtReal::NegInf()), 0.0);
    EXPECT_EQ(nm.Cdf(ExtReal::PosInf()), 1.0);
    EXPECT_EQ(nm.PartialMean(ExtReal::NegInf()), 0.0);
    EXPECT_EQ(nm.PartialMean(ExtReal::PosInf()), 0.0);
  }
}

TEST(NoiseModelTest, RejectsBadScale) {
  EXPECT_FALSE(NoiseModel::Make(NoiseModel::Kind::kLogistic, 0.0).ok());
  EXPECT_FALSE(NoiseModel::Make(NoiseModel::Kind::kGaussian, -1.0).ok());
  EXPECT_FALSE(NoiseModel::Make(NoiseModel::Kind::kGaussian, NAN).ok());
}

TEST(NoiseModelTest, PartialMeanMatchesQuadrature) {
  for (const NoiseModel& nm : Models()) {
    const auto f = DensityOf(nm);
    for (double t = -10.0; t <= 10.0; t += 0.25) {
      const double s = t * nm.scale();
      EXPECT_NEAR(nm.PartialMean(s), PartialMeanOracle(f, s, nm.scale()), 1e-8)
          << nm.Name() << " s=" << s;
    }
  }
}

TEST(NoiseModelTest, VarianceMatchesQuadrature) {
  for (const NoiseModel& nm : Models()) {
    const auto m = Moments(DensityOf(nm), -testing::kInf, testing::kInf, nm.scale());
    EXPECT_NEAR(nm.Variance(), m.second, 1e-8 * nm.Variance());
  }
}

TEST(NoiseModelTest, ConditionalMeanMatchesQuadratureOnGrid) {
  for (const NoiseModel& nm : Models()) {
    const auto f = DensityOf(nm);
    const double s = nm.scale();
    std::vector<double> pts = {-testing::kInf};
    for (double t = -8.0; t <= 8.0; t += 1.0) pts.push_back(t * s);
    pts.push_back(testing::kInf);
    for (size_t i = 0; i < pts.size(); ++i) {
      for (size_t j = i + 1; j < pts.size(); ++j) {
        const ExtReal a = std::isinf(pts[i]) ? ExtReal::NegInf() : ExtReal(pts[i]);
        const ExtReal b = std::isinf(pts[j]) ? ExtReal::PosInf() : ExtReal(pts[j]);
        const auto m = Moments(f, pts[i], pts[j], s);
        EXPECT_NEAR(nm.ConditionalMean(a, b), m.mean, 1e-8)
            << nm.Name() << " (" << pts[i] << ", " << pts[j] << "]";
        EXPECT_NEAR(nm.ConditionalSecondMoment(a, b), m.second,
                    1e-7 * std::max(1.0, m.second))
            << nm.Name() << " (" << pts[i] << ", " << pts[j] << "]";
      }
    }
  }
}

TEST(NoiseModelTest, ConditionalMeanStaysInsideFarTails) {
  for (const NoiseModel& nm : Models()) {
    for (double t : {-40.0, -200.0, -800.0, 40.0, 200.0, 800.0}) {
      const double u = t * nm.scale();
      const double left = nm.ConditionalMean(ExtReal::NegInf(), ExtReal(u));
      const double right = nm.ConditionalMean(ExtReal(u), ExtReal::PosInf());
      EXPECT_TRUE(std::isfinite(left) && std::isfinite(right));
      EXPECT_LE(left, u);
      EXPECT_GT(right, u - 1e-12 * std::abs(u));
      const double mid = nm.ConditionalMean(ExtReal(u), ExtReal(u + nm.scale()));
      EXPECT_GE(mid, u);
      EXPECT_LE(mid, u + nm.scale());
    }
  }
}

TEST(NoiseModelTest, RingRangeMeanIsMassWeighted) {
  const NoiseModel nm = NoiseModel::StandardLogistic();
  const Range ring = Range::AtMost(-1).Union(Range::Above(2));
  const auto f = DensityOf(nm);
  const auto l = Moments(f, -testing::kInf, -1, 1);
  const auto r = Moments(f, 2, testing::kInf, 1);
  const double expected = (l.mass * l.mean + r.mass * r.mean) / (l.mass + r.mass);
  EXPECT_NEAR(nm.ConditionalMean(ring), expected, 1e-8);
}

TEST(NoiseModelTest, SecondMomentSurvivesTinyScales) {
  const double pi2_3 = 3.14159265358979323846 * 3.14159265358979323846 / 3.0;
  for (double s : {1e-3, 1e-6, 1e-9}) {
    const NoiseModel nm = *NoiseModel::Make(NoiseModel::Kind::kLogistic, s);
    // The whole law sits inside (-1, 2], so the truncation is invisible.
    EXPECT_NEAR(nm.ConditionalSecondMoment(ExtReal(-1), ExtReal(2)) / (s * s), pi2_3, 1e-6);
    // Far from the mode: within a few scales of the near end.
    EXPECT_NEAR(nm.ConditionalSecondMoment(ExtReal(1), ExtReal(2)), 1.0, 10 * s);
    EXPECT_NEAR(nm.ConditionalSecondMoment(ExtReal::NegInf(), ExtReal(-3)), 9.0, 10 * s);
  }
}

}  // namespace
}  // namespace intpriv
