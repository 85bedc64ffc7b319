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

#include "intpriv/core/step_cdf.h"

#include <vector>

#include "gtest/gtest.h"
#include "intpriv/core/rng.h"

namespace intpriv {
namespace {

TEST(StepCdfTest, RightContinuousEvaluation) {
  auto f = StepCdf::FromJumps({{1.0, 0.25}, {2.0, 1.0}});
  ASSERT_TRUE(f.ok());
  EXPECT_EQ((*f)(0.999), 0.0);
  EXPECT_EQ((*f)(1.0), 0.25);
  EXPECT_EQ((*f)(1.5), 0.25);
  EXPECT_EQ((*f)(2.0), 1.0);
  EXPECT_EQ(f->LeftLimit(2.0), 0.25);
}

TEST(StepCdfTest, RejectsInvalidJumps) {
  EXPECT_FALSE(StepCdf::FromJumps({{1.0, 0.5}, {1.0, 1.0}}).ok());
  EXPECT_FALSE(StepCdf::FromJumps({{1.0, 0.5}, {2.0, 0.4}, {3.0, 1.0}}).ok());
  EXPECT_FALSE(StepCdf::FromJumps({{1.0, 0.5}}).ok());
  EXPECT_TRUE(StepCdf::FromJumps({{1.0, 1.0 - 1e-13}}).ok());
}

TEST(StepCdfTest, MassExamples) {
  auto unit = StepCdf::FromMasses({{0.5, 1.0}});
  EXPECT_DOUBLE_EQ(unit->Mass(Range::Between(0, 1)), 1.0);
  const std::vector<double> pts = {1, 2, 3, 4};
  auto emp = StepCdf::Empirical(pts);
  EXPECT_DOUBLE_EQ(emp->Mass(Range::Full()), 1.0);
  // Direct enumeration: 1 and 4 fall in (-inf,1] u (3,inf).
  EXPECT_DOUBLE_EQ(emp->Mass(Range::AtMost(1).Union(Range::Above(3))), 0.5);
}

TEST(StepCdfTest, FromMassesMergesAndNormalizes) {
  auto f = StepCdf::FromMasses({{2.0, 1.0}, {1.0, 1.0}, {2.0, 2.0}});
  ASSERT_TRUE(f.ok());
  ASSERT_EQ(f->jumps().size(), 2u);
  EXPECT_DOUBLE_EQ(f->MassAt(0), 0.25);
  EXPECT_DOUBLE_EQ(f->MassAt(1), 0.75);
}

TEST(StepCdfTest, PartitionMassesSumToOne) {
  Rng rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::pair<double, double>> masses;
    const int k = 1 + static_cast<int>(rng.Below(12));
    for (int i = 0; i < k; ++i) masses.push_back({rng.Uniform(-5, 5), rng.Uniform01()});
    auto f = StepCdf::FromMasses(masses);
    ASSERT_TRUE(f.ok());
    std::vector<double> anchors;
    double x = rng.Uniform(-6, -2);
    const int m = 2 + static_cast<int>(rng.Below(5));
    for (int i = 0; i < m; ++i) {
      x += rng.Uniform(0.1, 3);
      anchors.push_back(x);
    }
    // Include jump points as anchors half of the time.
    if (trial % 2 == 0) anchors.back() = std::max(anchors.back(), f->jumps().back().x);
    for (bool ring : {false, true}) {
      auto p = ring ? Partition::Ring(anchors) : Partition::Canonical(anchors);
      ASSERT_TRUE(p.ok());
      double total = 0.0;
      for (const Range& r : p->ranges()) total += f->Mass(r);
      EXPECT_NEAR(total, 1.0, 1e-10);
    }
  }
}

}  // namespace
}  // namespace intpriv
