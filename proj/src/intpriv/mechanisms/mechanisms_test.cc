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

#include "intpriv/mechanisms/mechanisms.h"

#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "intpriv/core/errors.h"
#include "intpriv/mechanisms/progressive.h"

namespace intpriv {
namespace {

Distribution Unif(double a, double b) { return *Distribution::Uniform(a, b); }
Distribution Logis(double s) { return *Distribution::Logistic(0, s); }

MechanismConfig Canonical(size_t m, Distribution law,
                          AcceptableRegion acc = AcceptableRegion::None()) {
  return *MechanismConfig::Make(Topology::kCanonical, m, *AnchorSampler::Iid(law, m - 1), acc);
}

MechanismConfig Ring(size_t q, Distribution law) {
  return *MechanismConfig::Make(Topology::kRing, q, *AnchorSampler::Iid(law, q));
}

TEST(CaseOneTest, Examples) {
  const std::vector<double> u20 = {20};
  auto r = PrivatizeWithAnchors(10, u20, Topology::kCanonical);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->choice(), 1u);
  EXPECT_EQ(r->chosen_range(), Range::AtMost(20));
  EXPECT_FALSE(r->exact());
  const std::vector<double> u10 = {10};
  EXPECT_EQ(PrivatizeWithAnchors(10, u10, Topology::kCanonical)->choice(), 1u);
}

TEST(CaseOneTest, ChoiceFrequencyMatchesAnchorLaw) {
  // P(y <= U) = 1 - 0.3 for U ~ Unif(0, 1).
  const AnchorSampler s = *AnchorSampler::Iid(Unif(0, 1), 1);
  Rng rng(2024);
  int ones = 0;
  constexpr int kDraws = 1000000;
  for (int i = 0; i < kDraws; ++i) ones += PrivatizeCaseOne(0.3, s, rng)->choice() == 1;
  EXPECT_NEAR(static_cast<double>(ones) / kDraws, 0.7, 0.002);
}

TEST(CanonicalTest, Examples) {
  const std::vector<double> a = {41, 85};
  auto r = PrivatizeWithAnchors(60, a, Topology::kCanonical);
  EXPECT_EQ(r->chosen_range(), Range::Between(41, 85));
  EXPECT_FALSE(r->exact());

  // Two anchors around a drawn center, middle range acceptable.
  const MechanismConfig m1 = *MechanismConfig::Make(
      Topology::kCanonical, 3, *AnchorSampler::Centered(Unif(60, 60.0 + 1e-9), {-1, 1}),
      AcceptableRegion::Indices({2}));
  Rng rng(1);
  auto e = Privatize(60.5, m1, rng);
  ASSERT_TRUE(e.ok());
  ASSERT_TRUE(e->exact());
  EXPECT_EQ(*e->exact(), 60.5);
  EXPECT_FALSE(Privatize(70, m1, rng)->exact());
}

TEST(CanonicalTest, TwoWayReducesToCaseOne) {
  const MechanismConfig cfg = Canonical(2, Logis(2));
  for (uint64_t seed = 0; seed < 200; ++seed) {
    Rng a(seed), b(seed);
    const double y = -3.0 + 0.03 * seed;
    EXPECT_EQ(*Privatize(y, cfg, a), *PrivatizeCaseOne(y, cfg.sampler(), b));
  }
}

TEST(RingTest, Examples) {
  const std::vector<double> a = {0, 10};
  auto r = PrivatizeWithAnchors(-5, a, Topology::kRing);
  EXPECT_EQ(r->choice(), 1u);
  EXPECT_EQ(r->chosen_range(), Range::AtMost(0).Union(Range::Above(10)));
  EXPECT_EQ(PrivatizeWithAnchors(5, a, Topology::kRing)->chosen_range(), Range::Between(0, 10));
  const std::vector<double> b = {0, 5, 10};
  auto r3 = PrivatizeWithAnchors(7, b, Topology::kRing);
  EXPECT_EQ(r3->choice(), 3u);
  EXPECT_EQ(r3->chosen_range(), Range::Between(5, 10));
}

TEST(ConfigTest, Validation) {
  EXPECT_FALSE(MechanismConfig::Make(Topology::kCanonical, 3,
                                     *AnchorSampler::Iid(Unif(0, 1), 1)).ok());
  EXPECT_FALSE(MechanismConfig::Make(Topology::kRing, 1, *AnchorSampler::Iid(Unif(0, 1), 1)).ok());
  EXPECT_TRUE(MechanismConfig::Make(Topology::kRing, 2, *AnchorSampler::Iid(Unif(0, 1), 2)).ok());
  auto bad_sel = MechanismConfig::Make(Topology::kCanonical, 2, *AnchorSampler::Iid(Unif(0, 1), 1),
                                       {}, SelectiveParams{1.5, 0.3, Prior(Unif(0, 1))});
  EXPECT_EQ(ErrorKind(bad_sel.status()), "ValidationError");
}

TEST(ConfigTest, JsonRoundTrip) {
  ProgressiveParams pp;
  pp.max_rounds = 3;
  pp.tau = 0.2;
  pp.prior = Prior(Unif(0, 150));
  const std::vector<MechanismConfig> cfgs = {
      Canonical(3, Logis(1), AcceptableRegion::Fixed(Range::Between(0, 1))),
      Ring(3, *Distribution::TwoGaussianMixture(0.3, -1, 1, 0.5)),
      *MechanismConfig::Make(Topology::kCanonical, 2, *AnchorSampler::Iid(Unif(0, 150), 1), {},
                             std::nullopt, pp),
      *MechanismConfig::Make(Topology::kCanonical, 2, *AnchorSampler::Iid(Unif(0, 1), 1), {},
                             SelectiveParams{0.6, 0.3, Prior(Unif(0, 1))}),
      Canonical(2, Unif(1, 3)).WithTransform(MonotoneTransform::Exp()),
      *MechanismConfig::Make(Topology::kCanonical, 3,
                             *AnchorSampler::Centered(Logis(1), {-1, 1}),
                             AcceptableRegion::Indices({2})),
  };
  for (const auto& cfg : cfgs) {
    const auto j = cfg.ToJson();
    auto back = MechanismConfig::FromJson(j);
    ASSERT_TRUE(back.ok()) << back.status() << j.dump();
    EXPECT_EQ(back->ToJson(), j);
  }
  EXPECT_EQ(ErrorKind(MechanismConfig::FromJson({{"sampler", {{"law", {{"kind", "nope"}}}}}})
                          .status()),
            "ParseError");
}

TEST(EnsembleTest, Examples) {
  const std::vector<double> u5 = {5}, u2 = {2}, u7 = {7};
  const auto a = *PrivatizeWithAnchors(3, u5, Topology::kCanonical);
  const auto b = *PrivatizeWithAnchors(3, u2, Topology::kCanonical);
  auto e = Ensemble(a, b);
  ASSERT_TRUE(e.ok());
  EXPECT_EQ(e->chosen_range(), Range::Between(2, 5));
  EXPECT_EQ(e->partition().size(), 3u);

  const auto c = *PrivatizeWithAnchors(8, u7, Topology::kCanonical);
  EXPECT_EQ(ErrorKind(Ensemble(a, c).status()), "InconsistentRecords");

  const std::vector<double> u0 = {0}, u1 = {1};
  auto z = Ensemble(*PrivatizeWithAnchors(0.5, u0, Topology::kCanonical),
                    *PrivatizeWithAnchors(0.5, u1, Topology::kCanonical));
  EXPECT_EQ(z->chosen_range(), Range::Between(0, 1));
}

TEST(EnsembleTest, ExactValues) {
  const std::vector<double> a = {0, 2};
  const auto with_exact =
      *PrivatizeWithAnchors(1, a, Topology::kCanonical, AcceptableRegion::Indices({2}));
  const std::vector<double> u = {1.5};
  const auto plain = *PrivatizeWithAnchors(1, u, Topology::kCanonical);
  auto e = Ensemble(plain, with_exact);
  ASSERT_TRUE(e.ok());
  EXPECT_EQ(*e->exact(), 1.0);
  const auto other =
      *PrivatizeWithAnchors(0.5, a, Topology::kCanonical, AcceptableRegion::Indices({2}));
  EXPECT_EQ(ErrorKind(Ensemble(with_exact, other).status()), "InconsistentRecords");
}

TEST(EnsembleTest, CommutativeAndAssociative) {
  const std::vector<MechanismConfig> cfgs = {Canonical(2, Logis(2)), Canonical(3, Unif(-3, 3)),
                                             Ring(2, Logis(1)), Ring(3, Unif(-4, 4))};
  Rng rng(99);
  for (int trial = 0; trial < 2000; ++trial) {
    const double y = rng.Uniform(-3, 3);
    const auto& ca = cfgs[rng.Below(cfgs.size())];
    const auto& cb = cfgs[rng.Below(cfgs.size())];
    const auto& cc = cfgs[rng.Below(cfgs.size())];
    const auto a = *Privatize(y, ca, rng);
    const auto b = *Privatize(y, cb, rng);
    const auto c = *Privatize(y, cc, rng);
    const auto ab = *Ensemble(a, b);
    const auto ba = *Ensemble(b, a);
    EXPECT_EQ(ab.chosen_range(), ba.chosen_range());
    EXPECT_EQ(ab.partition().ranges(), ba.partition().ranges());
    const auto left = *Ensemble(ab, c);
    const auto right = *Ensemble(a, *Ensemble(b, c));
    EXPECT_EQ(left.chosen_range(), right.chosen_range());
    EXPECT_EQ(left.exact(), right.exact());
    EXPECT_TRUE(left.chosen_range().Contains(y));
  }
}

TEST(PullbackTest, Examples) {
  const auto affine = *MonotoneTransform::Affine(2, 1);
  EXPECT_EQ(affine.Inverse(3).value(), 1.0);
  const auto ex = MonotoneTransform::Exp();
  EXPECT_NEAR(ex.Inverse(1).value(), 0.0, 1e-15);
  EXPECT_NEAR(ex.Inverse(std::exp(1.0)).value(), 1.0, 1e-15);
  EXPECT_TRUE(ex.Inverse(-1).is_neg_inf());

  // Anchor fixed at 3 on the g-scale.
  const MechanismConfig cfg =
      *Pullback(Canonical(2, Unif(3, 3 + 1e-12)), affine);
  Rng rng(5);
  auto r = Privatize(0.5, cfg, rng);
  EXPECT_NEAR(r->anchors()[0], 1.0, 1e-11);
  EXPECT_EQ(r->choice(), 1u);
  EXPECT_EQ(ErrorKind(Pullback(cfg, affine).status()), "Unsupported");
}

TEST(PullbackTest, MatchesPrivatizingTransformedValue) {
  const MechanismConfig base = Canonical(3, Unif(-1, 3));
  const MechanismConfig pulled = *Pullback(base, MonotoneTransform::Exp());
  for (uint64_t seed = 0; seed < 2000; ++seed) {
    Rng a(seed), b(seed);
    const double y = -2.0 + 0.002 * seed;
    const auto on_g = *Privatize(std::exp(y), base, a);
    const auto back = *Privatize(y, pulled, b);
    EXPECT_TRUE(back.chosen_range().Contains(y));
    EXPECT_EQ(MonotoneTransform::Exp().PullBack(on_g.chosen_range()), back.chosen_range());
  }
}

TEST(PullbackTest, RejectsNonMonotoneTables) {
  EXPECT_EQ(ErrorKind(MonotoneTransform::Table({0, 1, 2}, {0, 2, 1}).status()), "NonMonotone");
  EXPECT_EQ(ErrorKind(MonotoneTransform::Affine(-1, 0).status()), "NonMonotone");
  EXPECT_EQ(ErrorKind(MonotoneTransform::OddPower(2).status()), "NonMonotone");
  auto t = MonotoneTransform::Table({0, 1, 2}, {0, 1, 4});
  ASSERT_TRUE(t.ok());
  for (double y : {-1.0, 0.5, 1.5, 3.0}) EXPECT_NEAR(t->Inverse(t->Apply(y)).value(), y, 1e-12);
}

TEST(SelectiveTest, DegenerateGates) {
  const auto law = Unif(0, 1);
  auto open = *MechanismConfig::Make(Topology::kCanonical, 2, *AnchorSampler::Iid(law, 1), {},
                                     SelectiveParams{0.0, 1.0, Prior(law)});
  auto closed = *MechanismConfig::Make(Topology::kCanonical, 2, *AnchorSampler::Iid(law, 1), {},
                                       SelectiveParams{1.0, 1.0, Prior(law)});
  for (uint64_t seed = 0; seed < 500; ++seed) {
    Rng a(seed), b(seed), c(seed);
    const double y = 0.002 * seed;
    auto s = *PrivatizeSelective(y, open, a);
    ASSERT_TRUE(s.emitted);
    EXPECT_EQ(std::get<PrivatizedRecord>(s.record), *Privatize(y, open, b));
    EXPECT_FALSE(PrivatizeSelective(y, closed, c)->emitted);
  }
}

TEST(SelectiveTest, EmissionRate) {
  // Y, U ~ Unif(0, 1): L = U on {Y <= U} and 1 - U otherwise, so
  // P(L >= 0.6) = (1 - 0.6^2) / 2 + (0.4 - 0.4^2 / 2) = 0.64.
  const auto law = Unif(0, 1);
  auto cfg = *MechanismConfig::Make(Topology::kCanonical, 2, *AnchorSampler::Iid(law, 1), {},
                                    SelectiveParams{0.6, 0.3, Prior(law)});
  Rng rng(77);
  constexpr int kDraws = 1000000;
  int emitted = 0;
  for (int i = 0; i < kDraws; ++i) {
    const double y = rng.Uniform01();
    emitted += PrivatizeSelective(y, cfg, rng)->emitted;
  }
  EXPECT_NEAR(static_cast<double>(emitted) / kDraws, 0.3 * 0.64, 0.003);
}

MechanismConfig ProgressiveCfg(int rounds, double tau = 0.0) {
  ProgressiveParams pp;
  pp.max_rounds = rounds;
  pp.tau = tau;
  if (tau > 0) pp.prior = Prior(Unif(0, 100));
  return *MechanismConfig::Make(Topology::kCanonical, 2, *AnchorSampler::Iid(Unif(0, 100), 1),
                                {}, std::nullopt, pp);
}

TEST(ProgressiveTest, NarrowsToIntersectionOfAnswers) {
  auto s = *ProgressiveSession::Start(0, 100, ProgressiveCfg(3));
  Rng rng(8);
  auto q1 = *s.Begin(rng);
  EXPECT_EQ(q1.round, 1);
  ASSERT_EQ(q1.choices.size(), 2u);
  auto r1 = *s.Step(ProgressiveAnswer::Choose(1), rng);  // "<= u1"
  ASSERT_TRUE(r1.next);
  const double u1 = q1.anchors[0];
  EXPECT_EQ(s.current_range(), Range::Between(0, u1));
  EXPECT_GT(r1.next->anchors[0], 0.0);
  EXPECT_LT(r1.next->anchors[0], u1);
  const double u2 = r1.next->anchors[0];
  auto r2 = *s.Step(ProgressiveAnswer::Choose(2), rng);  // "> u2"
  EXPECT_EQ(s.current_range(), Range::Between(u2, u1));
  Range meet = Range::Full();
  for (const auto& z : s.history()) meet = meet.Intersect(z.chosen_range());
  EXPECT_EQ(meet.Intersect(Range::Between(0, 100)), s.current_range());
  auto r3 = *s.Step(ProgressiveAnswer::Choose(1), rng);
  EXPECT_EQ(r3.status, ProgressiveStatus::kDone);
  EXPECT_FALSE(r3.next);
  EXPECT_EQ(ErrorKind(s.Step(ProgressiveAnswer::Choose(1), rng).status()), "SessionClosed");
  auto collected = *s.Collected();
  const auto& rec = std::get<PrivatizedRecord>(collected);
  EXPECT_EQ(rec.chosen_range(), s.current_range());
  (void)r2;
}

TEST(ProgressiveTest, OptOutAndTauStops) {
  Rng rng(3);
  auto s = *ProgressiveSession::Start(0, 100, ProgressiveCfg(3));
  s.Begin(rng).IgnoreError();
  EXPECT_EQ(s.Step(ProgressiveAnswer::OptOut(), rng)->status, ProgressiveStatus::kNullResponse);
  EXPECT_TRUE(std::holds_alternative<NullRecord>(*s.Collected()));
  EXPECT_TRUE(s.history().empty());

  // With tau = 0.99 no narrowed range survives: round 1 yields null.
  auto t = *ProgressiveSession::Start(0, 100, ProgressiveCfg(3, 0.99));
  t.Begin(rng).IgnoreError();
  EXPECT_EQ(t.Step(ProgressiveAnswer::Choose(1), rng)->status, ProgressiveStatus::kNullResponse);

  // Opting out later keeps the last accepted range.
  auto u = *ProgressiveSession::Start(0, 100, ProgressiveCfg(3));
  u.Begin(rng).IgnoreError();
  u.Step(ProgressiveAnswer::Choose(2), rng).IgnoreError();
  const Range kept = u.current_range();
  EXPECT_EQ(u.Step(ProgressiveAnswer::OptOut(), rng)->status, ProgressiveStatus::kDone);
  EXPECT_EQ(std::get<PrivatizedRecord>(*u.Collected()).chosen_range(), kept);
}

// Every mechanism reports a range holding y, and exact equals y.
TEST(FidelityTest, AllMechanisms) {
  ProgressiveParams pp;
  pp.max_rounds = 3;
  const auto prog = *MechanismConfig::Make(Topology::kCanonical, 2,
                                           *AnchorSampler::Iid(Unif(-5, 5), 1), {}, std::nullopt,
                                           pp);
  const std::vector<MechanismConfig> cfgs = {
      Canonical(2, Logis(2)),
      Canonical(3, Logis(1), AcceptableRegion::Indices({2})),
      Canonical(5, Unif(-4, 4), AcceptableRegion::Fixed(Range::Between(-0.5, 0.5))),
      Ring(2, Logis(1)),
      Ring(3, Unif(-3, 3)),
      *Pullback(Canonical(3, Unif(-1, 20)), MonotoneTransform::Exp()),
      *Pullback(Ring(2, Unif(0, 1)), MonotoneTransform::LogisticLink()),
      *Pullback(Canonical(2, Logis(8)), *MonotoneTransform::OddPower(3)),
  };
  for (uint64_t seed = 0; seed < 10000; ++seed) {
    Rng rng(DeriveSeed(11, {seed}));
    const double y = rng.Uniform(-4.9, 4.9);
    for (const auto& cfg : cfgs) {
      const auto r = *Privatize(y, cfg, rng);
      ASSERT_TRUE(r.chosen_range().Contains(y)) << cfg.ToJson().dump() << " y=" << y;
      if (r.exact()) ASSERT_EQ(*r.exact(), y);
    }
    auto s = *ProgressiveSession::Start(-5, 5, prog);
    auto q = s.Begin(rng);
    while (s.status() == ProgressiveStatus::kActive) {
      auto step = *s.Step(TruthfulAnswer(*s.pending(), y), rng);
      (void)step;
      ASSERT_TRUE(s.current_range().Contains(y));
    }
    ASSERT_TRUE(std::get<PrivatizedRecord>(*s.Collected()).chosen_range().Contains(y));
  }
}

TEST(DeterminismTest, SameSeedSameBytes) {
  const MechanismConfig cfg = Ring(3, Logis(1));
  for (uint64_t seed = 0; seed < 100; ++seed) {
    Rng a(seed), b(seed);
    EXPECT_EQ(ToJsonLine(*Privatize(0.25, cfg, a)), ToJsonLine(*Privatize(0.25, cfg, b)));
  }
}

TEST(PostProcessingTest, AppendingFieldsKeepsRange) {
  Rng rng(4);
  const auto r = *Privatize(1.0, Canonical(3, Logis(1)), rng);
  const auto post = r.WithFeatures({1, 2, 3}).WithMeta({{"note", "derived"}});
  EXPECT_EQ(post.chosen_range(), r.chosen_range());
  EXPECT_EQ(post.partition(), r.partition());
  EXPECT_EQ(post.exact(), r.exact());
}

}  // namespace
}  // namespace intpriv
