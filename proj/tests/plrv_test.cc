// Copyright 2026 The dpsem Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dpsem/plrv.h"

#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "dpsem/accountants.h"
#include "dpsem/normal.h"
#include "oracles.h"

namespace dpsem {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

TEST(NormalTest, QuantileMatchesHighPrecisionValues) {
  EXPECT_NEAR(NormalQuantile(0.975), 1.959963984540054, 1e-14);
  EXPECT_NEAR(NormalQuantile(0.3), -0.5244005127080408, 1e-14);
  EXPECT_NEAR(NormalQuantile(1e-10), -6.361340902404056, 1e-12);
  EXPECT_EQ(NormalQuantile(0.0), -kInf);
  EXPECT_EQ(NormalQuantile(1.0), kInf);
  EXPECT_THROW(NormalQuantile(1.5), std::domain_error);
}

TEST(NormalTest, QuantileInvertsCdf) {
  for (double p = 1e-12; p < 1; p *= 3.7) {
    EXPECT_NEAR(NormalCdf(NormalQuantile(p)) / p, 1.0, 1e-13) << p;
  }
}

TEST(PlrvTest, RandomizedResponseAtLog3) {
  const Plrv x = RandomizedResponsePlrv(std::log(3.0), true);
  ASSERT_EQ(x.atoms().size(), 2u);
  EXPECT_DOUBLE_EQ(x.atoms()[0].value, -std::log(3.0));
  EXPECT_NEAR(x.atoms()[0].prob, 0.25, 1e-15);
  EXPECT_DOUBLE_EQ(x.atoms()[1].value, std::log(3.0));
  EXPECT_NEAR(x.atoms()[1].prob, 0.75, 1e-15);
  EXPECT_EQ(x.infinity_mass(), 0.0);
}

TEST(PlrvTest, RandomizedResponseWithoutSensitiveBitIsPointMass) {
  for (double eps : {0.0, 0.3, 5.0}) {
    const Plrv x = RandomizedResponsePlrv(eps, false);
    ASSERT_EQ(x.atoms().size(), 1u);
    EXPECT_EQ(x.atoms()[0].value, 0.0);
    EXPECT_EQ(x.atoms()[0].prob, 1.0);
  }
}

TEST(PlrvTest, ZeroEpsilonMergesAtoms) {
  const Plrv x = RandomizedResponsePlrv(0.0, true);
  ASSERT_EQ(x.atoms().size(), 1u);
  EXPECT_NEAR(x.atoms()[0].prob, 1.0, 1e-15);
}

TEST(PlrvTest, NegativeEpsilonRejected) {
  EXPECT_THROW(RandomizedResponsePlrv(-1, true), std::invalid_argument);
  EXPECT_THROW(GeometricPlrv(-0.1, false), std::invalid_argument);
}

TEST(PlrvTest, GeometricMatchesRandomizedResponse) {
  EXPECT_TRUE(SameDistribution(GeometricPlrv(std::log(3.0), true),
                               RandomizedResponsePlrv(std::log(3.0), true), 0));
  const Plrv g = GeometricPlrv(1.0, true);
  EXPECT_NEAR(g.atoms()[1].prob, std::exp(1.0) / (1 + std::exp(1.0)), 1e-15);
  EXPECT_NEAR(g.atoms()[0].prob, 1 / (1 + std::exp(1.0)), 1e-15);
  EXPECT_EQ(GeometricPlrv(std::log(3.0), false).atoms().size(), 1u);
}

TEST(PlrvTest, GaussianShape) {
  const Plrv unit = GaussianPlrv(1.0);
  EXPECT_TRUE(unit.is_gaussian());
  EXPECT_EQ(unit.mean(), 0.5);
  EXPECT_EQ(unit.variance(), 1.0);
  const Plrv zero = GaussianPlrv(0.0);
  EXPECT_EQ(zero.mean(), 0.0);
  EXPECT_EQ(zero.variance(), 0.0);
  EXPECT_EQ(PureDpEpsilon(zero), 0.0);
  const Plrv prod = GaussianPlrv(std::sqrt(5.26));
  EXPECT_NEAR(prod.mean(), 2.63, 1e-14);
  EXPECT_NEAR(prod.variance(), 5.26, 1e-14);
}

TEST(PlrvTest, Sampling) {
  const Plrv x = SamplingPlrv(100, 10);
  ASSERT_EQ(x.atoms().size(), 1u);
  EXPECT_EQ(x.atoms()[0].value, 0.0);
  EXPECT_DOUBLE_EQ(x.atoms()[0].prob, 0.9);
  EXPECT_DOUBLE_EQ(x.infinity_mass(), 0.1);
  EXPECT_EQ(SamplingPlrv(7, 0).infinity_mass(), 0.0);
  EXPECT_EQ(SamplingPlrv(5, 5).infinity_mass(), 1.0);
  EXPECT_TRUE(SamplingPlrv(5, 5).atoms().empty());
  EXPECT_THROW(SamplingPlrv(5, 6), std::invalid_argument);
  EXPECT_EQ(PureDpEpsilon(x), kInf);
}

TEST(PlrvTest, ComposeRandomizedResponseTwice) {
  const double eps = 0.7;
  const Plrv rr = RandomizedResponsePlrv(eps, true);
  const Plrv both = Compose(rr, rr);
  const double d = (1 + std::exp(eps)) * (1 + std::exp(eps));
  ASSERT_EQ(both.atoms().size(), 3u);
  EXPECT_NEAR(both.atoms()[0].value, -2 * eps, 1e-15);
  EXPECT_NEAR(both.atoms()[0].prob, 1 / d, 1e-15);
  EXPECT_NEAR(both.atoms()[1].value, 0.0, 1e-15);
  EXPECT_NEAR(both.atoms()[1].prob, 2 * std::exp(eps) / d, 1e-15);
  EXPECT_NEAR(both.atoms()[2].value, 2 * eps, 1e-15);
  EXPECT_NEAR(both.atoms()[2].prob, std::exp(2 * eps) / d, 1e-15);
  EXPECT_NEAR(PureDpEpsilon(both), 2 * eps, 1e-15);
}

TEST(PlrvTest, ComposeIdentityAndGaussians) {
  const Plrv rr = RandomizedResponsePlrv(1.3, true);
  EXPECT_TRUE(SameDistribution(Compose(rr, Plrv::Discrete({{0.0, 1.0}})), rr, 1e-15));
  const Plrv g = Compose(GaussianPlrv(0.6), GaussianPlrv(1.1));
  const double m2 = 0.36 + 1.21;
  EXPECT_NEAR(g.mean(), m2 / 2, 1e-15);
  EXPECT_NEAR(g.variance(), m2, 1e-15);
  EXPECT_THROW(Compose(rr, GaussianPlrv(1.0)), std::invalid_argument);
}

TEST(PlrvTest, ComposeAbsorbsInfinity) {
  const Plrv x = Compose(SamplingPlrv(10, 2), SamplingPlrv(10, 5));
  EXPECT_NEAR(x.infinity_mass(), 1 - 0.8 * 0.5, 1e-15);
  EXPECT_NEAR(x.atoms()[0].prob, 0.4, 1e-15);
}

TEST(PlrvTest, CompositionIsAssociativeAndCommutative) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Plrv a = PlrvOfFinitePair(testing::RandomPair(3, rng));
    const Plrv b = PlrvOfFinitePair(testing::RandomPair(4, rng));
    const Plrv c = PlrvOfFinitePair(testing::RandomPair(2, rng));
    EXPECT_TRUE(SameDistribution(Compose(a, Compose(b, c)),
                                 Compose(Compose(a, b), c), 1e-10));
    EXPECT_TRUE(SameDistribution(Compose(a, b), Compose(b, a), 1e-10));
  }
}

TEST(PlrvTest, PureEpsilonIsSubadditive) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const Plrv a = PlrvOfFinitePair(testing::RandomPair(3, rng));
    const Plrv b = PlrvOfFinitePair(testing::RandomPair(3, rng));
    EXPECT_LE(PureDpEpsilon(Compose(a, b)),
              PureDpEpsilon(a) + PureDpEpsilon(b) + 1e-12);
  }
  for (double e1 : {0.1, 1.0}) {
    for (double e2 : {0.5, 2.0}) {
      EXPECT_NEAR(PureDpEpsilon(Compose(RandomizedResponsePlrv(e1, true),
                                        RandomizedResponsePlrv(e2, true))),
                  e1 + e2, 1e-14);
    }
  }
}

TEST(PlrvTest, FinitePairExamples) {
  const Plrv rr = PlrvOfFinitePair(FiniteMechanismPair::Make(
      Eigen::Vector2d(0.75, 0.25), Eigen::Vector2d(0.25, 0.75)));
  EXPECT_TRUE(SameDistribution(rr, RandomizedResponsePlrv(std::log(3.0), true), 1e-15));

  const Plrv same = PlrvOfFinitePair(FiniteMechanismPair::Make(
      Eigen::Vector3d(0.2, 0.3, 0.5), Eigen::Vector3d(0.2, 0.3, 0.5)));
  ASSERT_EQ(same.atoms().size(), 1u);
  EXPECT_EQ(same.atoms()[0].value, 0.0);

  const Plrv excl = PlrvOfFinitePair(FiniteMechanismPair::Make(
      Eigen::Vector3d(0.5, 0.5, 0), Eigen::Vector3d(0.25, 0.25, 0.5)));
  ASSERT_EQ(excl.atoms().size(), 1u);
  EXPECT_NEAR(excl.atoms()[0].value, std::log(2.0), 1e-15);
  EXPECT_NEAR(excl.atoms()[0].prob, 1.0, 1e-15);
  EXPECT_EQ(excl.infinity_mass(), 0.0);

  const Plrv inf = PlrvOfFinitePair(FiniteMechanismPair::Make(
      Eigen::Vector2d(0.9, 0.1), Eigen::Vector2d(1.0, 0.0)));
  EXPECT_NEAR(inf.infinity_mass(), 0.1, 1e-15);
}

TEST(PlrvTest, InvalidPairsRejected) {
  EXPECT_THROW(FiniteMechanismPair::Make(Eigen::Vector2d(0.5, 0.6),
                                         Eigen::Vector2d(0.5, 0.5)),
               std::invalid_argument);
  EXPECT_THROW(FiniteMechanismPair::Make(Eigen::Vector2d(0.5, 0.5),
                                         Eigen::Vector3d(0.5, 0.5, 0)),
               std::invalid_argument);
  EXPECT_THROW(Plrv::Discrete({{1.0, 0.5}}), std::invalid_argument);
}

TEST(PlrvTest, ApproxDeltaExamples) {
  const Plrv fwd = RandomizedResponsePlrv(std::log(3.0), true);
  EXPECT_NEAR(ApproxDpDelta(fwd, fwd, 0.0), 0.5, 1e-15);
  for (double eps : {std::log(3.0), 1.5, 3.0}) {
    EXPECT_EQ(ApproxDpDelta(fwd, fwd, eps), 0.0) << eps;
  }
  // Independent high-precision values of the Gaussian closed form.
  const Plrv g1 = GaussianPlrv(1.0);
  EXPECT_NEAR(ApproxDpDelta(g1, g1, 1.0), 0.12693673750664395, 1e-15);
  const Plrv g = GaussianPlrv(std::sqrt(5.26));
  EXPECT_NEAR(ApproxDpDelta(g, g, 3.0), 0.29435048268575588, 1e-15);
  EXPECT_THROW(ApproxDpDelta(g, g1, 1.0), std::invalid_argument);
}

TEST(PlrvTest, ApproxDeltaIsTotalVariationAtZeroAndMonotone) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const FiniteMechanismPair pair = testing::RandomPair(5, rng);
    const Plrv fwd = PlrvOfFinitePair(pair);
    const Plrv rev = PlrvOfFinitePair(pair.Reversed());
    const double tv = 0.5 * (pair.p1 - pair.p2).cwiseAbs().sum();
    EXPECT_NEAR(ApproxDpDelta(fwd, rev, 0.0), tv, 1e-12);
    double prev = 1.0;
    for (double eps = 0; eps < 4; eps += 0.05) {
      const double d = ApproxDpDelta(fwd, rev, eps);
      EXPECT_LE(d, prev + 1e-15);
      prev = d;
    }
  }
}

TEST(PlrvTest, TailProbabilityOrderingAfterPostProcessing) {
  // M* releases two randomized-response bits; A1 keeps one bit and A2
  // discards both. Post-processing can increase the tail at eps/2.
  const double eps = 1.0;
  const double both = TailProbability(
      Compose(RandomizedResponsePlrv(eps, true), RandomizedResponsePlrv(eps, true)),
      eps / 2);
  const double one = TailProbability(RandomizedResponsePlrv(eps, true), eps / 2);
  const double none = TailProbability(RandomizedResponsePlrv(eps, false), eps / 2);
  EXPECT_NEAR(both, std::exp(2 * eps) / std::pow(1 + std::exp(eps), 2), 1e-15);
  EXPECT_NEAR(one, std::exp(eps) / (1 + std::exp(eps)), 1e-15);
  EXPECT_EQ(none, 0.0);
  EXPECT_LT(none, both);
  EXPECT_LT(both, one);
}

TEST(PlrvTest, TailAtInfinity) {
  EXPECT_EQ(TailProbability(RandomizedResponsePlrv(1, true), kInf), 0.0);
  EXPECT_DOUBLE_EQ(TailProbability(SamplingPlrv(10, 3), kInf), 0.3);
}

TEST(PlrvTest, RenyiSumMatchesExpectation) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 50; ++trial) {
    const FiniteMechanismPair pair = testing::RandomPair(4, rng);
    for (double alpha : {1.5, 2.0, 7.0}) {
      const double via_plrv =
          std::log(ExpectedExpLoss(PlrvOfFinitePair(pair), alpha - 1)) / (alpha - 1);
      EXPECT_NEAR(via_plrv, RenyiDivergence(pair, alpha), 1e-12);
    }
  }
}

}  // namespace
}  // namespace dpsem
