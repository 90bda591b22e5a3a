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

#include "dpsem/dgauss.h"

#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "dpsem/census.h"
#include "dpsem/tradeoff.h"

namespace dpsem {
namespace {

TEST(DgaussTest, PmfOracleValues) {
  // Independent high-precision series evaluations.
  EXPECT_NEAR(DgaussPmf(0, {1.0}), 0.3989422782668617, 1e-15);
  EXPECT_NEAR(DgaussPmf(3, {2.5}), 0.041707100072566015, 1e-15);
  EXPECT_THROW(DgaussPmf(0, {0.0}), std::invalid_argument);
  EXPECT_THROW(DgaussPmf(0, {-1.0}), std::invalid_argument);
}

TEST(DgaussTest, PmfSymmetricAndNormalized) {
  for (double s2 : {0.05, 0.3, 1.0, 4.0, 380.0}) {
    double total = 0;
    for (int64_t k = -2000; k <= 2000; ++k) {
      EXPECT_EQ(DgaussPmf(k, {s2}), DgaussPmf(-k, {s2}));
      total += DgaussPmf(k, {s2});
    }
    EXPECT_NEAR(total, 1.0, 1e-12) << s2;
  }
}

TEST(DgaussTest, PmfVarianceMatchesSeries) {
  // Series oracle: variance 4 to 30 digits at sigma2 = 4, and 0.2810538... at 0.3.
  double v4 = 0, v03 = 0;
  for (int64_t k = -200; k <= 200; ++k) {
    v4 += k * k * DgaussPmf(k, {4.0});
    v03 += k * k * DgaussPmf(k, {0.3});
  }
  EXPECT_NEAR(v4, 4.0, 1e-12);
  EXPECT_NEAR(v03, 0.28105383007956179, 1e-13);
}

TEST(DgaussTest, SamplerMoments) {
  const DgaussSampler s({4.0});
  std::mt19937_64 rng(1);
  const int n = 1000000;
  double sum = 0, sq = 0;
  for (int i = 0; i < n; ++i) {
    const double k = static_cast<double>(s.Sample(rng));
    sum += k;
    sq += k * k;
  }
  const double mean = sum / n;
  EXPECT_LT(std::abs(mean), 0.01);
  EXPECT_NEAR(sq / n - mean * mean, 4.0, 0.02 * 4.0);
  EXPECT_EQ(s.support_radius(), 24);
}

TEST(DgaussTest, SamplerChiSquare) {
  const DiscreteGaussParams p{2.0};
  const DgaussSampler s(p);
  std::mt19937_64 rng(2);
  const int n = 1000000;
  std::vector<int64_t> counts(22, 0);  // k in [-10, 10] and one tail bin
  for (int i = 0; i < n; ++i) {
    const int64_t k = s.Sample(rng);
    ++counts[std::abs(k) <= 10 ? k + 10 : 21];
  }
  double chi2 = 0;
  double tail = 1.0;
  for (int k = -10; k <= 10; ++k) {
    const double e = n * DgaussPmf(k, p);
    tail -= DgaussPmf(k, p);
    chi2 += (counts[k + 10] - e) * (counts[k + 10] - e) / e;
  }
  // The tail bin has expected count far below 1; it must simply be empty.
  EXPECT_LT(tail * n, 1e-6);
  EXPECT_EQ(counts[21], 0);
  // 0.999 quantile of chi-square with 20 degrees of freedom.
  EXPECT_LT(chi2, 45.31474661812586);
}

TEST(DgaussTest, FromUniformEdges) {
  const DgaussSampler s({1.0});
  EXPECT_EQ(s.FromUniform(0.0), -s.support_radius());
  EXPECT_LE(s.FromUniform(std::nextafter(1.0, 0.0)), s.support_radius());
  EXPECT_EQ(s.FromUniform(0.5), 0);
  int64_t prev = -s.support_radius();
  for (double u = 0; u < 1; u += 1e-4) {
    const int64_t k = s.FromUniform(u);
    EXPECT_GE(k, prev);
    prev = k;
  }
}

TEST(DgaussTest, LlrExamples) {
  const AffectedQuerySet one{{1.0, 1}};
  EXPECT_NEAR(LlrStatistic({0}, one), 0.5, 1e-15);
  EXPECT_NEAR(LlrStatistic({3}, one), std::log(DgaussPmf(3, {1}) / DgaussPmf(2, {1})),
              1e-13);
  EXPECT_EQ(LlrStatistic({}, {}), 0.0);
  EXPECT_THROW(LlrStatistic({0, 1}, one), std::invalid_argument);

  // Two cells of one query shift by +1 and -1.
  const AffectedQuerySet two{{0.5, 2}};
  const double s2 = 2.0;
  const double expect = std::log(DgaussPmf(1, {s2}) / DgaussPmf(0, {s2})) +
                        std::log(DgaussPmf(-2, {s2}) / DgaussPmf(-1, {s2}));
  EXPECT_NEAR(LlrStatistic({1, -2}, two), expect, 1e-13);

  // Independent queries add.
  const AffectedQuerySet both{{1.0, 1}, {0.5, 2}};
  EXPECT_NEAR(LlrStatistic({3, 1, -2}, both),
              LlrStatistic({3}, one) + LlrStatistic({1, -2}, two), 1e-13);
}

TEST(DgaussTest, AffectedQueryPatterns) {
  const AllocationTable t = AllocationTable::Production();
  const Scenario full = FullRelease();
  int positive = 0;
  for (const QueryCell& c : full.selected) positive += RhoStar(t, c.query, c.level) > 0;

  const auto matched = AffectedQueries(t, full, ShiftPattern::kSensitivityMatched);
  EXPECT_EQ(static_cast<int>(matched.size()), positive);
  EXPECT_EQ(CellCount(matched), 2 * positive);
  double rho = 0;
  for (const auto& q : matched) rho += q.rho_star;
  EXPECT_NEAR(rho, 2.63, 1e-12);

  const auto single = AffectedQueries(t, full, ShiftPattern::kSingleCell);
  EXPECT_EQ(CellCount(single), positive);
  const auto canonical = AffectedQueries(t, full, ShiftPattern::kCanonical);
  EXPECT_LT(CellCount(canonical), CellCount(matched));
  EXPECT_GT(CellCount(canonical), CellCount(single));
}

TEST(DgaussTest, DeterministicAcrossThreadCounts) {
  const AffectedQuerySet qs{{0.2, 2}, {0.05, 1}};
  const auto a = SampleLlr(qs, 50000, 42, false, 1);
  const auto b = SampleLlr(qs, 50000, 42, false, 3);
  EXPECT_EQ(a, b);
  const McRoc r1 = MonteCarloRoc(qs, 20000, 42, 1);
  const McRoc r2 = MonteCarloRoc(qs, 20000, 42, 4);
  ASSERT_EQ(r1.vertices.size(), r2.vertices.size());
  for (size_t i = 0; i < r1.vertices.size(); ++i) {
    EXPECT_EQ(r1.vertices[i].level, r2.vertices[i].level);
    EXPECT_EQ(r1.vertices[i].power, r2.vertices[i].power);
  }
  EXPECT_NE(SampleLlr(qs, 1000, 43, false, 1), SampleLlr(qs, 1000, 42, false, 1));
}

TEST(DgaussTest, AlternativeIsNegatedNull) {
  // For symmetric shifts the LLR under D2 has the law of -LLR under D1.
  const AffectedQuerySet qs{{0.3, 2}, {0.7, 1}};
  const int n = 200000;
  auto null = SampleLlr(qs, n, 5, false);
  auto alt = SampleLlr(qs, n, 6, true);
  for (double& x : null) x = -x;
  std::sort(null.begin(), null.end());
  std::sort(alt.begin(), alt.end());
  // Two-sample KS distance over the pooled support.
  double ks = 0;
  size_t i = 0, j = 0;
  while (i < null.size() && j < alt.size()) {
    const double x = std::min(null[i], alt[j]);
    while (i < null.size() && null[i] <= x + 1e-12) ++i;
    while (j < alt.size() && alt[j] <= x + 1e-12) ++j;
    ks = std::max(ks, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / n));
  }
  // Critical value at significance 0.001.
  EXPECT_LT(ks, 1.95 * std::sqrt(2.0 / n));

  // Reweighting null draws by e^{-L} reproduces the alternative's tail.
  for (double t : {-1.0, 0.0, 0.7}) {
    double weighted = 0;
    for (double x : null) {
      const double l = -x;
      if (l <= t) weighted += std::exp(-l);
    }
    weighted /= n;
    const double direct =
        static_cast<double>(std::upper_bound(alt.begin(), alt.end(), t + 1e-12) - alt.begin()) / n;
    EXPECT_NEAR(weighted, direct, 0.01) << t;
  }
}

TEST(DgaussTest, RocNearGaussianAndBelowBound) {
  const AllocationTable t = AllocationTable::Production();
  for (const char* name : {"production", "A"}) {
    const Scenario s = std::string(name) == "production" ? FullRelease()
                                                         : *FindBuiltinScenario(name);
    const double rho = ScenarioRho(t, s).get_d();
    const McRoc roc = MonteCarloRoc(
        AffectedQueries(t, s, ShiftPattern::kSensitivityMatched), 200000, 7);
    for (int i = 1; i <= 99; ++i) {
      const double l = i / 100.0;
      const double p = roc.Power(l);
      const double se = roc.StandardError(l);
      EXPECT_NEAR(p, GaussianExactPower(std::sqrt(2 * rho), l), std::max(0.01, 3 * se))
          << name << " " << l;
      // The binomial SE vanishes at an empirical power of 1; the rule of
      // three (3/n) covers that case.
      EXPECT_LE(p, ZcdpPowerBound(rho, l) + std::max(3 * se, 3.0 / roc.n_samples))
          << name << " " << l;
    }
  }
}

TEST(DgaussTest, ScenarioAPrintedPowers) {
  const AllocationTable t = AllocationTable::Production();
  const McRoc roc = MonteCarloRoc(
      AffectedQueries(t, *FindBuiltinScenario("A"), ShiftPattern::kSensitivityMatched),
      1000000, 7);
  EXPECT_NEAR(roc.Power(0.01), 0.03, 0.005);
  EXPECT_NEAR(roc.Power(0.05), 0.12, 0.005);
  EXPECT_NEAR(roc.Power(0.10), 0.21, 0.005);
}

TEST(DgaussTest, TinyRhoIsNearDiagonal) {
  const McRoc roc = MonteCarloRoc({{1e-8, 2}}, 100000, 3);
  for (double l : {0.05, 0.3, 0.7}) {
    EXPECT_NEAR(roc.Power(l), l, std::max(0.01, 3 * roc.StandardError(l)));
  }
}

TEST(DgaussTest, MonteCarloValidation) {
  EXPECT_THROW(MonteCarloRoc({{1.0, 1}}, 999, 1), std::invalid_argument);
  EXPECT_THROW(MonteCarloRoc({{0.0, 1}}, 1000, 1), std::invalid_argument);
  EXPECT_THROW(MonteCarloRoc({{1.0, 0}}, 1000, 1), std::invalid_argument);
  const McRoc roc = MonteCarloRoc({{1.0, 1}}, 1000, 1);
  EXPECT_EQ(roc.n_samples, 1000);
  EXPECT_EQ(roc.vertices.front().level, 0.0);
  EXPECT_EQ(roc.vertices.back().level, 1.0);
  EXPECT_EQ(roc.vertices.back().power, 1.0);
  EXPECT_THROW(roc.Power(1.5), std::invalid_argument);
}

}  // namespace
}  // namespace dpsem
