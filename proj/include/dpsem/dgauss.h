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

#ifndef DPSEM_DGAUSS_H_
#define DPSEM_DGAUSS_H_

#include <cstdint>
#include <random>
#include <vector>

#include "dpsem/census.h"
#include "dpsem/tradeoff.h"

namespace dpsem {

// Discrete Gaussian on the integers with P(k) proportional to
// exp(-k^2 / (2 sigma2)).
struct DiscreteGaussParams {
  double sigma2;
};

double DgaussPmf(int64_t k, DiscreteGaussParams params);

// Inversion sampler over a cumulative table truncated at |k| <= ceil(12 sigma)
// (dropped tail mass below 1e-30), with a guide table for O(1) lookup.
class DgaussSampler {
 public:
  explicit DgaussSampler(DiscreteGaussParams params);

  // u must lie in [0, 1).
  int64_t FromUniform(double u) const;

  int64_t Sample(std::mt19937_64& rng) const {
    return FromUniform(static_cast<double>(rng() >> 11) * 0x1.0p-53);
  }

  int64_t support_radius() const { return radius_; }

 private:
  int64_t radius_;
  std::vector<double> cdf_;      // cdf_[i] = P(K <= i - radius_)
  std::vector<uint32_t> guide_;  // first index whose cdf exceeds j / size
};

// One released query touched by the neighbor change: its zCDP share and the
// number of histogram cells whose true answers move by one.
struct AffectedQuery {
  double rho_star;
  int delta_answers;
};
using AffectedQuerySet = std::vector<AffectedQuery>;

// How a maximal neighbor pair moves each released histogram.
enum class ShiftPattern {
  // Two cells (+1, -1) per query with rho* > 0. Squared L2 change 2, which is
  // the sensitivity the sigma2 = 1/rho* calibration assumes.
  kSensitivityMatched,
  // Two cells per multi-cell histogram, one for TOTAL.
  kCanonical,
  // One cell per query.
  kSingleCell,
};

AffectedQuerySet AffectedQueries(const AllocationTable& table,
                                 const Scenario& scenario,
                                 ShiftPattern pattern);

// Total number of affected cells.
int CellCount(const AffectedQuerySet& queries);

// Log-likelihood ratio log P(obs | D1) / P(obs | D2), where observations are
// noisy answers minus the D1 answers, one per affected cell in query order;
// the D2 answers differ by +1 for a query's first cell and -1 for its second.
double LlrStatistic(const std::vector<int64_t>& observations,
                    const AffectedQuerySet& queries);

// Empirical ROC of the likelihood-ratio test that rejects D1 for small LLR.
struct McRoc {
  std::vector<RocPoint> vertices;
  int64_t n_samples = 0;

  TradeoffCurve curve() const { return TradeoffCurve::PiecewiseUnchecked(vertices); }
  double Power(double level) const;
  // Binomial standard error of the power estimate at this level.
  double StandardError(double level) const;
};

// Draws n_samples LLR values under each hypothesis. Work is split into a
// fixed number of shards seeded from (seed, shard), so the result does not
// depend on the thread count; threads = 0 picks the hardware concurrency.
McRoc MonteCarloRoc(const AffectedQuerySet& queries, int64_t n_samples,
                    uint64_t seed, int threads = 0);

// Raw LLR draws; alternative = false samples under D1.
std::vector<double> SampleLlr(const AffectedQuerySet& queries, int64_t n,
                              uint64_t seed, bool alternative, int threads = 0);

}  // namespace dpsem

#endif  // DPSEM_DGAUSS_H_
