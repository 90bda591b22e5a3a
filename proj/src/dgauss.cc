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
#include <atomic>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>

namespace dpsem {
namespace {

constexpr int kShards = 16;

// log of sum_j exp(-j^2 / (2 sigma2)), summed outward until terms drop below
// 1e-18 of the running total.
double LogNormalizer(double sigma2) {
  double total = 1.0;
  for (int64_t j = 1;; ++j) {
    const double term = 2 * std::exp(-static_cast<double>(j) * j / (2 * sigma2));
    total += term;
    if (term < 1e-18 * total) break;
  }
  return std::log(total);
}

void CheckParams(DiscreteGaussParams p) {
  if (!(p.sigma2 > 0) || !std::isfinite(p.sigma2)) {
    throw std::invalid_argument("sigma2 must be finite and positive");
  }
}

struct QueryPlan {
  DgaussSampler sampler;
  double weight;  // 1 / (2 sigma2) = rho* / 2
  int cells;
};

void RunSharded(int threads, const std::function<void(int)>& shard_fn) {
  if (threads <= 0) {
    threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  }
  threads = std::min(threads, kShards);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int s; (s = next.fetch_add(1)) < kShards;) shard_fn(s);
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
}

}  // namespace

double DgaussPmf(int64_t k, DiscreteGaussParams params) {
  CheckParams(params);
  const double x = static_cast<double>(k);
  return std::exp(-x * x / (2 * params.sigma2) - LogNormalizer(params.sigma2));
}

DgaussSampler::DgaussSampler(DiscreteGaussParams params) {
  CheckParams(params);
  radius_ = static_cast<int64_t>(std::ceil(12 * std::sqrt(params.sigma2)));
  const double log_z = LogNormalizer(params.sigma2);
  const size_t size = static_cast<size_t>(2 * radius_ + 1);
  cdf_.resize(size);
  double acc = 0.0;
  for (size_t i = 0; i < size; ++i) {
    const double k = static_cast<double>(static_cast<int64_t>(i) - radius_);
    acc += std::exp(-k * k / (2 * params.sigma2) - log_z);
    cdf_[i] = acc;
  }
  for (double& c : cdf_) c /= acc;  // renormalize the truncated table
  cdf_.back() = 1.0;
  guide_.resize(size);
  size_t idx = 0;
  for (size_t j = 0; j < size; ++j) {
    const double u = static_cast<double>(j) / size;
    while (cdf_[idx] <= u) ++idx;
    guide_[j] = static_cast<uint32_t>(idx);
  }
}

int64_t DgaussSampler::FromUniform(double u) const {
  size_t idx = guide_[static_cast<size_t>(u * guide_.size())];
  while (cdf_[idx] <= u) ++idx;
  return static_cast<int64_t>(idx) - radius_;
}

AffectedQuerySet AffectedQueries(const AllocationTable& table,
                                 const Scenario& scenario,
                                 ShiftPattern pattern) {
  AffectedQuerySet out;
  std::vector<QueryCell> seen;
  for (const QueryCell& c : scenario.selected) {
    if (std::find(seen.begin(), seen.end(), c) != seen.end()) continue;
    seen.push_back(c);
    const double rho = RhoStar(table, c.query, c.level).get_d();
    if (rho <= 0) continue;  // not released
    int cells = 2;
    if (pattern == ShiftPattern::kSingleCell ||
        (pattern == ShiftPattern::kCanonical && c.query == Query::kTotal)) {
      cells = 1;
    }
    out.push_back({rho, cells});
  }
  return out;
}

int CellCount(const AffectedQuerySet& queries) {
  int n = 0;
  for (const AffectedQuery& q : queries) n += q.delta_answers;
  return n;
}

double LlrStatistic(const std::vector<int64_t>& observations,
                    const AffectedQuerySet& queries) {
  if (static_cast<int>(observations.size()) != CellCount(queries)) {
    throw std::invalid_argument("one observation per affected cell required");
  }
  double llr = 0.0;
  size_t i = 0;
  for (const AffectedQuery& q : queries) {
    if (!(q.rho_star > 0) || q.delta_answers < 1) {
      throw std::invalid_argument("affected query needs rho* > 0 and cells >= 1");
    }
    const double sigma2 = 1 / q.rho_star;
    for (int c = 0; c < q.delta_answers; ++c, ++i) {
      const double k = static_cast<double>(observations[i]);
      const double shifted = k - (c % 2 == 0 ? 1.0 : -1.0);
      // log pmf(k) - log pmf(k - s); the normalizers cancel.
      llr += (shifted * shifted - k * k) / (2 * sigma2);
    }
  }
  return llr;
}

std::vector<double> SampleLlr(const AffectedQuerySet& queries, int64_t n,
                              uint64_t seed, bool alternative, int threads) {
  if (n < 0) throw std::invalid_argument("negative sample count");
  std::vector<QueryPlan> plan;
  for (const AffectedQuery& q : queries) {
    if (!(q.rho_star > 0) || q.delta_answers < 1) {
      throw std::invalid_argument("affected query needs rho* > 0 and cells >= 1");
    }
    plan.push_back({DgaussSampler({1 / q.rho_star}), q.rho_star / 2,
                    q.delta_answers});
  }
  std::vector<double> out(static_cast<size_t>(n));
  RunSharded(threads, [&](int shard) {
    const int64_t begin = n * shard / kShards;
    const int64_t end = n * (shard + 1) / kShards;
    std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                      static_cast<uint32_t>(shard), alternative ? 1u : 0u};
    std::mt19937_64 rng(seq);
    for (int64_t i = begin; i < end; ++i) {
      double llr = 0.0;
      for (const QueryPlan& q : plan) {
        // Per cell with shift s: (s^2 - 2ks) under D1. Under D2 the
        // observation is k + s, giving (-s^2 - 2ks).
        int64_t m = 0;
        for (int c = 0; c < q.cells; ++c) {
          const int64_t s = c % 2 == 0 ? 1 : -1;
          const int64_t k = q.sampler.Sample(rng);
          m += (alternative ? -1 : 1) - 2 * k * s;
        }
        llr += q.weight * static_cast<double>(m);
      }
      out[static_cast<size_t>(i)] = llr;
    }
  });
  return out;
}

McRoc MonteCarloRoc(const AffectedQuerySet& queries, int64_t n_samples,
                    uint64_t seed, int threads) {
  if (n_samples < 1000) {
    throw std::invalid_argument("Monte Carlo ROC needs at least 1000 samples");
  }
  std::vector<double> null_llr = SampleLlr(queries, n_samples, seed, false, threads);
  std::vector<double> alt_llr = SampleLlr(queries, n_samples, seed, true, threads);
  std::sort(null_llr.begin(), null_llr.end());
  std::sort(alt_llr.begin(), alt_llr.end());

  McRoc roc;
  roc.n_samples = n_samples;
  roc.vertices.push_back({0.0, 0.0});
  const double n = static_cast<double>(n_samples);
  size_t i = 0;
  size_t j = 0;
  // Sweep thresholds upward; each distinct value adds one vertex.
  while (i < null_llr.size() || j < alt_llr.size()) {
    double t;
    if (j == alt_llr.size() || (i < null_llr.size() && null_llr[i] < alt_llr[j])) {
      t = null_llr[i];
    } else {
      t = alt_llr[j];
    }
    while (i < null_llr.size() && null_llr[i] == t) ++i;
    while (j < alt_llr.size() && alt_llr[j] == t) ++j;
    roc.vertices.push_back({i / n, j / n});
  }
  roc.vertices.back() = {1.0, 1.0};
  return roc;
}

double McRoc::Power(double level) const {
  if (!(level >= 0 && level <= 1)) {
    throw std::invalid_argument("level must lie in [0, 1]");
  }
  const auto it = std::upper_bound(
      vertices.begin(), vertices.end(), level,
      [](double x, const RocPoint& p) { return x < p.level; });
  if (it == vertices.begin()) return vertices.front().power;
  if (it == vertices.end()) return vertices.back().power;
  const RocPoint& a = *(it - 1);
  const RocPoint& b = *it;
  return a.power + (level - a.level) / (b.level - a.level) * (b.power - a.power);
}

double McRoc::StandardError(double level) const {
  const double p = Power(level);
  return std::sqrt(p * (1 - p) / static_cast<double>(n_samples));
}

}  // namespace dpsem
