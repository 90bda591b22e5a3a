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

#ifndef DPSEM_TRADEOFF_H_
#define DPSEM_TRADEOFF_H_

#include <utility>
#include <variant>
#include <vector>

#include "dpsem/plrv.h"
#include "dpsem/profiles.h"

namespace dpsem {

// Default orders for the RDP/zCDP power bounds: 2000 log-spaced points in
// (1 + 1e-4, 200].
const std::vector<double>& DefaultAlphaGrid();

double PureDpPowerBound(double eps, double level);
double ApproxDpPowerBound(double eps, double delta, double level);
double GaussianExactPower(double mu, double level);

// Largest power p in [level, 1] consistent with every RDP point, found by
// bisection to 1e-6.
double RdpPowerBound(const std::vector<RdpPoint>& points, double level);
double ZcdpPowerBound(double rho, double level,
                      const std::vector<double>& alpha_grid = DefaultAlphaGrid());

// Minimum of ApproxDpPowerBound(eps, curve.delta(eps), level) over eps_grid.
double CurveMinPowerBound(const EpsDeltaCurve& curve, double level,
                          const std::vector<double>& eps_grid);

// A (level, power) vertex of a piecewise-linear curve.
struct RocPoint {
  double level;
  double power;
};

// Maximal power of any test as a function of its significance level.
class TradeoffCurve {
 public:
  struct PureDp { double eps; };
  struct ApproxDp { double eps, delta; };
  struct GaussianExact { double mu; };
  struct ZcdpBound { double rho; };
  struct RdpBound { std::vector<RdpPoint> points; };
  struct PiecewiseLinear { std::vector<RocPoint> vertices; };
  using Kind = std::variant<PureDp, ApproxDp, GaussianExact, ZcdpBound,
                            RdpBound, PiecewiseLinear>;

  static TradeoffCurve Pure(double eps) { return TradeoffCurve(PureDp{eps}); }
  static TradeoffCurve Approx(double eps, double delta) {
    return TradeoffCurve(ApproxDp{eps, delta});
  }
  static TradeoffCurve Gaussian(double mu) {
    return TradeoffCurve(GaussianExact{mu});
  }
  static TradeoffCurve Zcdp(double rho) { return TradeoffCurve(ZcdpBound{rho}); }
  static TradeoffCurve Rdp(std::vector<RdpPoint> points) {
    return TradeoffCurve(RdpBound{std::move(points)});
  }
  // Vertices must run from level 0 to (1, 1), sorted and concave.
  static TradeoffCurve Piecewise(std::vector<RocPoint> vertices);
  // Same, without the concavity check (empirical ROC curves).
  static TradeoffCurve PiecewiseUnchecked(std::vector<RocPoint> vertices);

  const Kind& kind() const { return kind_; }

  // Power at the given level, in [0, 1].
  double Power(double level) const;

  // inf{level : Power(level) >= power}. This is the generalized inverse
  // f^{-1}(1 - power) of the type-II error function f = 1 - Power.
  double LevelForPower(double power) const;

 private:
  explicit TradeoffCurve(Kind k) : kind_(std::move(k)) {}
  Kind kind_;
};

// Exact Neyman-Pearson curve of a finite pair: level is measured under p1,
// power under p2.
TradeoffCurve NpTradeoffFinite(const FiniteMechanismPair& pair);

}  // namespace dpsem

#endif  // DPSEM_TRADEOFF_H_
