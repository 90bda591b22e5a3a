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

#include "dpsem/tradeoff.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "dpsem/normal.h"

namespace dpsem {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPowerTolerance = 1e-6;

double Clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

// log(a^alpha * b^(1 - alpha)) with the conventions 0^alpha = 0 and
// 0^(1 - alpha) = +inf for alpha > 1.
double LogTerm(double a, double b, double alpha) {
  if (a == 0) return -kInf;
  if (b == 0) return kInf;
  return alpha * std::log(a) + (1 - alpha) * std::log(b);
}

double LogAddExp(double x, double y) {
  if (x == -kInf) return y;
  if (y == -kInf) return x;
  const double m = std::max(x, y);
  if (m == kInf) return kInf;
  return m + std::log1p(std::exp(-std::abs(x - y)));
}

// Both Renyi divergences between Bernoulli(level) and Bernoulli(power) are
// within gamma at order alpha.
bool RdpFeasible(const std::vector<RdpPoint>& points, double level,
                 double power) {
  constexpr double kSlack = 1e-12;
  for (const RdpPoint& pt : points) {
    const double cap = pt.gamma * (pt.alpha - 1) + kSlack;
    const double fwd = LogAddExp(LogTerm(level, power, pt.alpha),
                                 LogTerm(1 - level, 1 - power, pt.alpha));
    if (fwd > cap) return false;
    const double rev = LogAddExp(LogTerm(power, level, pt.alpha),
                                 LogTerm(1 - power, 1 - level, pt.alpha));
    if (rev > cap) return false;
  }
  return true;
}

void CheckLevel(double level) {
  if (!(level >= 0 && level <= 1)) {
    throw std::invalid_argument("level must lie in [0, 1]");
  }
}

void CheckVertices(const std::vector<RocPoint>& v, bool concave) {
  if (v.size() < 2 || v.front().level != 0 || v.back().level != 1 ||
      v.back().power != 1) {
    throw std::invalid_argument(
        "piecewise curve must start at level 0 and end at (1, 1)");
  }
  for (size_t i = 1; i < v.size(); ++i) {
    if (v[i].level < v[i - 1].level || v[i].power < v[i - 1].power) {
      throw std::invalid_argument("piecewise curve must be non-decreasing");
    }
  }
  if (!concave) return;
  double prev_slope = kInf;
  for (size_t i = 1; i < v.size(); ++i) {
    const double dl = v[i].level - v[i - 1].level;
    const double dp = v[i].power - v[i - 1].power;
    const double slope = dl > 0 ? dp / dl : (dp > 0 ? kInf : prev_slope);
    if (slope > prev_slope * (1 + 1e-9) + 1e-12) {
      throw std::invalid_argument("piecewise curve must be concave");
    }
    prev_slope = slope;
  }
}

double PiecewisePower(const std::vector<RocPoint>& v, double level) {
  const auto it = std::upper_bound(
      v.begin(), v.end(), level,
      [](double x, const RocPoint& p) { return x < p.level; });
  if (it == v.begin()) return v.front().power;
  if (it == v.end()) return v.back().power;
  const RocPoint& a = *(it - 1);
  const RocPoint& b = *it;
  return a.power + (level - a.level) / (b.level - a.level) * (b.power - a.power);
}

double PiecewiseLevelForPower(const std::vector<RocPoint>& v, double power) {
  const auto it = std::lower_bound(
      v.begin(), v.end(), power,
      [](const RocPoint& p, double x) { return p.power < x; });
  if (it == v.begin()) return v.front().level;
  if (it == v.end()) return 1.0;
  const RocPoint& a = *(it - 1);
  const RocPoint& b = *it;
  return a.level + (power - a.power) / (b.power - a.power) * (b.level - a.level);
}

// Inverse of the two linear pieces of the (eps, delta) bound.
double ApproxDpLevelForPower(double eps, double delta, double power) {
  return Clamp01(std::max((power - delta) * std::exp(-eps),
                          1 - delta - std::exp(eps) * (1 - power)));
}

}  // namespace

const std::vector<double>& DefaultAlphaGrid() {
  static const std::vector<double> grid = [] {
    constexpr int kPoints = 2000;
    const double lo = std::log(1 + 1e-4);
    const double hi = std::log(200.0);
    std::vector<double> g(kPoints);
    // The open lower end is skipped: point i sits at fraction (i+1)/kPoints.
    for (int i = 0; i < kPoints; ++i) {
      g[i] = std::exp(lo + (hi - lo) * (i + 1) / kPoints);
    }
    g.back() = 200.0;
    return g;
  }();
  return grid;
}

double PureDpPowerBound(double eps, double level) {
  CheckLevel(level);
  return Clamp01(std::min(std::exp(eps) * level,
                          1 - std::exp(-eps) * (1 - level)));
}

double ApproxDpPowerBound(double eps, double delta, double level) {
  CheckLevel(level);
  return Clamp01(std::min(std::exp(eps) * level + delta,
                          1 - std::exp(-eps) * (1 - level - delta)));
}

double GaussianExactPower(double mu, double level) {
  CheckLevel(level);
  // Phi^{-1}(1 - level) written as -Phi^{-1}(level) to keep small levels exact.
  return Clamp01(NormalSf(-NormalQuantile(level) - mu));
}

double RdpPowerBound(const std::vector<RdpPoint>& points, double level) {
  CheckLevel(level);
  if (points.empty()) throw std::invalid_argument("no RDP points");
  if (RdpFeasible(points, level, 1.0)) return 1.0;
  double lo = level;
  double hi = 1.0;
  while (hi - lo > kPowerTolerance) {
    const double mid = 0.5 * (lo + hi);
    (RdpFeasible(points, level, mid) ? lo : hi) = mid;
  }
  // hi is never below the supremum, so the result stays a valid bound.
  return hi;
}

double ZcdpPowerBound(double rho, double level,
                      const std::vector<double>& alpha_grid) {
  if (alpha_grid.empty()) throw std::invalid_argument("empty alpha grid");
  return RdpPowerBound(PrivacyProfile::Zcdp(rho).Expand(alpha_grid), level);
}

double CurveMinPowerBound(const EpsDeltaCurve& curve, double level,
                          const std::vector<double>& eps_grid) {
  if (eps_grid.empty()) throw std::invalid_argument("empty eps grid");
  double best = 1.0;
  for (double eps : eps_grid) {
    best = std::min(best, ApproxDpPowerBound(eps, curve.delta(eps), level));
  }
  return best;
}

TradeoffCurve TradeoffCurve::Piecewise(std::vector<RocPoint> vertices) {
  CheckVertices(vertices, /*concave=*/true);
  return TradeoffCurve(PiecewiseLinear{std::move(vertices)});
}

TradeoffCurve TradeoffCurve::PiecewiseUnchecked(std::vector<RocPoint> vertices) {
  CheckVertices(vertices, /*concave=*/false);
  return TradeoffCurve(PiecewiseLinear{std::move(vertices)});
}

double TradeoffCurve::Power(double level) const {
  CheckLevel(level);
  struct Visitor {
    double level;
    double operator()(const PureDp& k) const {
      return PureDpPowerBound(k.eps, level);
    }
    double operator()(const ApproxDp& k) const {
      return ApproxDpPowerBound(k.eps, k.delta, level);
    }
    double operator()(const GaussianExact& k) const {
      return GaussianExactPower(k.mu, level);
    }
    double operator()(const ZcdpBound& k) const {
      return ZcdpPowerBound(k.rho, level);
    }
    double operator()(const RdpBound& k) const {
      return RdpPowerBound(k.points, level);
    }
    double operator()(const PiecewiseLinear& k) const {
      return PiecewisePower(k.vertices, level);
    }
  };
  return std::visit(Visitor{level}, kind_);
}

double TradeoffCurve::LevelForPower(double power) const {
  if (const auto* g = std::get_if<GaussianExact>(&kind_)) {
    return NormalCdf(-NormalQuantile(1 - power) - g->mu);
  }
  if (const auto* p = std::get_if<PiecewiseLinear>(&kind_)) {
    return PiecewiseLevelForPower(p->vertices, power);
  }
  if (Power(0) >= power) return 0.0;
  if (const auto* a = std::get_if<ApproxDp>(&kind_)) {
    return ApproxDpLevelForPower(a->eps, a->delta, power);
  }
  if (const auto* a = std::get_if<PureDp>(&kind_)) {
    return ApproxDpLevelForPower(a->eps, 0.0, power);
  }
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < 100 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    (Power(mid) >= power ? hi : lo) = mid;
  }
  return hi;
}

TradeoffCurve NpTradeoffFinite(const FiniteMechanismPair& pair) {
  pair.Validate();
  std::vector<int> idx;
  for (int i = 0; i < pair.size(); ++i) {
    if (pair.p1[i] > 0 || pair.p2[i] > 0) idx.push_back(i);
  }
  // Most alternative-favouring outputs first: decreasing p2/p1.
  auto cross = [&](int a, int b) { return pair.p2[a] * pair.p1[b]; };
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return cross(a, b) > cross(b, a); });
  std::vector<RocPoint> v{{0.0, 0.0}};
  double level = 0.0;
  double power = 0.0;
  for (size_t k = 0; k < idx.size(); ++k) {
    level += pair.p1[idx[k]];
    power += pair.p2[idx[k]];
    const bool tie_next =
        k + 1 < idx.size() &&
        std::abs(cross(idx[k], idx[k + 1]) - cross(idx[k + 1], idx[k])) <=
            1e-12 * std::max(cross(idx[k], idx[k + 1]),
                             cross(idx[k + 1], idx[k]));
    if (!tie_next) v.push_back({std::min(level, 1.0), std::min(power, 1.0)});
  }
  v.back() = {1.0, 1.0};
  if (v.size() >= 2 && v[v.size() - 2].level == 1.0 &&
      v[v.size() - 2].power == 1.0) {
    v.pop_back();
  }
  return TradeoffCurve::Piecewise(std::move(v));
}

}  // namespace dpsem
