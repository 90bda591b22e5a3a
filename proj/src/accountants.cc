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

#include "dpsem/accountants.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "dpsem/normal.h"

namespace dpsem {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void CheckDelta(double delta) {
  if (!(delta > 0 && delta <= 1)) {
    throw std::invalid_argument("delta must lie in (0, 1]");
  }
}

// Budget comparisons tolerate float summation error (2.56 + 0.07 != 2.63).
double BudgetSlack(double cap) { return 1e-12 * std::max(1.0, cap); }

}  // namespace

double ZcdpCompose(const std::vector<double>& rhos) {
  double total = 0.0;
  for (double r : rhos) {
    if (!(r >= 0)) throw std::invalid_argument("rho must be non-negative");
    total += r;
  }
  return total;
}

std::vector<RdpPoint> RdpCompose(const std::vector<RdpPoint>& a,
                                 const std::vector<RdpPoint>& b) {
  std::vector<RdpPoint> out;
  for (const RdpPoint& x : a) {
    for (const RdpPoint& y : b) {
      if (x.alpha == y.alpha) out.push_back({x.alpha, x.gamma + y.gamma});
    }
  }
  if (out.empty()) {
    throw std::invalid_argument("RDP profiles share no alpha");
  }
  std::sort(out.begin(), out.end(),
            [](const RdpPoint& x, const RdpPoint& y) { return x.alpha < y.alpha; });
  return out;
}

double ZcdpToDelta(double rho, double eps) {
  if (!(rho > 0)) throw std::invalid_argument("rho must be positive");
  if (!(eps > rho)) return 1.0;
  return std::exp(-(eps - rho) * (eps - rho) / (4 * rho));
}

double RdpToDelta(const std::vector<RdpPoint>& points, double eps) {
  if (points.empty()) throw std::invalid_argument("no RDP points");
  double best = 1.0;
  for (const RdpPoint& p : points) {
    if (eps > p.gamma) {
      best = std::min(best, std::exp((p.alpha - 1) * (p.gamma - eps)));
    }
  }
  return std::clamp(best, 0.0, 1.0);
}

double FdpToEpsDelta(const TradeoffCurve& f, double delta) {
  CheckDelta(delta);
  const double level = f.LevelForPower(delta);
  if (level <= 0) return kInf;
  return std::log(delta / level);
}

double GaussianPbdpEpsilon(double mu, double delta) {
  CheckDelta(delta);
  const double denom = NormalCdf(-NormalQuantile(1 - delta) - mu);
  if (denom <= 0) return kInf;
  return std::log(delta / denom);
}

double GaussianApproxDpDelta(double mu, double eps) {
  const Plrv l = GaussianPlrv(mu);
  return ApproxDpDelta(l, l, eps);
}

double GaussianApproxDpEpsilon(double mu, double delta) {
  CheckDelta(delta);
  if (GaussianApproxDpDelta(mu, 0.0) <= delta) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  while (GaussianApproxDpDelta(mu, hi) > delta) {
    lo = hi;
    hi *= 2;
    if (hi > 1e6) return kInf;
  }
  for (int i = 0; i < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    (GaussianApproxDpDelta(mu, mid) > delta ? lo : hi) = mid;
  }
  return hi;
}

double PbdpDeltaFinite(const FiniteMechanismPair& pair, double eps) {
  if (!(eps > 0)) throw std::invalid_argument("eps must be positive");
  double worst = 0.0;
  for (const FiniteMechanismPair& p : {pair, pair.Reversed()}) {
    const TradeoffCurve t = NpTradeoffFinite(p);
    const double shrink = std::exp(-eps);
    double lo = 0.0;
    double hi = 1.0;
    for (int i = 0; i < 60; ++i) {
      const double mid = 0.5 * (lo + hi);
      // Equality holds along linear pieces; rounding must not read as a violation.
      (t.Power(shrink * mid) <= mid * (1 + 1e-12) ? hi : lo) = mid;
    }
    worst = std::max(worst, hi);
  }
  return worst;
}

double RenyiDivergence(const FiniteMechanismPair& pair, double alpha) {
  pair.Validate();
  if (!(alpha > 1)) throw std::invalid_argument("alpha must exceed 1");
  double sum = 0.0;
  for (int i = 0; i < pair.size(); ++i) {
    const double p = pair.p1[i];
    const double q = pair.p2[i];
    if (p == 0) continue;
    if (q == 0) return kInf;
    sum += std::exp(alpha * std::log(p) + (1 - alpha) * std::log(q));
  }
  return std::log(sum) / (alpha - 1);
}

EpsDeltaCurve GaussianApproxDpCurve(double mu) {
  return {Semantics::kApproximateDp,
          [mu](double eps) { return GaussianApproxDpDelta(mu, eps); }};
}

EpsDeltaCurve ZcdpTailCurve(double rho) {
  return {Semantics::kZcdpTailBound,
          [rho](double eps) { return ZcdpToDelta(rho, eps); }};
}

EpsDeltaCurve RdpTailCurve(std::vector<RdpPoint> points) {
  return {Semantics::kRdpTailBound,
          [pts = std::move(points)](double eps) { return RdpToDelta(pts, eps); }};
}

Odometer::Odometer(double cap) : cap_(cap) {
  if (!(cap >= 0) || !std::isfinite(cap)) {
    throw std::invalid_argument("odometer cap must be finite and >= 0");
  }
}

bool Odometer::Register(const std::string& label, double rho) {
  if (!(rho >= 0) || !std::isfinite(rho)) {
    throw std::invalid_argument("rho must be finite and non-negative");
  }
  if (label.find_first_of("\t\n") != std::string::npos) {
    throw std::invalid_argument("ledger labels cannot contain tabs or newlines");
  }
  if (spent_ + rho > cap_ + BudgetSlack(cap_)) return false;
  entries_.push_back({label, rho});
  spent_ += rho;
  return true;
}

double Odometer::remaining() const {
  const double r = cap_ - spent_;
  return r < BudgetSlack(cap_) ? 0.0 : r;
}

void Odometer::WriteLedger(std::ostream& out) const {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", cap_);
  out << "# cap\t" << buf << "\n";
  double cumulative = 0.0;
  for (const Entry& e : entries_) {
    cumulative += e.rho;
    char line[128];
    std::snprintf(line, sizeof line, "\t%.17g\t%.17g\n", e.rho, cumulative);
    out << e.label << line;
  }
}

Odometer Odometer::ReadLedger(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# cap\t", 0) != 0) {
    throw std::invalid_argument("ledger must start with a '# cap' line");
  }
  Odometer o(std::stod(line.substr(6)));
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const size_t t1 = line.find('\t');
    const size_t t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) {
      throw std::invalid_argument("malformed ledger line: " + line);
    }
    const std::string label = line.substr(0, t1);
    if (!o.Register(label, std::stod(line.substr(t1 + 1, t2 - t1 - 1)))) {
      throw std::invalid_argument("ledger exceeds its cap at: " + label);
    }
  }
  return o;
}

}  // namespace dpsem
