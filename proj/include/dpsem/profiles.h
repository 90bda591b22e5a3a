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

#ifndef DPSEM_PROFILES_H_
#define DPSEM_PROFILES_H_

#include <functional>
#include <string>
#include <vector>

namespace dpsem {

// (alpha, gamma)-RDP: Renyi divergence of order alpha is at most gamma.
struct RdpPoint {
  double alpha;
  double gamma;
};

// Accounting state: a zCDP budget rho or a finite set of RDP points.
class PrivacyProfile {
 public:
  static PrivacyProfile Zcdp(double rho);
  // Points must have alpha > 1 strictly increasing and gamma >= 0.
  static PrivacyProfile Rdp(std::vector<RdpPoint> points);

  bool is_zcdp() const { return zcdp_; }
  double rho() const { return rho_; }
  const std::vector<RdpPoint>& points() const { return points_; }

  // RDP points implied at the given orders (gamma = rho * alpha for zCDP;
  // for RDP profiles, the subset of stored points at those orders).
  std::vector<RdpPoint> Expand(const std::vector<double>& alphas) const;

 private:
  PrivacyProfile() = default;
  bool zcdp_ = true;
  double rho_ = 0.0;
  std::vector<RdpPoint> points_;
};

enum class Semantics {
  kApproximateDp,
  kPbdp,
  kZcdpTailBound,
  kRdpTailBound,
  kBayesKnownRest,
  kBayesArbitraryPrior,
};

std::string SemanticsName(Semantics s);

// A non-increasing map eps -> delta valid on [eps_min, eps_max].
struct EpsDeltaCurve {
  Semantics semantics;
  std::function<double(double)> delta;
  double eps_min = 0.0;
  double eps_max = 50.0;
};

}  // namespace dpsem

#endif  // DPSEM_PROFILES_H_
