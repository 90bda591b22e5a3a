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

#include "dpsem/profiles.h"

#include <cmath>
#include <stdexcept>

namespace dpsem {

PrivacyProfile PrivacyProfile::Zcdp(double rho) {
  if (!(rho >= 0) || !std::isfinite(rho)) {
    throw std::invalid_argument("zCDP rho must be finite and >= 0");
  }
  PrivacyProfile p;
  p.rho_ = rho;
  return p;
}

PrivacyProfile PrivacyProfile::Rdp(std::vector<RdpPoint> points) {
  for (size_t i = 0; i < points.size(); ++i) {
    if (!(points[i].alpha > 1) || !(points[i].gamma >= 0)) {
      throw std::invalid_argument("RDP points need alpha > 1 and gamma >= 0");
    }
    if (i > 0 && !(points[i].alpha > points[i - 1].alpha)) {
      throw std::invalid_argument("RDP alphas must be strictly increasing");
    }
  }
  PrivacyProfile p;
  p.zcdp_ = false;
  p.points_ = std::move(points);
  return p;
}

std::vector<RdpPoint> PrivacyProfile::Expand(
    const std::vector<double>& alphas) const {
  std::vector<RdpPoint> out;
  for (double a : alphas) {
    if (zcdp_) {
      out.push_back({a, rho_ * a});
      continue;
    }
    for (const RdpPoint& p : points_) {
      if (p.alpha == a) out.push_back(p);
    }
  }
  return out;
}

std::string SemanticsName(Semantics s) {
  switch (s) {
    case Semantics::kApproximateDp: return "approximate-dp";
    case Semantics::kPbdp: return "pbdp";
    case Semantics::kZcdpTailBound: return "zcdp-tail-bound";
    case Semantics::kRdpTailBound: return "rdp-tail-bound";
    case Semantics::kBayesKnownRest: return "bayes-known-rest";
    case Semantics::kBayesArbitraryPrior: return "bayes-arbitrary-prior";
  }
  return "unknown";
}

}  // namespace dpsem
