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

#include "dpsem/curves.h"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "dpsem/accountants.h"
#include "dpsem/bayes.h"
#include "dpsem/tradeoff.h"

namespace dpsem {
namespace {

double Need(const std::optional<double>& v, const char* name) {
  if (!v) throw std::invalid_argument(std::string("missing --") + name);
  if (!std::isfinite(*v) || *v < 0) {
    throw std::invalid_argument(std::string("--") + name + " must be finite and >= 0");
  }
  return *v;
}

double MuOf(const CurveParams& p) {
  if (p.mu) return Need(p.mu, "mu");
  return std::sqrt(2 * Need(p.rho, "rho"));
}

double PositiveRho(const CurveParams& p) {
  const double rho = Need(p.rho, "rho");
  if (rho <= 0) throw std::invalid_argument("--rho must be positive");
  return rho;
}

}  // namespace

const std::vector<std::string>& CurveKinds() {
  static const std::vector<std::string> kinds = {
      "adp-gaussian",      "pbdp-gaussian",    "zcdp-bound",
      "tradeoff-pure",     "tradeoff-gaussian", "tradeoff-zcdp",
      "bayes-known-rest",  "bayes-arbitrary",  "bayes-pbdp"};
  return kinds;
}

bool CurveUsesLogGrid(const std::string& kind) {
  return kind == "pbdp-gaussian" || kind == "bayes-pbdp";
}

GridSpec DefaultCurveGrid(const std::string& kind) {
  if (CurveUsesLogGrid(kind)) return GridSpec{1e-6, 0.5, 200, true};
  if (kind.rfind("tradeoff-", 0) == 0) return GridSpec{0.0, 1.0, 200, false};
  return GridSpec{0.0, 20.0, 200, false};
}

CurveTable SampleCurve(const std::string& kind, const CurveParams& params,
                       const std::vector<double>& grid) {
  std::function<double(double)> f;
  std::string x_name;
  std::string y_name;
  if (kind == "adp-gaussian") {
    const double mu = MuOf(params);
    f = [mu](double eps) { return GaussianApproxDpDelta(mu, eps); };
    x_name = "eps", y_name = "delta";
  } else if (kind == "pbdp-gaussian") {
    const double mu = MuOf(params);
    f = [mu](double delta) { return GaussianPbdpEpsilon(mu, delta); };
    x_name = "delta", y_name = "eps";
  } else if (kind == "zcdp-bound") {
    const double rho = PositiveRho(params);
    f = [rho](double eps) { return ZcdpToDelta(rho, eps); };
    x_name = "eps", y_name = "delta";
  } else if (kind == "tradeoff-pure") {
    const double eps = Need(params.eps, "eps");
    f = [eps](double level) { return PureDpPowerBound(eps, level); };
    x_name = "level", y_name = "power";
  } else if (kind == "tradeoff-gaussian") {
    const double mu = MuOf(params);
    f = [mu](double level) { return GaussianExactPower(mu, level); };
    x_name = "level", y_name = "power";
  } else if (kind == "tradeoff-zcdp") {
    const double rho = PositiveRho(params);
    f = [rho](double level) { return ZcdpPowerBound(rho, level); };
    x_name = "level", y_name = "power";
  } else if (kind == "bayes-known-rest") {
    const PrivacyProfile p = PrivacyProfile::Zcdp(PositiveRho(params));
    f = [p](double eps) { return BayesKnownRestDelta(p, eps); };
    x_name = "eps", y_name = "delta";
  } else if (kind == "bayes-arbitrary") {
    const PrivacyProfile p = PrivacyProfile::Zcdp(PositiveRho(params));
    f = [p](double eps) { return BayesArbitraryPriorDelta(p, eps); };
    x_name = "eps", y_name = "delta";
  } else if (kind == "bayes-pbdp") {
    const TradeoffCurve g = TradeoffCurve::Gaussian(MuOf(params));
    f = [g](double delta) { return BayesPbdpEpsilon(g, delta); };
    x_name = "delta", y_name = "eps";
  } else {
    throw std::invalid_argument("unknown curve kind '" + kind + "'");
  }
  CurveTable t{kind, x_name, grid, {{y_name, {}}}};
  for (double x : grid) t.series[0].y.push_back(f(x));
  return t;
}

}  // namespace dpsem
