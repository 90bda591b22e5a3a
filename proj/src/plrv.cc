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

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "dpsem/normal.h"

namespace dpsem {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSumTolerance = 1e-12;

void CheckProbability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0 + kSumTolerance)) {
    throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
  }
}

}  // namespace

Plrv Plrv::Normalized(std::vector<Atom> atoms, double infinity_mass) {
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& x, const Atom& y) { return x.value < y.value; });
  Plrv out;
  out.infinity_mass_ = infinity_mass;
  for (const Atom& a : atoms) {
    if (a.prob <= 0.0) continue;
    if (!out.atoms_.empty() &&
        a.value - out.atoms_.back().value < kMergeTolerance) {
      // Keep the representative of the heavier side to stay order-free.
      Atom& last = out.atoms_.back();
      if (a.prob > last.prob) last.value = a.value;
      last.prob += a.prob;
    } else {
      out.atoms_.push_back(a);
    }
  }
  return out;
}

Plrv Plrv::Discrete(std::vector<Atom> atoms, double infinity_mass) {
  CheckProbability(infinity_mass, "infinity_mass");
  double total = infinity_mass;
  for (const Atom& a : atoms) {
    if (!std::isfinite(a.value)) {
      throw std::invalid_argument("atom values must be finite");
    }
    CheckProbability(a.prob, "atom probability");
    total += a.prob;
  }
  if (std::abs(total - 1.0) > kSumTolerance) {
    throw std::invalid_argument("PLRV masses must sum to 1");
  }
  return Normalized(std::move(atoms), infinity_mass);
}

Plrv Plrv::Gaussian(double mean, double variance) {
  if (!std::isfinite(mean) || !std::isfinite(variance) || variance < 0) {
    throw std::invalid_argument("Gaussian PLRV needs finite mean, variance >= 0");
  }
  Plrv out;
  out.gaussian_ = true;
  out.mean_ = mean;
  out.variance_ = variance;
  return out;
}

FiniteMechanismPair FiniteMechanismPair::Make(Eigen::VectorXd p1,
                                              Eigen::VectorXd p2,
                                              std::vector<std::string> outputs) {
  if (outputs.empty()) {
    for (Eigen::Index i = 0; i < p1.size(); ++i) {
      outputs.push_back(std::to_string(i));
    }
  }
  FiniteMechanismPair pair{std::move(outputs), std::move(p1), std::move(p2)};
  pair.Validate();
  return pair;
}

void FiniteMechanismPair::Validate() const {
  if (p1.size() != p2.size() ||
      static_cast<size_t>(p1.size()) != outputs.size() || p1.size() == 0) {
    throw std::invalid_argument("mechanism pair: length mismatch");
  }
  if ((p1.array() < 0).any() || (p2.array() < 0).any()) {
    throw std::invalid_argument("mechanism pair: negative probability");
  }
  if (std::abs(p1.sum() - 1.0) > kSumTolerance ||
      std::abs(p2.sum() - 1.0) > kSumTolerance) {
    throw std::invalid_argument("mechanism pair: probabilities must sum to 1");
  }
}

FiniteMechanismPair FiniteMechanismPair::Reversed() const {
  return FiniteMechanismPair{outputs, p2, p1};
}

Plrv RandomizedResponsePlrv(double eps0, bool differing_on_sensitive_bit) {
  if (!(eps0 >= 0) || !std::isfinite(eps0)) {
    throw std::invalid_argument("eps0 must be finite and non-negative");
  }
  if (!differing_on_sensitive_bit) return Plrv::Discrete({{0.0, 1.0}});
  // 1/(1+e^-x) form keeps the larger mass accurate for big eps0.
  const double hi = 1.0 / (1.0 + std::exp(-eps0));
  const double lo = 1.0 / (1.0 + std::exp(eps0));
  return Plrv::Discrete({{eps0, hi}, {-eps0, lo}});
}

Plrv GeometricPlrv(double eps0, bool differing_on_sensitive_bit) {
  return RandomizedResponsePlrv(eps0, differing_on_sensitive_bit);
}

Plrv GaussianPlrv(double mu) {
  if (!(mu >= 0) || !std::isfinite(mu)) {
    throw std::invalid_argument("mu must be finite and non-negative");
  }
  return Plrv::Gaussian(mu * mu / 2, mu * mu);
}

Plrv SamplingPlrv(int n, int m) {
  if (n <= 0 || m < 0 || m > n) {
    throw std::invalid_argument("sampling PLRV needs 0 <= m <= n, n > 0");
  }
  const double inf_mass = static_cast<double>(m) / n;
  return Plrv::Discrete({{0.0, static_cast<double>(n - m) / n}}, inf_mass);
}

Plrv Compose(const Plrv& a, const Plrv& b) {
  if (a.is_gaussian() != b.is_gaussian()) {
    throw std::invalid_argument("representation mismatch");
  }
  if (a.is_gaussian()) {
    return Plrv::Gaussian(a.mean() + b.mean(), a.variance() + b.variance());
  }
  std::vector<Atom> atoms;
  atoms.reserve(a.atoms().size() * b.atoms().size());
  for (const Atom& x : a.atoms()) {
    for (const Atom& y : b.atoms()) {
      atoms.push_back({x.value + y.value, x.prob * y.prob});
    }
  }
  // Any infinite summand makes the sum infinite.
  const double inf_mass = a.infinity_mass() + b.infinity_mass() -
                          a.infinity_mass() * b.infinity_mass();
  return Plrv::Normalized(std::move(atoms), inf_mass);
}

Plrv PlrvOfFinitePair(const FiniteMechanismPair& pair) {
  pair.Validate();
  std::vector<Atom> atoms;
  double inf_mass = 0.0;
  for (int i = 0; i < pair.size(); ++i) {
    const double p = pair.p1[i];
    const double q = pair.p2[i];
    if (p == 0.0) continue;
    if (q == 0.0) {
      inf_mass += p;
    } else {
      atoms.push_back({std::log(p) - std::log(q), p});
    }
  }
  return Plrv::Normalized(std::move(atoms), inf_mass);
}

double PureDpEpsilon(const Plrv& x) {
  if (x.is_gaussian()) return x.variance() > 0 ? kInf : std::abs(x.mean());
  if (x.infinity_mass() > 0) return kInf;
  double eps = 0.0;
  for (const Atom& a : x.atoms()) eps = std::max(eps, std::abs(a.value));
  return eps;
}

double TailProbability(const Plrv& x, double t) {
  if (x.is_gaussian()) {
    if (x.variance() == 0) return x.mean() > t ? 1.0 : 0.0;
    return NormalSf((t - x.mean()) / std::sqrt(x.variance()));
  }
  double tail = x.infinity_mass();
  for (const Atom& a : x.atoms()) {
    if (a.value > t) tail += a.prob;
  }
  return std::min(tail, 1.0);
}

double ApproxDpDelta(const Plrv& forward, const Plrv& reverse, double eps) {
  if (forward.is_gaussian() != reverse.is_gaussian()) {
    throw std::invalid_argument("representation mismatch");
  }
  double delta;
  if (forward.is_gaussian()) {
    if (forward.mean() != reverse.mean() ||
        forward.variance() != reverse.variance()) {
      throw std::invalid_argument(
          "Gaussian PLRV pair must be symmetric (reverse equals forward)");
    }
    if (forward.variance() == 0) {
      const double mass = forward.mean() >= eps ? 1.0 : 0.0;
      delta = mass - std::exp(eps) * (-reverse.mean() <= -eps ? 1.0 : 0.0);
    } else {
      const double mu = std::sqrt(forward.variance());
      const double m = forward.mean();
      const double head = NormalCdf((m - eps) / mu);
      const double tail = NormalCdf((-eps - m) / mu);
      delta = head - (tail > 0 ? std::exp(eps + std::log(tail)) : 0.0);
    }
  } else {
    // Ties at exactly +-eps contribute p - e^eps q = 0, so the tolerance only
    // guards against log-ratio rounding.
    constexpr double kTie = 1e-12;
    double head = forward.infinity_mass();
    for (const Atom& a : forward.atoms()) {
      if (a.value >= eps - kTie) head += a.prob;
    }
    double tail = 0.0;
    for (const Atom& a : reverse.atoms()) {
      if (a.value <= -eps + kTie) tail += a.prob;
    }
    delta = head - std::exp(eps) * tail;
  }
  return std::clamp(delta, 0.0, 1.0);
}

double ExpectedExpLoss(const Plrv& x, double lambda) {
  if (x.is_gaussian()) {
    return std::exp(lambda * x.mean() + lambda * lambda * x.variance() / 2);
  }
  if (x.infinity_mass() > 0 && lambda > 0) return kInf;
  double sum = 0.0;
  for (const Atom& a : x.atoms()) sum += a.prob * std::exp(lambda * a.value);
  return sum;
}

bool SameDistribution(const Plrv& a, const Plrv& b, double tol) {
  if (a.is_gaussian() != b.is_gaussian()) return false;
  if (a.is_gaussian()) {
    return std::abs(a.mean() - b.mean()) <= tol &&
           std::abs(a.variance() - b.variance()) <= tol;
  }
  if (a.atoms().size() != b.atoms().size() ||
      std::abs(a.infinity_mass() - b.infinity_mass()) > tol) {
    return false;
  }
  for (size_t i = 0; i < a.atoms().size(); ++i) {
    if (std::abs(a.atoms()[i].value - b.atoms()[i].value) > tol ||
        std::abs(a.atoms()[i].prob - b.atoms()[i].prob) > tol) {
      return false;
    }
  }
  return true;
}

}  // namespace dpsem
