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

#ifndef DPSEM_PLRV_H_
#define DPSEM_PLRV_H_

#include <string>
#include <vector>

#include <Eigen/Core>

namespace dpsem {

struct FiniteMechanismPair;

// One support point of a discrete privacy-loss distribution.
struct Atom {
  double value;  // privacy loss in nats
  double prob;
};

// Privacy-loss random variable: the law of log P(M(D1)=w)/P(M(D2)=w) when
// w ~ M(D1). Either a finite atom list with an optional mass at +inf, or a
// parametric normal N(mean, variance).
class Plrv {
 public:
  // Atoms closer than this are merged.
  static constexpr double kMergeTolerance = 1e-12;

  // Validates that masses sum to one (within 1e-12), merges near-equal
  // atoms, drops zero-mass atoms and sorts by value.
  static Plrv Discrete(std::vector<Atom> atoms, double infinity_mass = 0.0);
  static Plrv Gaussian(double mean, double variance);

  bool is_gaussian() const { return gaussian_; }
  // Sorted ascending by value, every prob > 0. Empty for Gaussian.
  const std::vector<Atom>& atoms() const { return atoms_; }
  double infinity_mass() const { return infinity_mass_; }
  double mean() const { return mean_; }
  double variance() const { return variance_; }

 private:
  friend Plrv Compose(const Plrv& a, const Plrv& b);
  friend Plrv PlrvOfFinitePair(const FiniteMechanismPair& pair);
  Plrv() = default;
  static Plrv Normalized(std::vector<Atom> atoms, double infinity_mass);

  bool gaussian_ = false;
  std::vector<Atom> atoms_;
  double infinity_mass_ = 0.0;
  double mean_ = 0.0;
  double variance_ = 0.0;
};

// Output distributions of one mechanism on a pair of neighbors.
struct FiniteMechanismPair {
  std::vector<std::string> outputs;
  Eigen::VectorXd p1;  // under D1
  Eigen::VectorXd p2;  // under D2

  // Labels default to "0", "1", ...; throws std::invalid_argument unless both
  // vectors are non-negative, equally long, and sum to one within 1e-12.
  static FiniteMechanismPair Make(Eigen::VectorXd p1, Eigen::VectorXd p2,
                                  std::vector<std::string> outputs = {});
  void Validate() const;
  FiniteMechanismPair Reversed() const;
  int size() const { return static_cast<int>(p1.size()); }
};

// Randomized response with flip parameter eps0; the geometric mechanism has
// the same loss distribution.
Plrv RandomizedResponsePlrv(double eps0, bool differing_on_sensitive_bit);
Plrv GeometricPlrv(double eps0, bool differing_on_sensitive_bit);

// N(mu^2/2, mu^2); mu is sensitivity over noise standard deviation.
Plrv GaussianPlrv(double mu);

// Releasing m of n records uniformly at random.
Plrv SamplingPlrv(int n, int m);

// Law of the sum of independent draws. Throws std::invalid_argument on a
// discrete/Gaussian mix ("representation mismatch").
Plrv Compose(const Plrv& a, const Plrv& b);

Plrv PlrvOfFinitePair(const FiniteMechanismPair& pair);

// Largest |loss| with positive mass; +inf with any mass at infinity or for a
// non-degenerate Gaussian.
double PureDpEpsilon(const Plrv& x);

// P(fwd >= eps) - e^eps P(rev <= -eps), clamped to [0, 1]. For Gaussian
// inputs the reverse must equal the forward distribution.
double ApproxDpDelta(const Plrv& forward, const Plrv& reverse, double eps);

// P(X > t), counting the mass at +inf.
double TailProbability(const Plrv& x, double t);

// E[exp(lambda * X)]; +inf when lambda > 0 and X has mass at +inf.
double ExpectedExpLoss(const Plrv& x, double lambda);

// Distributional equality: same representation and matching atoms/masses.
bool SameDistribution(const Plrv& a, const Plrv& b, double tol);

}  // namespace dpsem

#endif  // DPSEM_PLRV_H_
