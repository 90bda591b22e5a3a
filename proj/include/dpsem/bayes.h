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

#ifndef DPSEM_BAYES_H_
#define DPSEM_BAYES_H_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "dpsem/profiles.h"
#include "dpsem/tradeoff.h"

namespace dpsem {

// Attacker prior over a small universe: a distribution over the rest of the
// dataset and, for each rest, a conditional distribution over the target's
// record.
struct SmallUniversePrior {
  Eigen::VectorXd rest_prob;    // pi(D_{-t})
  Eigen::MatrixXd conditional;  // row d: pi(r | D_{-t} = d)

  // Complete knowledge of the rest; record_prob is pi(r).
  static SmallUniversePrior KnownRest(const Eigen::VectorXd& record_prob);
  int num_rest() const { return static_cast<int>(rest_prob.size()); }
  int num_records() const { return static_cast<int>(conditional.cols()); }
  void Validate() const;
};

// Output log-probabilities of a finite mechanism for every full dataset:
// log_prob[d](r, w) = log P(M(D_{-t} = d with target record r) = w).
struct MechanismFamily {
  std::vector<Eigen::MatrixXd> log_prob;

  static MechanismFamily FromProbabilities(
      const std::vector<Eigen::MatrixXd>& probs);
  int num_outputs() const { return static_cast<int>(log_prob.front().cols()); }
  void Validate(const SmallUniversePrior& prior) const;
};

// Posteriors about the target's record in the actual world and in the
// counterfactual world where the record is redrawn from the attacker's
// conditional prior.
struct BayesVerdict {
  Eigen::VectorXd actual_posterior;
  Eigen::VectorXd counterfactual_posterior;
  // actual / counterfactual; +inf when only the counterfactual vanishes and
  // NaN when both do.
  Eigen::VectorXd ratio;
  double marginal_actual;
  double marginal_counterfactual;
};

BayesVerdict ExactPosteriors(const SmallUniversePrior& prior,
                             const MechanismFamily& mech, int omega);

struct RatioCheck {
  bool within_bound;
  double worst_ratio;  // max over outputs and records of max(r, 1/r)
};

// Sweeps every output; throws std::invalid_argument unless every neighbor
// pair of the family (same rest, different record) is pure eps-DP.
RatioCheck PureDpRatioBoundCheck(const SmallUniversePrior& prior,
                                 const MechanismFamily& mech, double eps);

// Probability bounds on a posterior ratio of at least e^eps: with the rest
// of the data known, and under arbitrary priors.
double BayesKnownRestDelta(const PrivacyProfile& profile, double eps);
double BayesArbitraryPriorDelta(const PrivacyProfile& profile, double eps);

// Known-rest Bayesian curve for an f-DP mechanism; same value as the pbdp
// conversion.
double BayesPbdpEpsilon(const TradeoffCurve& f, double delta);

EpsDeltaCurve BayesKnownRestCurve(const PrivacyProfile& profile);
EpsDeltaCurve BayesArbitraryPriorCurve(const PrivacyProfile& profile);

// Wrong-prior attacker: the true count is n_others + 1, the attacker believes
// the others all lack the attribute and gives the target prior probability
// p_target. N(0, 1) noise is added to the count and `omega` observed.
struct WrongPriorResult {
  double actual_posterior;
  double counterfactual_posterior;
  double ratio;
};
WrongPriorResult WrongPriorClosedForm(double p_target, double omega);
// Same setting with outputs rounded to a grid of the given step on [lo, hi].
WrongPriorResult WrongPriorDiscretized(double p_target, double omega,
                                       double step = 0.1, double lo = -10,
                                       double hi = 110);

// Monte Carlo estimate, for each record r, of the probability that the
// known-rest posterior ratio for r reaches e^eps when the record is drawn
// from the prior and the output from the mechanism. Also reports the exact
// probability and the RDP bound computed from the family's own divergences
// at `alphas`.
struct KnownRestMcResult {
  std::vector<double> frequency;
  std::vector<double> exact;
  double bound;
  int64_t draws;
};
KnownRestMcResult KnownRestMonteCarlo(const Eigen::VectorXd& record_prob,
                                      const Eigen::MatrixXd& mech_prob,
                                      double eps, int64_t draws, uint64_t seed,
                                      const std::vector<double>& alphas);

// Largest Renyi divergence of order alpha between any two rows.
double MaxRowRenyiDivergence(const Eigen::MatrixXd& mech_prob, double alpha);

}  // namespace dpsem

#endif  // DPSEM_BAYES_H_
