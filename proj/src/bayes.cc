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

#include "dpsem/bayes.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "dpsem/accountants.h"
#include "dpsem/plrv.h"

namespace dpsem {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double LogSumExp(const Eigen::VectorXd& v) {
  const double m = v.maxCoeff();
  if (m == -kInf) return -kInf;
  return m + std::log((v.array() - m).exp().sum());
}

double SafeLog(double p) { return p > 0 ? std::log(p) : -kInf; }

void CheckRows(const Eigen::MatrixXd& m, const char* what) {
  if ((m.array() < 0).any()) {
    throw std::invalid_argument(std::string(what) + ": negative probability");
  }
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (std::abs(m.row(i).sum() - 1.0) > 1e-12) {
      throw std::invalid_argument(std::string(what) + ": rows must sum to 1");
    }
  }
}

}  // namespace

SmallUniversePrior SmallUniversePrior::KnownRest(
    const Eigen::VectorXd& record_prob) {
  SmallUniversePrior p{Eigen::VectorXd::Ones(1), record_prob.transpose()};
  p.Validate();
  return p;
}

void SmallUniversePrior::Validate() const {
  if (rest_prob.size() == 0 || conditional.rows() != rest_prob.size() ||
      conditional.cols() == 0) {
    throw std::invalid_argument("prior: shape mismatch");
  }
  CheckRows(rest_prob.transpose(), "prior over rest");
  CheckRows(conditional, "prior conditional");
}

MechanismFamily MechanismFamily::FromProbabilities(
    const std::vector<Eigen::MatrixXd>& probs) {
  MechanismFamily f;
  for (const Eigen::MatrixXd& p : probs) {
    CheckRows(p, "mechanism");
    f.log_prob.push_back(p.unaryExpr(&SafeLog));
  }
  return f;
}

void MechanismFamily::Validate(const SmallUniversePrior& prior) const {
  prior.Validate();
  if (static_cast<int>(log_prob.size()) != prior.num_rest()) {
    throw std::invalid_argument("mechanism: one table per rest dataset needed");
  }
  for (const Eigen::MatrixXd& lp : log_prob) {
    if (lp.rows() != prior.num_records() ||
        lp.cols() != log_prob.front().cols()) {
      throw std::invalid_argument("mechanism: table shape mismatch");
    }
    for (Eigen::Index r = 0; r < lp.rows(); ++r) {
      if (std::abs(LogSumExp(lp.row(r).transpose())) > 1e-12) {
        throw std::invalid_argument("mechanism: rows must sum to 1");
      }
    }
  }
}

BayesVerdict ExactPosteriors(const SmallUniversePrior& prior,
                             const MechanismFamily& mech, int omega) {
  mech.Validate(prior);
  if (omega < 0 || omega >= mech.num_outputs()) {
    throw std::invalid_argument("output index out of range");
  }
  const int nd = prior.num_rest();
  const int nr = prior.num_records();
  const Eigen::VectorXd log_rest = prior.rest_prob.unaryExpr(&SafeLog);
  const Eigen::MatrixXd log_cond = prior.conditional.unaryExpr(&SafeLog);

  Eigen::VectorXd actual(nr);
  Eigen::VectorXd counter(nr);
  Eigen::VectorXd terms(nd);
  // Counterfactual output law given the rest: the record is redrawn.
  Eigen::VectorXd redrawn(nd);
  for (int d = 0; d < nd; ++d) {
    redrawn[d] = LogSumExp(log_cond.row(d).transpose() +
                           mech.log_prob[d].col(omega));
  }
  for (int r = 0; r < nr; ++r) {
    for (int d = 0; d < nd; ++d) {
      terms[d] = log_rest[d] + log_cond(d, r) + mech.log_prob[d](r, omega);
    }
    actual[r] = LogSumExp(terms);
    for (int d = 0; d < nd; ++d) {
      terms[d] = log_rest[d] + log_cond(d, r) + redrawn[d];
    }
    counter[r] = LogSumExp(terms);
  }
  const double ma = LogSumExp(actual);
  const double mc = LogSumExp(counter);
  if (ma == -kInf && mc == -kInf) {
    throw std::invalid_argument("output has probability 0 in both worlds");
  }

  BayesVerdict v;
  v.actual_posterior = (actual.array() - ma).exp();
  v.counterfactual_posterior = (counter.array() - mc).exp();
  v.ratio.resize(nr);
  for (int r = 0; r < nr; ++r) {
    const double la = actual[r] - ma;
    const double lc = counter[r] - mc;
    if (lc == -kInf) {
      v.ratio[r] = la == -kInf ? kNaN : kInf;
    } else {
      v.ratio[r] = std::exp(la - lc);
    }
  }
  v.marginal_actual = std::exp(ma);
  v.marginal_counterfactual = std::exp(mc);
  return v;
}

RatioCheck PureDpRatioBoundCheck(const SmallUniversePrior& prior,
                                 const MechanismFamily& mech, double eps) {
  mech.Validate(prior);
  for (const Eigen::MatrixXd& lp : mech.log_prob) {
    const Eigen::MatrixXd p = lp.array().exp();
    for (Eigen::Index a = 0; a < p.rows(); ++a) {
      for (Eigen::Index b = 0; b < p.rows(); ++b) {
        if (a == b) continue;
        const FiniteMechanismPair pair{std::vector<std::string>(p.cols()),
                                       p.row(a).transpose(),
                                       p.row(b).transpose()};
        if (PureDpEpsilon(PlrvOfFinitePair(pair)) > eps + 1e-9) {
          throw std::invalid_argument("mechanism is not pure eps-DP");
        }
      }
    }
  }
  const double upper = std::exp(eps) * (1 + 1e-9);
  const double lower = std::exp(-eps) * (1 - 1e-9);
  RatioCheck out{true, 1.0};
  for (int w = 0; w < mech.num_outputs(); ++w) {
    BayesVerdict v;
    try {
      v = ExactPosteriors(prior, mech, w);
    } catch (const std::invalid_argument&) {
      continue;  // output never produced
    }
    for (Eigen::Index r = 0; r < v.ratio.size(); ++r) {
      const double x = v.ratio[r];
      if (std::isnan(x)) continue;
      if (x > upper || x < lower) out.within_bound = false;
      out.worst_ratio = std::max({out.worst_ratio, x, 1 / x});
    }
  }
  return out;
}

double BayesKnownRestDelta(const PrivacyProfile& profile, double eps) {
  if (profile.is_zcdp()) {
    const double rho = profile.rho();
    if (rho == 0) return eps > 0 ? 0.0 : 1.0;
    if (!(eps > rho)) return 1.0;
    return std::exp(-(eps + rho) * (eps + rho) / (4 * rho));
  }
  double best = 1.0;
  for (const RdpPoint& p : profile.points()) {
    best = std::min(best, std::exp(-(eps - p.gamma) * p.alpha - p.gamma));
  }
  return std::clamp(best, 0.0, 1.0);
}

double BayesArbitraryPriorDelta(const PrivacyProfile& profile, double eps) {
  if (profile.is_zcdp()) {
    if (profile.rho() == 0) return eps > 0 ? 0.0 : 1.0;
    return ZcdpToDelta(profile.rho(), eps);
  }
  if (profile.points().empty()) return 1.0;
  return RdpToDelta(profile.points(), eps);
}

double BayesPbdpEpsilon(const TradeoffCurve& f, double delta) {
  return FdpToEpsDelta(f, delta);
}

EpsDeltaCurve BayesKnownRestCurve(const PrivacyProfile& profile) {
  return {Semantics::kBayesKnownRest,
          [profile](double eps) { return BayesKnownRestDelta(profile, eps); }};
}

EpsDeltaCurve BayesArbitraryPriorCurve(const PrivacyProfile& profile) {
  return {Semantics::kBayesArbitraryPrior, [profile](double eps) {
            return BayesArbitraryPriorDelta(profile, eps);
          }};
}

WrongPriorResult WrongPriorClosedForm(double p_target, double omega) {
  if (!(p_target > 0 && p_target < 1)) {
    throw std::invalid_argument("p_target must lie in (0, 1)");
  }
  // Attacker's view: the count is the target's indicator plus N(0, 1).
  Eigen::Vector2d w(std::log(p_target) - (omega - 1) * (omega - 1) / 2,
                    std::log1p(-p_target) - omega * omega / 2);
  const double actual = std::exp(w[0] - LogSumExp(w));
  // The counterfactual output ignores the record, so the prior is returned.
  return {actual, p_target, actual / p_target};
}

WrongPriorResult WrongPriorDiscretized(double p_target, double omega,
                                       double step, double lo, double hi) {
  if (!(step > 0) || !(hi > lo)) throw std::invalid_argument("bad grid");
  const int n = static_cast<int>(std::lround((hi - lo) / step)) + 1;
  const int w = static_cast<int>(std::lround((omega - lo) / step));
  if (w < 0 || w >= n) throw std::invalid_argument("omega off the grid");
  // Record 0 has the attribute (count 1), record 1 does not (count 0).
  Eigen::MatrixXd lp(2, n);
  for (int c = 0; c < 2; ++c) {
    for (int j = 0; j < n; ++j) {
      const double x = lo + j * step - (1 - c);
      lp(c, j) = -x * x / 2;
    }
    lp.row(c).array() -= LogSumExp(lp.row(c).transpose());
  }
  const SmallUniversePrior prior =
      SmallUniversePrior::KnownRest(Eigen::Vector2d(p_target, 1 - p_target));
  const BayesVerdict v = ExactPosteriors(prior, MechanismFamily{{lp}}, w);
  return {v.actual_posterior[0], v.counterfactual_posterior[0], v.ratio[0]};
}

double MaxRowRenyiDivergence(const Eigen::MatrixXd& mech_prob, double alpha) {
  double worst = 0.0;
  for (Eigen::Index a = 0; a < mech_prob.rows(); ++a) {
    for (Eigen::Index b = 0; b < mech_prob.rows(); ++b) {
      if (a == b) continue;
      const FiniteMechanismPair pair{
          std::vector<std::string>(mech_prob.cols()),
          mech_prob.row(a).transpose(), mech_prob.row(b).transpose()};
      worst = std::max(worst, RenyiDivergence(pair, alpha));
    }
  }
  return worst;
}

KnownRestMcResult KnownRestMonteCarlo(const Eigen::VectorXd& record_prob,
                                      const Eigen::MatrixXd& mech_prob,
                                      double eps, int64_t draws, uint64_t seed,
                                      const std::vector<double>& alphas) {
  CheckRows(record_prob.transpose(), "record prior");
  CheckRows(mech_prob, "mechanism");
  if (mech_prob.rows() != record_prob.size() || draws <= 0) {
    throw std::invalid_argument("Monte Carlo: bad shapes or draw count");
  }
  const int nr = static_cast<int>(mech_prob.rows());
  const int nw = static_cast<int>(mech_prob.cols());
  const Eigen::RowVectorXd marginal = record_prob.transpose() * mech_prob;
  const double threshold = std::exp(eps);

  // exceed(r, w): the posterior ratio for record r at output w reaches e^eps.
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> exceed(nr, nw);
  KnownRestMcResult out;
  out.draws = draws;
  for (int r = 0; r < nr; ++r) {
    double exact = 0.0;
    for (int w = 0; w < nw; ++w) {
      exceed(r, w) = marginal[w] > 0 && mech_prob(r, w) >= threshold * marginal[w];
      if (exceed(r, w)) exact += marginal[w];
    }
    out.exact.push_back(exact);
  }

  std::vector<double> rp(record_prob.data(), record_prob.data() + nr);
  std::discrete_distribution<int> pick_record(rp.begin(), rp.end());
  std::vector<std::discrete_distribution<int>> pick_output;
  for (int r = 0; r < nr; ++r) {
    const Eigen::RowVectorXd row = mech_prob.row(r);
    pick_output.emplace_back(row.data(), row.data() + nw);
  }
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32)};
  std::mt19937_64 rng(seq);
  std::vector<int64_t> hits(nr, 0);
  for (int64_t i = 0; i < draws; ++i) {
    const int w = pick_output[pick_record(rng)](rng);
    for (int r = 0; r < nr; ++r) hits[r] += exceed(r, w);
  }
  for (int r = 0; r < nr; ++r) {
    out.frequency.push_back(static_cast<double>(hits[r]) / draws);
  }

  out.bound = 1.0;
  for (double a : alphas) {
    const double g = MaxRowRenyiDivergence(mech_prob, a);
    out.bound = std::min(out.bound, std::exp(-(eps - g) * a - g));
  }
  return out;
}

}  // namespace dpsem
