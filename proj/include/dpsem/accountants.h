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

#ifndef DPSEM_ACCOUNTANTS_H_
#define DPSEM_ACCOUNTANTS_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "dpsem/plrv.h"
#include "dpsem/profiles.h"
#include "dpsem/tradeoff.h"

namespace dpsem {

// Linear composition. Negative rho or an empty alpha intersection throws.
double ZcdpCompose(const std::vector<double>& rhos);
std::vector<RdpPoint> RdpCompose(const std::vector<RdpPoint>& a,
                                 const std::vector<RdpPoint>& b);

// Tail bounds P(L > eps) implied by zCDP / RDP.
double ZcdpToDelta(double rho, double eps);
double RdpToDelta(const std::vector<RdpPoint>& points, double eps);

// eps = log(delta / f^{-1}(1 - delta)) for the type-II error function f of
// the curve; +inf when the inverse is 0. delta must lie in (0, 1].
double FdpToEpsDelta(const TradeoffCurve& f, double delta);

// The same quantity for a Gaussian curve in closed form.
double GaussianPbdpEpsilon(double mu, double delta);

// Exact approximate-DP delta(eps) of the Gaussian mechanism, and its inverse
// eps(delta) by bisection (0 when delta already exceeds delta(0)).
double GaussianApproxDpDelta(double mu, double eps);
double GaussianApproxDpEpsilon(double mu, double delta);

// Tight pbdp delta of a finite pair at eps > 0: the supremum of delta with
// T(e^{-eps} delta) > delta for the Neyman-Pearson curve T (0 if none),
// maximized over both neighbor orders.
double PbdpDeltaFinite(const FiniteMechanismPair& pair, double eps);

// D_alpha(p1 || p2); +inf when p1 puts mass where p2 has none.
double RenyiDivergence(const FiniteMechanismPair& pair, double alpha);

// Approximate-DP, pbdp and tail-bound curves as EpsDeltaCurve values.
EpsDeltaCurve GaussianApproxDpCurve(double mu);
EpsDeltaCurve ZcdpTailCurve(double rho);
EpsDeltaCurve RdpTailCurve(std::vector<RdpPoint> points);

// Append-only zCDP budget ledger for fully adaptive composition. Mutations
// are single-writer; copies are consistent snapshots.
class Odometer {
 public:
  struct Entry {
    std::string label;
    double rho;
  };

  explicit Odometer(double cap);

  // Appends the charge if it fits under the cap; otherwise leaves the ledger
  // untouched and returns false. Negative rho throws.
  bool Register(const std::string& label, double rho);

  double cap() const { return cap_; }
  double spent() const { return spent_; }
  double remaining() const;
  const std::vector<Entry>& entries() const { return entries_; }

  // One "label<TAB>rho<TAB>cumulative" line per entry after a "# cap" line.
  void WriteLedger(std::ostream& out) const;
  static Odometer ReadLedger(std::istream& in);

 private:
  double cap_;
  double spent_ = 0.0;
  std::vector<Entry> entries_;
};

}  // namespace dpsem

#endif  // DPSEM_ACCOUNTANTS_H_
