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

#ifndef DPSEM_CURVES_H_
#define DPSEM_CURVES_H_

#include <optional>
#include <string>
#include <vector>

#include "dpsem/curve_io.h"

namespace dpsem {

// Parameters shared by the named curves; unused ones stay empty.
struct CurveParams {
  std::optional<double> rho;
  std::optional<double> mu;  // defaults to sqrt(2 rho) where needed
  std::optional<double> eps;
};

// adp-gaussian, pbdp-gaussian, zcdp-bound, tradeoff-pure, tradeoff-gaussian,
// tradeoff-zcdp, bayes-known-rest, bayes-arbitrary, bayes-pbdp.
const std::vector<std::string>& CurveKinds();

// 200-point grid on the curve's natural axis.
GridSpec DefaultCurveGrid(const std::string& kind);
bool CurveUsesLogGrid(const std::string& kind);

// Throws std::invalid_argument for an unknown kind or missing parameter.
CurveTable SampleCurve(const std::string& kind, const CurveParams& params,
                       const std::vector<double>& grid);

}  // namespace dpsem

#endif  // DPSEM_CURVES_H_
