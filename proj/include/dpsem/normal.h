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

#ifndef DPSEM_NORMAL_H_
#define DPSEM_NORMAL_H_

namespace dpsem {

// Standard normal distribution helpers. Every closed form in the library
// routes through these three functions.

// P(Z <= x), via erfc so the lower tail keeps full relative precision.
double NormalCdf(double x);

// P(Z > x), i.e. NormalCdf(-x) without cancellation.
double NormalSf(double x);

// Inverse of NormalCdf on (0, 1); returns -inf/+inf at 0/1.
double NormalQuantile(double p);

}  // namespace dpsem

#endif  // DPSEM_NORMAL_H_
