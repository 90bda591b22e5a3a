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

#ifndef DPSEM_CURVE_IO_H_
#define DPSEM_CURVE_IO_H_

#include <string>
#include <vector>

namespace dpsem {

// "start:stop:points" or "start:stop:points:log".
struct GridSpec {
  double start = 0.0;
  double stop = 1.0;
  int points = 2;
  bool log = false;

  static GridSpec Parse(const std::string& spec);
  std::vector<double> Values() const;
};

struct Series {
  std::string name;
  std::vector<double> y;
};

// Several curves sampled on one shared x grid.
struct CurveTable {
  std::string title;
  std::string x_name;
  std::vector<double> x;
  std::vector<Series> series;
};

// Values are printed with %.17g so files round-trip exactly.
std::string FormatDouble(double v);

std::string ToCsv(const CurveTable& t);
std::string ToJson(const CurveTable& t);
// Static line chart; non-finite points are skipped.
std::string ToSvg(const CurveTable& t, bool log_x = false);

enum class OutputFormat { kCsv, kJson, kSvg };
OutputFormat ParseOutputFormat(const std::string& s);
std::string Render(const CurveTable& t, OutputFormat f, bool log_x = false);

}  // namespace dpsem

#endif  // DPSEM_CURVE_IO_H_
