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

#include "dpsem/curve_io.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace dpsem {
namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#000000", "#9467bd", "#ff7f0e"};

double ParseNumber(const std::string& s) {
  size_t used = 0;
  double v;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad number in grid: '" + s + "'");
  }
  if (used != s.size()) throw std::invalid_argument("bad number in grid: '" + s + "'");
  return v;
}

std::string Escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

GridSpec GridSpec::Parse(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream in(spec);
  for (std::string p; std::getline(in, p, ':');) parts.push_back(p);
  if (parts.size() != 3 && parts.size() != 4) {
    throw std::invalid_argument("grid must be start:stop:points[:log]");
  }
  GridSpec g;
  g.start = ParseNumber(parts[0]);
  g.stop = ParseNumber(parts[1]);
  const double pts = ParseNumber(parts[2]);
  if (pts != std::floor(pts) || pts < 2 || pts > 1e7) {
    throw std::invalid_argument("grid needs an integer point count >= 2");
  }
  g.points = static_cast<int>(pts);
  if (parts.size() == 4) {
    if (parts[3] != "log") throw std::invalid_argument("grid suffix must be 'log'");
    g.log = true;
    if (!(g.start > 0 && g.stop > 0)) {
      throw std::invalid_argument("log grid needs positive endpoints");
    }
  }
  if (!std::isfinite(g.start) || !std::isfinite(g.stop) || !(g.stop > g.start)) {
    throw std::invalid_argument("grid needs finite start < stop");
  }
  return g;
}

std::vector<double> GridSpec::Values() const {
  std::vector<double> v(points);
  const double a = log ? std::log(start) : start;
  const double b = log ? std::log(stop) : stop;
  for (int i = 0; i < points; ++i) {
    const double x = a + (b - a) * i / (points - 1);
    v[i] = log ? std::exp(x) : x;
  }
  v.front() = start;
  v.back() = stop;
  return v;
}

std::string FormatDouble(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string ToCsv(const CurveTable& t) {
  std::string out = t.x_name;
  for (const Series& s : t.series) out += "," + s.name;
  out += "\n";
  for (size_t i = 0; i < t.x.size(); ++i) {
    out += FormatDouble(t.x[i]);
    for (const Series& s : t.series) out += "," + FormatDouble(s.y.at(i));
    out += "\n";
  }
  return out;
}

std::string ToJson(const CurveTable& t) {
  auto num = [](double v) -> nlohmann::json {
    if (std::isfinite(v)) return v;
    return nullptr;
  };
  nlohmann::json j;
  j["title"] = t.title;
  j["x_name"] = t.x_name;
  nlohmann::json xs = nlohmann::json::array();
  for (double x : t.x) xs.push_back(num(x));
  j["x"] = xs;
  j["series"] = nlohmann::json::array();
  for (const Series& s : t.series) {
    nlohmann::json ys = nlohmann::json::array();
    for (double y : s.y) ys.push_back(num(y));
    j["series"].push_back({{"name", s.name}, {"y", ys}});
  }
  return j.dump(2) + "\n";
}

std::string ToSvg(const CurveTable& t, bool log_x) {
  constexpr double kW = 640, kH = 480, kLeft = 70, kRight = 20, kTop = 40,
                   kBottom = 60;
  auto tx = [&](double x) { return log_x ? std::log10(x) : x; };
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (size_t i = 0; i < t.x.size(); ++i) {
    for (const Series& s : t.series) {
      const double x = tx(t.x[i]);
      const double y = s.y.at(i);
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  if (x0 > x1) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y1 = y0 + 1;
  auto px = [&](double x) { return kLeft + (tx(x) - x0) / (x1 - x0) * (kW - kLeft - kRight); };
  auto py = [&](double y) { return kH - kBottom - (y - y0) / (y1 - y0) * (kH - kTop - kBottom); };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW
      << "\" height=\"" << kH << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<metadata>\n" << Escape(ToCsv(t)) << "</metadata>\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kW / 2 << "\" y=\"20\" text-anchor=\"middle\">"
      << Escape(t.title) << "</text>\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kH - kBottom << "\" x2=\""
      << kW - kRight << "\" y2=\"" << kH - kBottom << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft
      << "\" y2=\"" << kH - kBottom << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = x0 + (x1 - x0) * i / 4;
    const double fy = y0 + (y1 - y0) * i / 4;
    const double xlabel = log_x ? std::pow(10.0, fx) : fx;
    const double sx = kLeft + (kW - kLeft - kRight) * i / 4;
    const double sy = kH - kBottom - (kH - kTop - kBottom) * i / 4;
    char xb[32], yb[32];
    std::snprintf(xb, sizeof xb, "%.3g", xlabel);
    std::snprintf(yb, sizeof yb, "%.3g", fy);
    out << "<text x=\"" << sx << "\" y=\"" << kH - kBottom + 18
        << "\" text-anchor=\"middle\">" << xb << "</text>\n"
        << "<text x=\"" << kLeft - 6 << "\" y=\"" << sy + 4
        << "\" text-anchor=\"end\">" << yb << "</text>\n";
  }
  out << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 15
      << "\" text-anchor=\"middle\">" << Escape(t.x_name) << "</text>\n";
  for (size_t k = 0; k < t.series.size(); ++k) {
    const Series& s = t.series[k];
    const char* color = kPalette[k % std::size(kPalette)];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
    for (size_t i = 0; i < t.x.size(); ++i) {
      if (!std::isfinite(tx(t.x[i])) || !std::isfinite(s.y[i])) continue;
      out << FormatDouble(px(t.x[i])) << "," << FormatDouble(py(s.y[i])) << " ";
    }
    out << "\"/>\n<text x=\"" << kLeft + 10 << "\" y=\"" << kTop + 14 * (k + 1)
        << "\" fill=\"" << color << "\">" << Escape(s.name) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

OutputFormat ParseOutputFormat(const std::string& s) {
  if (s == "csv") return OutputFormat::kCsv;
  if (s == "json") return OutputFormat::kJson;
  if (s == "svg") return OutputFormat::kSvg;
  throw std::invalid_argument("format must be csv, json or svg");
}

std::string Render(const CurveTable& t, OutputFormat f, bool log_x) {
  switch (f) {
    case OutputFormat::kCsv: return ToCsv(t);
    case OutputFormat::kJson: return ToJson(t);
    case OutputFormat::kSvg: return ToSvg(t, log_x);
  }
  return {};
}

}  // namespace dpsem
