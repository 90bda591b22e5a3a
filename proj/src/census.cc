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

#include "dpsem/census.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "dpsem/normal.h"

namespace dpsem {
namespace {

constexpr const char* kGeoNames[kNumGeoLevels] = {"US",    "STATE", "COUNTY",
                                                  "TRACT", "CBG",   "BLOCK"};

struct QueryInfo {
  const char* name;
  unsigned attrs;
};

constexpr QueryInfo kQueryInfo[kNumQueries] = {
    {"TOTAL", 0},
    {"CENRACE", kCenraceAttr},
    {"HISPANIC", kHispanicAttr},
    {"VOTINGAGE", kVotingAgeAttr},
    {"HHINSTLEVELS", kHhInstLevelsAttr},
    {"HHGQ", kHhgqAttr},
    {"HISPANICxCENRACE", kHispanicAttr | kCenraceAttr},
    {"VOTINGAGExCENRACE", kVotingAgeAttr | kCenraceAttr},
    {"VOTINGAGExHISPANIC", kVotingAgeAttr | kHispanicAttr},
    {"VOTINGAGExHISPANICxCENRACE",
     kVotingAgeAttr | kHispanicAttr | kCenraceAttr},
    {"HHGQxVOTINGAGExHISPANICxCENRACE",
     kHhgqAttr | kVotingAgeAttr | kHispanicAttr | kCenraceAttr},
    {"OCCUPANCY_STATUS", 0},
};

mpq_class Q(long num, long den) {
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}

mpq_class ParseFraction(const std::string& s) {
  const size_t slash = s.find('/');
  auto digits = [](const std::string& x) {
    return !x.empty() &&
           std::all_of(x.begin(), x.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  const std::string num = s.substr(0, slash);
  const std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!digits(num) || !digits(den) || mpz_class(den) == 0) {
    throw std::invalid_argument("bad fraction: '" + s + "'");
  }
  mpq_class q{mpz_class(num), mpz_class(den)};
  q.canonicalize();
  return q;
}

std::string Trim(const std::string& s) {
  const size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

mpq_class SumOf(const std::array<mpq_class, kNumGeoLevels>& a) {
  mpq_class s = 0;
  for (const mpq_class& x : a) s += x;
  return s;
}

// Cells whose queries involve `attrs` at the given levels. The national cells
// of the two largest race crosses are excluded; only that selection
// reproduces the published per-scenario rho totals.
std::vector<QueryCell> Involving(unsigned attrs,
                                 std::vector<GeoLevel> levels = {
                                     kGeoLevels.begin(), kGeoLevels.end()}) {
  std::vector<QueryCell> out;
  for (Query q : AllQueries()) {
    if ((QueryAttributes(q) & attrs) == 0) continue;
    for (GeoLevel g : levels) {
      if (g == GeoLevel::kUs && (q == Query::kVotingAgeHispanicCenrace ||
                                 q == Query::kHhgqVotingAgeHispanicCenrace)) {
        continue;
      }
      out.push_back({q, g});
    }
  }
  return out;
}

std::vector<QueryCell> AtLevels(std::vector<GeoLevel> levels) {
  std::vector<QueryCell> out;
  for (Query q : AllQueries()) {
    for (GeoLevel g : levels) out.push_back({q, g});
  }
  return out;
}

std::vector<QueryCell> Union(std::vector<std::vector<QueryCell>> parts) {
  std::vector<QueryCell> out;
  for (const auto& part : parts) {
    for (const QueryCell& c : part) {
      if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::string GeoLevelName(GeoLevel g) { return kGeoNames[static_cast<int>(g)]; }

std::optional<GeoLevel> ParseGeoLevel(const std::string& s) {
  for (int i = 0; i < kNumGeoLevels; ++i) {
    if (s == kGeoNames[i]) return kGeoLevels[i];
  }
  return std::nullopt;
}

std::string QueryName(Query q) { return kQueryInfo[static_cast<int>(q)].name; }

std::optional<Query> ParseQuery(const std::string& s) {
  for (int i = 0; i < kNumQueries; ++i) {
    if (s == kQueryInfo[i].name) return static_cast<Query>(i);
  }
  return std::nullopt;
}

unsigned QueryAttributes(Query q) { return kQueryInfo[static_cast<int>(q)].attrs; }

bool IsHousingQuery(Query q) { return q == Query::kOccupancyStatus; }

std::vector<Query> AllQueries() {
  std::vector<Query> out;
  for (int i = 0; i < kNumQueries; ++i) out.push_back(static_cast<Query>(i));
  return out;
}

AllocationTable AllocationTable::Production() {
  AllocationTable t;
  t.base_person = Q(64, 25);
  t.base_housing = Q(7, 100);
  t.geo_person = {Q(104, 4099), Q(1440, 4099), Q(447, 4099),
                  Q(687, 4099), Q(1256, 4099), Q(165, 4099)};
  t.geo_housing = {Q(1, 205),     Q(1, 205),      Q(7, 82),
                   Q(364, 1025),  Q(1759, 4100),  Q(99, 820)};
  using Row = std::array<mpq_class, kNumGeoLevels>;
  const Row small = {Q(26, 4097), Q(6, 4097), Q(10, 4097),
                     Q(5, 4102),  Q(3, 4099), Q(5, 4097)};
  t.query_person = {
      Row{Q(0, 4097), Q(3773, 4097), Q(3126, 4097), Q(1567, 4102),
          Q(1705, 4099), Q(5, 4097)},
      Row{Q(52, 4097), Q(6, 4097), Q(10, 4097), Q(4, 2051), Q(3, 4099),
          Q(9, 4097)},
      small,
      small,
      small,
      small,
      Row{Q(130, 4097), Q(12, 4097), Q(28, 4097), Q(1933, 4102),
          Q(1055, 4099), Q(21, 4097)},
      Row{Q(130, 4097), Q(12, 4097), Q(28, 4097), Q(10, 2051), Q(9, 4099),
          Q(21, 4097)},
      small,
      Row{Q(26, 241), Q(2, 241), Q(101, 4097), Q(67, 4102), Q(24, 4099),
          Q(71, 4097)},
      Row{Q(189, 241), Q(230, 4097), Q(754, 4097), Q(241, 2051),
          Q(1288, 4099), Q(3945, 4097)},
  };
  return t;
}

void AllocationTable::Validate() const {
  if (base_person < 0 || base_housing < 0) {
    throw std::invalid_argument("allocation: negative base rho");
  }
  if (SumOf(geo_person) != 1 || SumOf(geo_housing) != 1) {
    throw std::invalid_argument("allocation: geographic proportions must sum to 1");
  }
  for (int g = 0; g < kNumGeoLevels; ++g) {
    mpq_class col = 0;
    for (int q = 0; q < kNumPersonQueries; ++q) {
      if (query_person[q][g] < 0) {
        throw std::invalid_argument("allocation: negative proportion");
      }
      col += query_person[q][g];
    }
    if (col != 1) {
      throw std::invalid_argument("allocation: query proportions at " +
                                  std::string(kGeoNames[g]) + " sum to " +
                                  col.get_str());
    }
  }
}

std::string AllocationTable::ToText() const {
  std::ostringstream out;
  out << "# dpsem allocation table v1\n[base]\n"
      << "person = " << base_person.get_str() << "\n"
      << "housing = " << base_housing.get_str() << "\n";
  auto section = [&](const std::string& name,
                     const std::array<mpq_class, kNumGeoLevels>& row) {
    out << "\n[" << name << "]\n";
    for (int g = 0; g < kNumGeoLevels; ++g) {
      out << kGeoNames[g] << " = " << row[g].get_str() << "\n";
    }
  };
  section("geo.person", geo_person);
  section("geo.housing", geo_housing);
  for (int q = 0; q < kNumPersonQueries; ++q) {
    section(std::string("query.") + kQueryInfo[q].name, query_person[q]);
  }
  return out.str();
}

AllocationTable AllocationTable::FromText(const std::string& text) {
  AllocationTable t;
  std::map<std::string, mpq_class*> slots;
  slots["base.person"] = &t.base_person;
  slots["base.housing"] = &t.base_housing;
  for (int g = 0; g < kNumGeoLevels; ++g) {
    slots[std::string("geo.person.") + kGeoNames[g]] = &t.geo_person[g];
    slots[std::string("geo.housing.") + kGeoNames[g]] = &t.geo_housing[g];
    for (int q = 0; q < kNumPersonQueries; ++q) {
      slots[std::string("query.") + kQueryInfo[q].name + "." + kGeoNames[g]] =
          &t.query_person[q][g];
    }
  }
  std::set<std::string> seen;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = Trim(raw.substr(0, raw.find('#')));
    const std::string where = "allocation line " + std::to_string(lineno) + ": ";
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw std::invalid_argument(where + "bad section");
      section = Trim(line.substr(1, line.size() - 2));
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos || section.empty()) {
      throw std::invalid_argument(where + "expected 'key = value' in a section");
    }
    const std::string key = section + "." + Trim(line.substr(0, eq));
    const auto it = slots.find(key);
    if (it == slots.end()) throw std::invalid_argument(where + "unknown key " + key);
    if (!seen.insert(key).second) {
      throw std::invalid_argument(where + "duplicate key " + key);
    }
    *it->second = ParseFraction(Trim(line.substr(eq + 1)));
  }
  for (const auto& [key, slot] : slots) {
    if (!seen.count(key)) throw std::invalid_argument("allocation: missing " + key);
  }
  t.Validate();
  return t;
}

std::string AllocationTable::Digest() const {
  uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (unsigned char c : ToText()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

mpq_class RhoStar(const AllocationTable& t, Query q, GeoLevel g) {
  const int gi = static_cast<int>(g);
  if (IsHousingQuery(q)) return t.base_housing * t.geo_housing[gi];
  const int qi = static_cast<int>(q);
  if (qi < 0 || qi >= kNumPersonQueries) {
    throw std::invalid_argument("unknown query");
  }
  return t.base_person * t.geo_person[gi] * t.query_person[qi][gi];
}

mpq_class TotalRho(const AllocationTable& t) {
  mpq_class total = 0;
  for (Query q : AllQueries()) {
    for (GeoLevel g : kGeoLevels) total += RhoStar(t, q, g);
  }
  return total;
}

mpq_class ScenarioRho(const AllocationTable& t, const Scenario& s) {
  mpq_class total = 0;
  std::vector<QueryCell> seen;
  for (const QueryCell& c : s.selected) {
    if (std::find(seen.begin(), seen.end(), c) != seen.end()) continue;
    seen.push_back(c);
    total += RhoStar(t, c.query, c.level);
  }
  return total;
}

Scenario FullRelease() {
  return {"production", AtLevels({kGeoLevels.begin(), kGeoLevels.end()}),
          "every query at every geographic level", 2.63};
}

std::vector<Scenario> BuiltinScenarios() {
  using G = GeoLevel;
  const auto block = AtLevels({G::kBlock});
  const auto block_cbg = AtLevels({G::kBlock, G::kCustomBlockGroup});
  return {
      {"A", block, "block within custom block group", 0.1115},
      {"B", block_cbg, "block within tract", 0.926},
      {"C", Involving(kCenraceAttr), "race", 0.952},
      {"D", Involving(kHispanicAttr), "ethnicity", 0.945},
      {"E",
       Union({block_cbg, Involving(kCenraceAttr, {G::kTract, G::kCounty,
                                                  G::kState, G::kUs})}),
       "block within tract, and race", 1.32},
      {"F", Union({Involving(kVotingAgeAttr), block}),
       "voting age, and block within block group", 0.555},
      {"G", Union({Involving(kVotingAgeAttr | kCenraceAttr), block}),
       "voting age and race, and block within block group", 0.969},
      {"H", Union({Involving(kVotingAgeAttr | kHispanicAttr), block}),
       "voting age and ethnicity, and block within block group", 0.968},
  };
}

std::optional<Scenario> FindBuiltinScenario(const std::string& name) {
  for (Scenario& s : BuiltinScenarios()) {
    if (s.name == name) return s;
  }
  return std::nullopt;
}

Scenario ScenarioFromText(const std::string& text) {
  Scenario s{"custom", {}, "user-defined selection", std::nullopt};
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = Trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    if (line.rfind("name:", 0) == 0) {
      s.name = Trim(line.substr(5));
      continue;
    }
    std::istringstream fields(line);
    std::string qs, gs, extra;
    fields >> qs >> gs;
    const auto q = ParseQuery(qs);
    const auto g = ParseGeoLevel(gs);
    if (!q || !g || (fields >> extra)) {
      throw std::invalid_argument("scenario line " + std::to_string(lineno) +
                                  ": expected 'QUERY LEVEL'");
    }
    s.selected.push_back({*q, *g});
  }
  return s;
}

double ScenarioPower(double rho, double level) {
  if (!(rho >= 0)) throw std::invalid_argument("rho must be non-negative");
  if (!(level >= 0 && level <= 1)) {
    throw std::invalid_argument("level must lie in [0, 1]");
  }
  if (rho == 0) return level;
  // Noise N(0, 1/(2 rho)) on a unit count change.
  const double sd = std::sqrt(1 / (2 * rho));
  return NormalSf((sd * NormalQuantile(1 - level) - 1) / sd);
}

double ScenarioBayesEpsilon(double rho, double delta) {
  if (!(delta > 0 && delta <= 1)) {
    throw std::invalid_argument("delta must lie in (0, 1]");
  }
  const double denom =
      NormalCdf(-NormalQuantile(1 - delta) - std::sqrt(2 * rho));
  return std::log(delta / denom);
}

}  // namespace dpsem
