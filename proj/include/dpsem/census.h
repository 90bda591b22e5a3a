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

#ifndef DPSEM_CENSUS_H_
#define DPSEM_CENSUS_H_

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace dpsem {

enum class GeoLevel { kUs, kState, kCounty, kTract, kCustomBlockGroup, kBlock };
inline constexpr int kNumGeoLevels = 6;
inline constexpr std::array<GeoLevel, kNumGeoLevels> kGeoLevels = {
    GeoLevel::kUs,    GeoLevel::kState,            GeoLevel::kCounty,
    GeoLevel::kTract, GeoLevel::kCustomBlockGroup, GeoLevel::kBlock};

// Eleven person queries followed by the single housing query.
enum class Query {
  kTotal,
  kCenrace,
  kHispanic,
  kVotingAge,
  kHhInstLevels,
  kHhgq,
  kHispanicCenrace,
  kVotingAgeCenrace,
  kVotingAgeHispanic,
  kVotingAgeHispanicCenrace,
  kHhgqVotingAgeHispanicCenrace,
  kOccupancyStatus,
};
inline constexpr int kNumPersonQueries = 11;
inline constexpr int kNumQueries = 12;

// Attribute bit flags.
enum Attribute : unsigned {
  kCenraceAttr = 1u << 0,
  kHispanicAttr = 1u << 1,
  kVotingAgeAttr = 1u << 2,
  kHhgqAttr = 1u << 3,
  kHhInstLevelsAttr = 1u << 4,
};

std::string GeoLevelName(GeoLevel g);       // US, STATE, ..., CBG, BLOCK
std::optional<GeoLevel> ParseGeoLevel(const std::string& s);
std::string QueryName(Query q);             // e.g. VOTINGAGExHISPANIC
std::optional<Query> ParseQuery(const std::string& s);
unsigned QueryAttributes(Query q);
bool IsHousingQuery(Query q);
std::vector<Query> AllQueries();

// Base budgets and per-level / per-query proportions, all exact.
struct AllocationTable {
  mpq_class base_person;
  mpq_class base_housing;
  std::array<mpq_class, kNumGeoLevels> geo_person;
  std::array<mpq_class, kNumGeoLevels> geo_housing;
  // [person query][level]
  std::array<std::array<mpq_class, kNumGeoLevels>, kNumPersonQueries>
      query_person;

  static AllocationTable Production();

  // Geographic proportions and every per-level query column sum to exactly
  // one; throws std::invalid_argument otherwise.
  void Validate() const;

  // Sectioned "key = num/den" text. Parsing is strict: unknown or missing
  // keys and invalid tables are rejected.
  std::string ToText() const;
  static AllocationTable FromText(const std::string& text);

  // Short stable hash of ToText(), for run manifests.
  std::string Digest() const;
};

struct QueryCell {
  Query query;
  GeoLevel level;
  bool operator==(const QueryCell&) const = default;
};

struct Scenario {
  std::string name;
  std::vector<QueryCell> selected;
  std::string narrative;
  std::optional<double> expected_rho;  // value quoted for the builtins
};

mpq_class RhoStar(const AllocationTable& t, Query q, GeoLevel g);
mpq_class TotalRho(const AllocationTable& t);
mpq_class ScenarioRho(const AllocationTable& t, const Scenario& s);

// Every (query, level) cell of the release.
Scenario FullRelease();
std::vector<Scenario> BuiltinScenarios();
std::optional<Scenario> FindBuiltinScenario(const std::string& name);

// Text scenario: optional "name: ..." line, then one "QUERY LEVEL" per line;
// '#' starts a comment.
Scenario ScenarioFromText(const std::string& text);

// Gaussian-mechanism semantics at total rho, via the N(0, 1/(2 rho)) scaling.
double ScenarioPower(double rho, double level);
double ScenarioBayesEpsilon(double rho, double delta);

}  // namespace dpsem

#endif  // DPSEM_CENSUS_H_
