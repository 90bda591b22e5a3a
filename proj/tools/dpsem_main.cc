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

// dpsem: reproduce privacy-semantics tables and curves from the command line.
//
// Exit codes: 0 ok, 2 usage error, 3 I/O error, 4 internal error.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dpsem/accountants.h"
#include "dpsem/bayes.h"
#include "dpsem/census.h"
#include "dpsem/curve_io.h"
#include "dpsem/curves.h"
#include "dpsem/dgauss.h"
#include "dpsem/tradeoff.h"
#include "json.hpp"

namespace {

using namespace dpsem;

constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitInternal = 4;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void WriteFile(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << content) || !out.flush()) {
    throw IoError("cannot write " + path);
  }
}

// Explicit --out wins; otherwise $DPSEM_OUT_DIR/<fallback>; otherwise "".
std::string ResolveOut(const std::string& out, const std::string& fallback) {
  if (!out.empty()) return out;
  if (const char* dir = std::getenv("DPSEM_OUT_DIR"); dir && *dir) {
    return (std::filesystem::path(dir) / fallback).string();
  }
  return "";
}

void Emit(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
  } else {
    WriteFile(path, content);
  }
}

std::string Fixed(double v, int digits) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

const char* FormatExt(OutputFormat f) {
  switch (f) {
    case OutputFormat::kCsv: return "csv";
    case OutputFormat::kJson: return "json";
    case OutputFormat::kSvg: return "svg";
  }
  return "txt";
}

// ---- curve ----------------------------------------------------------------

struct CurveOptions {
  std::string kind;
  std::optional<double> rho, mu, eps;
  std::string grid;
  std::string format = "csv";
  std::string out;
};

void RunCurve(const CurveOptions& o) {
  const OutputFormat fmt = ParseOutputFormat(o.format);
  bool known = false;
  for (const std::string& k : CurveKinds()) known |= k == o.kind;
  if (!known) throw std::invalid_argument("unknown curve kind '" + o.kind + "'");
  const GridSpec grid =
      o.grid.empty() ? DefaultCurveGrid(o.kind) : GridSpec::Parse(o.grid);
  const CurveTable t = SampleCurve(o.kind, {o.rho, o.mu, o.eps}, grid.Values());
  Emit(ResolveOut(o.out, o.kind + "." + FormatExt(fmt)), Render(t, fmt, grid.log));
}

// ---- tables ---------------------------------------------------------------

std::string TablesReport() {
  std::ostringstream r;
  const std::vector<double> eps = {0.1, 0.5, 1, 2, 4};
  const std::vector<double> levels = {0.01, 0.05, 0.10};
  r << "Maximum power under pure eps-DP\n"
    << "level    eps=0.1  eps=0.5  eps=1    eps=2    eps=4\n";
  for (double l : levels) {
    r << Fixed(l, 2) << "   ";
    for (double e : eps) r << "  " << Fixed(PureDpPowerBound(e, l), 3) << "  ";
    r << "\n";
  }
  r << "note: cell (eps=0.5, level=0.05) evaluates to 0.082; the value 0.820\n"
    << "      that circulates for it is a digit transposition.\n\n";

  auto gaussian_table = [&](const std::string& title, double rho) {
    const double mu = std::sqrt(2 * rho);
    r << title << " (rho = " << rho << ", mu = sqrt(2 rho))\n"
      << "level   power(Gaussian)  zCDP upper bound\n";
    for (double l : levels) {
      r << Fixed(l, 2) << "    " << Fixed(GaussianExactPower(mu, l), 4)
        << "           " << Fixed(ZcdpPowerBound(rho, l), 4) << "\n";
    }
    r << "(discrete Gaussian column: run `dpsem mc`)\n\n";
  };
  gaussian_table("Production allocation", 2.63);
  gaussian_table("Block within custom block group", 0.1115);

  const AllocationTable table = AllocationTable::Production();
  r << "Scenarios\nname  rho       power@0.01  power@0.05  power@0.10\n";
  for (const Scenario& s : BuiltinScenarios()) {
    const double rho = ScenarioRho(table, s).get_d();
    r << s.name << "     " << Fixed(rho, 4) << "    ";
    for (double l : levels) r << Fixed(ScenarioPower(rho, l), 3) << "       ";
    r << "\n";
  }
  r << "total rho = " << TotalRho(table).get_str() << "\n";
  return r.str();
}

// ---- scenario -------------------------------------------------------------

Scenario LoadScenario(const std::string& name_or_file) {
  if (auto s = FindBuiltinScenario(name_or_file)) return *s;
  if (name_or_file.rfind("file:", 0) == 0) {
    return ScenarioFromText(ReadFile(name_or_file.substr(5)));
  }
  if (std::filesystem::exists(name_or_file)) {
    return ScenarioFromText(ReadFile(name_or_file));
  }
  throw std::invalid_argument("unknown scenario '" + name_or_file +
                              "' (use A-H or a scenario file)");
}

AllocationTable LoadTable(const std::string& path) {
  if (path.empty()) return AllocationTable::Production();
  return AllocationTable::FromText(ReadFile(path));
}

struct ScenarioOptions {
  std::string name;
  std::string table;
  std::string grid;
  std::string format = "csv";
  std::string out;
};

void RunScenario(const ScenarioOptions& o) {
  const OutputFormat fmt = ParseOutputFormat(o.format);
  const Scenario s = LoadScenario(o.name);
  const AllocationTable table = LoadTable(o.table);
  const mpq_class rho_exact = ScenarioRho(table, s);
  const double rho = rho_exact.get_d();
  std::cout << "scenario " << s.name << ": " << s.narrative << "\n"
            << "rho = " << FormatDouble(rho) << " (" << rho_exact.get_str()
            << ")\n";
  for (double l : {0.01, 0.05, 0.10}) {
    std::cout << "power@" << Fixed(l, 2) << " = " << Fixed(ScenarioPower(rho, l), 4)
              << "\n";
  }
  const GridSpec grid = o.grid.empty() ? GridSpec{1e-6, 0.5, 200, true}
                                       : GridSpec::Parse(o.grid);
  CurveTable t{"scenario " + s.name + ": Bayesian eps(delta)", "delta", grid.Values(),
               {{"eps", {}}}};
  for (double d : t.x) t.series[0].y.push_back(ScenarioBayesEpsilon(rho, d));
  const std::string path =
      ResolveOut(o.out, "scenario_" + s.name + "." + FormatExt(fmt));
  if (!path.empty()) {
    WriteFile(path, Render(t, fmt, grid.log));
    std::cout << "curve written to " << path << "\n";
  }
}

// ---- mc -------------------------------------------------------------------

ShiftPattern ParsePattern(const std::string& s) {
  if (s == "sensitivity") return ShiftPattern::kSensitivityMatched;
  if (s == "canonical") return ShiftPattern::kCanonical;
  if (s == "single") return ShiftPattern::kSingleCell;
  throw std::invalid_argument("pattern must be sensitivity, canonical or single");
}

struct McOptions {
  std::string allocation;
  std::string table;
  int64_t n = 1000000;
  uint64_t seed = 7;
  int threads = 0;
  std::string pattern = "sensitivity";
  std::string out;
};

void RunMc(const McOptions& o) {
  Scenario s;
  if (o.allocation == "production") {
    s = FullRelease();
  } else if (o.allocation.rfind("scenario:", 0) == 0) {
    const auto b = FindBuiltinScenario(o.allocation.substr(9));
    if (!b) throw std::invalid_argument("unknown scenario in " + o.allocation);
    s = *b;
  } else if (o.allocation.rfind("file:", 0) == 0) {
    s = ScenarioFromText(ReadFile(o.allocation.substr(5)));
  } else {
    throw std::invalid_argument(
        "allocation must be production, scenario:A..H or file:PATH");
  }
  const AllocationTable table = LoadTable(o.table);
  const ShiftPattern pattern = ParsePattern(o.pattern);
  const AffectedQuerySet queries = AffectedQueries(table, s, pattern);
  const double rho = ScenarioRho(table, s).get_d();
  const McRoc roc = MonteCarloRoc(queries, o.n, o.seed, o.threads);

  std::string csv = "level,power,se\n";
  for (int i = 0; i <= 1000; ++i) {
    const double l = i / 1000.0;
    csv += FormatDouble(l) + "," + FormatDouble(roc.Power(l)) + "," +
           FormatDouble(roc.StandardError(l)) + "\n";
  }
  nlohmann::json manifest = {
      {"allocation", o.allocation},
      {"table_digest", table.Digest()},
      {"seed", o.seed},
      {"n_samples", o.n},
      {"shift_pattern", o.pattern},
      {"affected_queries", queries.size()},
      {"affected_cells", CellCount(queries)},
      {"rho", rho},
  };
  std::cout << "allocation " << o.allocation << ": rho = " << Fixed(rho, 4) << ", "
            << CellCount(queries) << " shifted cells\n";
  for (double l : {0.01, 0.05, 0.10}) {
    const double p = roc.Power(l);
    manifest["power"][Fixed(l, 2)] = p;
    std::cout << "power@" << Fixed(l, 2) << " = " << Fixed(p, 4) << " (se "
              << Fixed(roc.StandardError(l), 4) << ", Gaussian "
              << Fixed(GaussianExactPower(std::sqrt(2 * rho), l), 4) << ")\n";
  }
  std::string name = o.allocation;
  for (char& c : name) {
    if (c == ':' || c == '/') c = '_';
  }
  const std::string path = ResolveOut(o.out, "mc_" + name + ".csv");
  if (!path.empty()) {
    WriteFile(path, csv);
    WriteFile(path + ".manifest.json", manifest.dump(2) + "\n");
    std::cout << "ROC written to " << path << "\n";
  }
}

// ---- odometer -------------------------------------------------------------

struct OdometerOptions {
  std::string ledger;
  std::optional<double> cap;
  std::string label;
  std::optional<double> rho;
};

void RunOdometer(const OdometerOptions& o) {
  Odometer odo(0);
  if (o.cap) {
    if (std::filesystem::exists(o.ledger)) {
      throw std::invalid_argument("ledger already exists: " + o.ledger);
    }
    odo = Odometer(*o.cap);
  } else {
    std::istringstream in(ReadFile(o.ledger));
    odo = Odometer::ReadLedger(in);
  }
  int status = 0;
  if (o.rho) {
    if (!odo.Register(o.label, *o.rho)) {
      std::cout << "refused: " << o.label << " needs " << *o.rho
                << ", remaining " << FormatDouble(odo.remaining()) << "\n";
      status = 1;
    }
  }
  std::ostringstream out;
  odo.WriteLedger(out);
  if (o.cap || status == 0) WriteFile(o.ledger, out.str());
  std::cout << "spent " << FormatDouble(odo.spent()) << " of "
            << FormatDouble(odo.cap()) << ", remaining "
            << FormatDouble(odo.remaining()) << "\n";
  if (status != 0) throw std::invalid_argument("over budget");
}

// ---- convert --------------------------------------------------------------

std::vector<RdpPoint> ParsePoints(const std::string& s) {
  std::vector<RdpPoint> pts;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, ',');) {
    const size_t colon = item.find(':');
    if (colon == std::string::npos) {
      throw std::invalid_argument("RDP points look like 2:1,3:2");
    }
    pts.push_back({std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1))});
  }
  return PrivacyProfile::Rdp(pts).points();
}

struct ConvertOptions {
  std::string what;
  std::optional<double> rho, mu, eps, delta;
  std::string points;
};

void RunConvert(const ConvertOptions& o) {
  auto need = [](const std::optional<double>& v, const char* name) {
    if (!v) throw std::invalid_argument(std::string("missing --") + name);
    return *v;
  };
  auto mu = [&] { return o.mu ? *o.mu : std::sqrt(2 * need(o.rho, "rho")); };
  double v;
  if (o.what == "zcdp-to-delta") {
    v = ZcdpToDelta(need(o.rho, "rho"), need(o.eps, "eps"));
  } else if (o.what == "rdp-to-delta") {
    v = RdpToDelta(ParsePoints(o.points), need(o.eps, "eps"));
  } else if (o.what == "gaussian-pbdp") {
    v = GaussianPbdpEpsilon(mu(), need(o.delta, "delta"));
  } else if (o.what == "gaussian-adp-delta") {
    v = GaussianApproxDpDelta(mu(), need(o.eps, "eps"));
  } else if (o.what == "gaussian-adp-eps") {
    v = GaussianApproxDpEpsilon(mu(), need(o.delta, "delta"));
  } else if (o.what == "bayes-known-rest") {
    const PrivacyProfile p = o.points.empty()
                                 ? PrivacyProfile::Zcdp(need(o.rho, "rho"))
                                 : PrivacyProfile::Rdp(ParsePoints(o.points));
    v = BayesKnownRestDelta(p, need(o.eps, "eps"));
  } else if (o.what == "bayes-arbitrary") {
    const PrivacyProfile p = o.points.empty()
                                 ? PrivacyProfile::Zcdp(need(o.rho, "rho"))
                                 : PrivacyProfile::Rdp(ParsePoints(o.points));
    v = BayesArbitraryPriorDelta(p, need(o.eps, "eps"));
  } else if (o.what == "zcdp-power") {
    v = ZcdpPowerBound(need(o.rho, "rho"), need(o.delta, "level"));
  } else {
    throw std::invalid_argument("unknown conversion '" + o.what + "'");
  }
  std::cout << FormatDouble(v) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differential-privacy semantics toolkit"};
  app.require_subcommand(1);

  CurveOptions curve;
  auto* c = app.add_subcommand("curve", "Sample a named curve");
  c->add_option("kind", curve.kind, "Curve kind")->required();
  c->add_option("--rho", curve.rho, "zCDP rho");
  c->add_option("--mu", curve.mu, "Gaussian mu (default sqrt(2 rho))");
  c->add_option("--eps", curve.eps, "Pure DP epsilon");
  c->add_option("--grid", curve.grid, "start:stop:points[:log]");
  c->add_option("--format", curve.format, "csv, json or svg");
  c->add_option("--out", curve.out, "Output file");

  std::string tables_out;
  auto* t = app.add_subcommand("tables", "Print the power tables and scenarios");
  t->add_option("--out", tables_out, "Output file");

  ScenarioOptions scen;
  auto* s = app.add_subcommand("scenario", "Report a budget scenario");
  s->add_option("name", scen.name, "A-H or a scenario file")->required();
  s->add_option("--table", scen.table, "Allocation table file");
  s->add_option("--grid", scen.grid, "delta grid for the Bayesian curve");
  s->add_option("--format", scen.format, "csv, json or svg");
  s->add_option("--out", scen.out, "Curve output file");

  McOptions mc;
  auto* m = app.add_subcommand("mc", "Monte Carlo discrete Gaussian ROC");
  m->add_option("allocation", mc.allocation, "production, scenario:X or file:PATH")
      ->required();
  m->add_option("--table", mc.table, "Allocation table file");
  m->add_option("--n", mc.n, "Samples per hypothesis");
  m->add_option("--seed", mc.seed, "Master seed");
  m->add_option("--threads", mc.threads, "Worker threads (0 = all cores)");
  m->add_option("--pattern", mc.pattern, "sensitivity, canonical or single");
  m->add_option("--out", mc.out, "ROC CSV path (manifest written alongside)");

  std::string alloc_out;
  auto* a = app.add_subcommand("allocation", "Emit the production allocation table");
  a->add_option("--out", alloc_out, "Output file");

  OdometerOptions odo;
  auto* o = app.add_subcommand("odometer", "Append to a zCDP budget ledger");
  o->add_option("--ledger", odo.ledger, "Ledger file")->required();
  o->add_option("--cap", odo.cap, "Create a new ledger with this cap");
  o->add_option("--label", odo.label, "Label of the charge");
  o->add_option("--rho", odo.rho, "rho to register");

  ConvertOptions conv;
  auto* v = app.add_subcommand("convert", "One-off conversions");
  v->add_option("what", conv.what,
                "zcdp-to-delta, rdp-to-delta, gaussian-pbdp, gaussian-adp-delta, "
                "gaussian-adp-eps, bayes-known-rest, bayes-arbitrary, zcdp-power")
      ->required();
  v->add_option("--rho", conv.rho);
  v->add_option("--mu", conv.mu);
  v->add_option("--eps", conv.eps);
  v->add_option("--delta,--level", conv.delta);
  v->add_option("--points", conv.points, "RDP points, e.g. 2:1,3:2");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*c) RunCurve(curve);
    if (*t) Emit(ResolveOut(tables_out, "tables.txt"), TablesReport());
    if (*s) RunScenario(scen);
    if (*m) RunMc(mc);
    if (*a) {
      Emit(ResolveOut(alloc_out, "allocation.txt"),
           AllocationTable::Production().ToText());
    }
    if (*o) RunOdometer(odo);
    if (*v) RunConvert(conv);
  } catch (const IoError& e) {
    std::cerr << "dpsem: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "dpsem: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "dpsem: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return 0;
}
