// Acceptance harness: prints one [PASS]/[FAIL] line per criterion and exits
// nonzero if any criterion fails. Numeric criteria use independent oracles
// (truncated Neumann series, raw normal equations); end-to-end criteria drive
// the installed CLI binary on the bundled fixtures.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "eeio/analyze.hpp"
#include "eeio/assemble.hpp"
#include "eeio/csv.hpp"
#include "eeio/ingest.hpp"
#include "eeio/solve.hpp"
#include "helpers.hpp"

namespace fs = std::filesystem;
using namespace eeio;

namespace {

const std::string kCli = EEIO_CLI_PATH;
const std::string kFixtures = EEIO_FIXTURES_DIR;

int g_failures = 0;

void report(const std::string& name, bool ok, const std::string& detail = "") {
  std::cout << (ok ? "[PASS] " : "[FAIL] ") << name;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << "\n";
  if (!ok) ++g_failures;
}

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  fs::path dir = fs::temp_directory_path() / "eeio_acceptance";
  fs::create_directories(dir);
  fs::path out = dir / ("out" + std::to_string(counter) + ".txt");
  fs::path err = dir / ("err" + std::to_string(counter) + ".txt");
  ++counter;
  int status =
      std::system((kCli + " " + args + " > " + out.string() + " 2> " + err.string()).c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

void solver_oracle_equivalence() {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> size(1, 20);
  std::uniform_real_distribution<double> colsum(0.05, 0.6);
  std::uniform_real_distribution<double> demand(0.0, 10.0);

  auto start = std::chrono::steady_clock::now();
  bool ok = true;
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    int n = size(rng);
    Eigen::MatrixXd A = eeio::test::random_productive_matrix(n, colsum(rng), rng);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) y(i) = demand(rng);
    if (y.norm() == 0) y(0) = 1.0;

    TechnologyMatrix tech;
    tech.coefficients = A;
    tech.commodities = eeio::test::make_classification(n);
    Eigen::VectorXd x = total_requirements(tech, y).x;
    Eigen::VectorXd oracle = eeio::test::neumann_requirements(A, y, 1e-14);
    double rel = (x - oracle).norm() / oracle.norm();
    worst = std::max(worst, rel);
    if (rel > 1e-8) ok = false;
  }
  double seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start).count();
  char detail[128];
  std::snprintf(detail, sizeof(detail), "worst rel err %.2e, %.2f s", worst, seconds);
  report("solver matches Neumann-series oracle on 200 random economies",
         ok && seconds < 5.0, detail);
}

void scalar_closed_form() {
  Eigen::MatrixXd A(1, 1), B(1, 1);
  A << 0.5;
  B << 1.0;
  Eigen::VectorXd y(1);
  y << 1.0;
  auto model = eeio::test::make_model(A, B, y);
  double q = footprint(model, {"households"}).totals(0);
  report("one-sector geometric-series footprint equals 2 kg",
         std::abs(q - 2.0) <= 1e-12, "q = " + std::to_string(q));
}

void decomposition_additivity() {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> size(2, 12);
  std::uniform_real_distribution<double> colsum(0.1, 0.65);
  std::uniform_real_distribution<double> intensity(0.0, 3.0);
  bool ok = true;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    int n = size(rng);
    Eigen::MatrixXd A = eeio::test::random_productive_matrix(n, colsum(rng), rng);
    Eigen::MatrixXd B(2, n);
    for (int s = 0; s < 2; ++s) {
      for (int j = 0; j < n; ++j) B(s, j) = intensity(rng);
    }
    auto model = eeio::test::make_model(A, B, Eigen::VectorXd::Ones(n));
    auto d = first_tier_decomposition(model, "s0");
    Eigen::VectorXd reconstructed = d.direct + d.per_input.rowwise().sum();
    for (int i = 0; i < 2; ++i) {
      double denom = std::max(std::abs(d.total(i)), 1e-30);
      double rel = std::abs(reconstructed(i) - d.total(i)) / denom;
      worst = std::max(worst, rel);
      if (rel > 1e-9) ok = false;
    }
  }
  char detail[64];
  std::snprintf(detail, sizeof(detail), "worst rel err %.2e", worst);
  report("first-tier decomposition is additive on 100 random fixtures", ok, detail);
}

void conservation_suite() {
  bool ok = true;
  std::string detail;

  // allocation preserves coarse totals
  {
    std::mt19937 rng(19);
    std::uniform_real_distribution<double> dist(0.01, 1.0);
    Classification fine = eeio::test::make_classification(24, "f");
    Concordance conc;
    RawFlowAccount flows;
    std::map<std::string, double> totals;
    for (int c = 0; c < 6; ++c) {
      std::vector<Concordance::Share> shares;
      double sum = 0;
      for (int k = 0; k < 4; ++k) {
        shares.push_back({"f" + std::to_string(c * 4 + k), dist(rng)});
        sum += shares.back().weight;
      }
      for (auto& s : shares) s.weight /= sum;
      std::string coarse = "coarse" + std::to_string(c);
      conc.map[coarse] = shares;
      double amount = dist(rng) * 1e7;
      flows.records.push_back({coarse, "CA", "CO2", "air", amount, "kg", "2017"});
      totals[coarse] = amount;
    }
    auto [fine_flows, subs] = allocate_flows(flows, conc, fine);
    for (int c = 0; c < 6; ++c) {
      double got = fine_flows.block(0, c * 4, 1, 4).sum();
      double want = totals["coarse" + std::to_string(c)];
      if (std::abs(got - want) > 1e-12 * want) {
        ok = false;
        detail = "allocation lost mass";
      }
    }

    // B * x_out reconstructs the allocated flows
    Eigen::VectorXd x_out(24);
    for (int j = 0; j < 24; ++j) x_out(j) = dist(rng) * 1e6;
    ExtensionMatrix B = normalize_extensions(fine_flows, subs, x_out, fine);
    Eigen::MatrixXd reconstructed = B.intensities * x_out.asDiagonal();
    for (int j = 0; j < 24; ++j) {
      double want = fine_flows(0, j);
      if (std::abs(reconstructed(0, j) - want) > 1e-12 * std::max(want, 1.0)) {
        ok = false;
        detail = "extension normalization not invertible";
      }
    }
  }

  // aggregation preserves sums at both levels of the 24-input catalog
  {
    std::vector<std::string> codes = {
        "concrete", "cement", "steel", "aluminum", "other_metals",
        "asphalt_products", "crude_oil", "asphalt_binders", "aggregates",
        "other_minerals", "chemicals", "electricity", "natural_gas",
        "other_fuels", "road_freight", "rail_freight", "machinery",
        "plastic_rubber", "buildings_infrastructure", "administrative_services",
        "other_services", "upstream_sales", "other_goods", "paper_paperboard"};
    std::vector<SectorEntry> entries;
    for (const auto& code : codes) entries.push_back({code, code, ""});
    Classification fine(entries, Granularity::fine);
    AggregationHierarchy hierarchy =
        parse_aggregation(kFixtures + "/road_catalog_levels.csv", fine);

    std::mt19937 rng(29);
    std::uniform_real_distribution<double> dist(0.0, 5.0);
    FootprintResult result;
    result.indicators = {Indicator{"gwp", IndicatorLevel::midpoint, "kg CO2eq"}};
    result.commodities = fine;
    result.by_sector = Eigen::MatrixXd(1, 24);
    for (int j = 0; j < 24; ++j) result.by_sector(0, j) = dist(rng);
    double fine_sum = result.by_sector.row(0).sum();

    for (const auto& level : hierarchy.levels) {
      auto grouped = aggregate(result, hierarchy, level.id);
      if (std::abs(grouped.values.row(0).sum() - fine_sum) > 1e-12 * fine_sum) {
        ok = false;
        detail = "aggregation at level '" + level.id + "' lost mass";
      }
    }
  }

  report("conservation: allocation, aggregation at every catalog level, B*x_out",
         ok, detail);
}

void per_capita_arithmetic() {
  double kg = per_capita(6.92e11, 3.84e7);
  double tonnes = kg / 1000.0;
  char detail[64];
  std::snprintf(detail, sizeof(detail), "%.3f t/capita", tonnes);
  report("national footprint per capita lands on 18.02 t within 0.1 t",
         std::abs(tonnes - 18.02) <= 0.1, detail);
}

void transport_component_table() {
  csv::File file = csv::read_file(kFixtures + "/transport_components.csv");
  std::vector<LifecycleComponent> components;
  for (std::size_t r = 1; r < file.rows.size(); ++r) {
    const auto& row = file.rows[r];
    components.push_back(LifecycleComponent{
        row.fields[1], row.fields[0], csv::parse_number(row.fields[2], file.path, row.line)});
  }
  bool ok = components.size() == 17;

  LifecycleReport rep = lifecycle_report(components);
  ok = ok && std::abs(rep.total - 1.79e11) <= 0.01 * 1.79e11;

  std::map<std::string, double> share;
  for (const auto& g : rep.groups) share[g.group] = g.share;
  double infra_pct = share.at("Infrastructure") * 100.0;
  ok = ok && std::lround(infra_pct) == 5;
  double use_stage = (share.at("Tailpipe emissions") + share.at("Fuel supply chain")) * 100.0;
  ok = ok && std::abs(use_stage - 72.0) <= 1.0;

  char detail[128];
  std::snprintf(detail, sizeof(detail),
                "total %.4e, infrastructure %.2f%%, tailpipe+fuel %.2f%%",
                rep.total, infra_pct, use_stage);
  report("17-row component table reproduces the published shares", ok, detail);
}

void regression_criteria() {
  bool ok = true;
  std::string detail;

  std::mt19937 rng(37);
  std::uniform_int_distribution<int> count(5, 50);
  std::uniform_real_distribution<double> dx(-10.0, 10.0);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    int n = count(rng);
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < n; ++i) {
      double x = dx(rng);
      pts.push_back({x, 1.3 * x + 0.4 + noise(rng)});
    }
    auto fit = midpoint_endpoint_regression(pts);
    auto oracle = eeio::test::ols_normal_equations(pts);
    if (std::abs(fit.slope - oracle.slope) > 1e-12 ||
        std::abs(fit.intercept - oracle.intercept) > 1e-12 ||
        std::abs(fit.r_squared - oracle.r_squared) > 1e-12) {
      ok = false;
      detail = "normal-equations mismatch";
    }
  }

  auto collinear = midpoint_endpoint_regression(
      {{0.0, 1.0}, {1.0, 3.0}, {2.0, 5.0}, {3.0, 7.0}});
  if (std::abs(collinear.r_squared - 1.0) > 1e-12) {
    ok = false;
    detail = "collinear data not a perfect fit";
  }

  // calibrated road-industry fixture, percentage shares per report group
  auto [model, rep] = assemble_model(kFixtures + "/road");
  auto decomposition = first_tier_decomposition(model, "road");
  auto grouped = aggregate(decomposition, model.hierarchy, "cat");
  auto mid = model.C.indicator_index("gwp");
  double r2_min = 1.0;
  for (std::size_t i = 0; i < model.C.indicators.size(); ++i) {
    if (model.C.indicators[i].level != IndicatorLevel::endpoint) continue;
    std::vector<std::pair<double, double>> pts;
    for (std::size_t g = 0; g < grouped.groups.size(); ++g) {
      double x = grouped.values(static_cast<Eigen::Index>(*mid),
                                static_cast<Eigen::Index>(g)) /
                 decomposition.total(static_cast<Eigen::Index>(*mid));
      double y = grouped.values(static_cast<Eigen::Index>(i),
                                static_cast<Eigen::Index>(g)) /
                 decomposition.total(static_cast<Eigen::Index>(i));
      if (x == 0.0 && y == 0.0) continue;
      pts.push_back({x, y});
    }
    auto fit = midpoint_endpoint_regression(pts);
    r2_min = std::min(r2_min, fit.r_squared);
  }
  if (r2_min < 0.98) {
    ok = false;
    detail = "road fixture R2 below 0.98";
  }

  char buf[64];
  std::snprintf(buf, sizeof(buf), "road fixture min R2 %.4f", r2_min);
  report("regression matches the oracle and the road-industry calibration", ok,
         detail.empty() ? buf : detail);
}

void determinism() {
  fs::path dir = fs::temp_directory_path() / "eeio_acceptance";
  fs::create_directories(dir);
  fs::path m1 = dir / "det1.json";
  fs::path m2 = dir / "det2.json";
  auto b1 = run_cli("build " + kFixtures + "/3sector --out " + m1.string());
  auto b2 = run_cli("build " + kFixtures + "/3sector --out " + m2.string());
  bool ok = b1.exit_code == 0 && b2.exit_code == 0 && b1.out == b2.out &&
            slurp(m1) == slurp(m2);

  std::vector<std::string> commands = {
      "footprint " + m1.string() + " --scope all",
      "footprint " + m1.string() + " --scope households --per-capita 8500000",
      "contribute " + m1.string() + " --sector C1 --level broad",
      "lifecycle " + kFixtures + "/transport_components.csv",
  };
  fs::path road_model = dir / "road.json";
  if (run_cli("build " + kFixtures + "/road --out " + road_model.string()).exit_code == 0) {
    commands.push_back("correlate " + road_model.string() + " --sector road --level cat");
  } else {
    ok = false;
  }
  for (const auto& cmd : commands) {
    auto r1 = run_cli(cmd);
    auto r2 = run_cli(cmd);
    if (r1.exit_code != 0 || r1.out != r2.out) ok = false;
  }
  report("builds hash identically and every report is byte-identical across runs",
         ok);
}

void validation_failures() {
  struct Case {
    std::string fixture;
    std::string needle;
  };
  std::vector<Case> cases = {
      {"bad-weights", "concordance.csv"},
      {"bad-nan", "use.csv"},
      {"nonproductive", "productive"},
  };
  bool ok = true;
  std::string detail;
  for (const auto& c : cases) {
    auto r = run_cli("build " + kFixtures + "/" + c.fixture + " --out " +
                     (fs::temp_directory_path() / "eeio_acceptance" / (c.fixture + ".json")).string());
    if (r.exit_code != 2 || r.err.find(c.needle) == std::string::npos) {
      ok = false;
      detail = c.fixture + " exit " + std::to_string(r.exit_code);
    }
  }
  report("malformed fixtures fail with exit code 2 naming the offender", ok, detail);
}

}  // namespace

int main() {
  solver_oracle_equivalence();
  scalar_closed_form();
  decomposition_additivity();
  conservation_suite();
  per_capita_arithmetic();
  transport_component_table();
  regression_criteria();
  determinism();
  validation_failures();
  std::cout << (g_failures == 0 ? "all criteria passed"
                                : std::to_string(g_failures) + " criteria failed")
            << "\n";
  return g_failures == 0 ? 0 : 1;
}
