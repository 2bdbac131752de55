#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "eeio/csv.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kCli = EEIO_CLI_PATH;
const std::string kFixtures = EEIO_FIXTURES_DIR;

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

RunResult run(const std::string& args) {
  static int counter = 0;
  fs::path dir = fs::temp_directory_path() / "eeio_cli_io";
  fs::create_directories(dir);
  fs::path out = dir / ("out" + std::to_string(counter) + ".txt");
  fs::path err = dir / ("err" + std::to_string(counter) + ".txt");
  ++counter;

  std::string cmd = kCli + " " + args + " > " + out.string() + " 2> " + err.string();
  int status = std::system(cmd.c_str());
  RunResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.out = slurp(out);
  result.err = slurp(err);
  return result;
}

fs::path work_dir() {
  fs::path dir = fs::temp_directory_path() / "eeio_cli_work";
  fs::create_directories(dir);
  return dir;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      char c = line[i];
      if (quoted) {
        if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else if (c == '"') {
          quoted = false;
        } else {
          field += c;
        }
      } else if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        fields.push_back(field);
        field.clear();
      } else {
        field += c;
      }
    }
    fields.push_back(field);
    rows.push_back(fields);
  }
  return rows;
}

std::string build_model(const std::string& fixture) {
  fs::path model = work_dir() / (fixture + "_model.json");
  auto result = run("build " + kFixtures + "/" + fixture + " --out " + model.string());
  REQUIRE_MESSAGE(result.exit_code == 0, result.err);
  return model.string();
}

}  // namespace

TEST_CASE("build is deterministic and prints the content hash") {
  fs::path m1 = work_dir() / "det1.json";
  fs::path m2 = work_dir() / "det2.json";
  auto r1 = run("build " + kFixtures + "/3sector --out " + m1.string());
  auto r2 = run("build " + kFixtures + "/3sector --out " + m2.string());
  REQUIRE_MESSAGE(r1.exit_code == 0, r1.err);
  CHECK(r1.out == r2.out);
  CHECK(r1.out.size() == 17);  // 16 hex digits + newline
  CHECK(slurp(m1) == slurp(m2));
  CHECK(fs::exists(m1.string() + ".report.json"));
}

TEST_CASE("build rejects malformed inputs with exit code 2 and names the file") {
  auto bad_weights = run("build " + kFixtures + "/bad-weights --out " +
                         (work_dir() / "bw.json").string());
  CHECK(bad_weights.exit_code == 2);
  CHECK(bad_weights.err.find("concordance.csv") != std::string::npos);

  auto bad_nan = run("build " + kFixtures + "/bad-nan --out " +
                     (work_dir() / "bn.json").string());
  CHECK(bad_nan.exit_code == 2);
  CHECK(bad_nan.err.find("use.csv") != std::string::npos);

  auto nonprod = run("build " + kFixtures + "/nonproductive --out " +
                     (work_dir() / "np.json").string());
  CHECK(nonprod.exit_code == 2);
}

TEST_CASE("footprint emits the same numbers in csv and json") {
  std::string model = build_model("3sector");
  auto csv = run("footprint " + model + " --scope all --format csv");
  auto js = run("footprint " + model + " --scope all --format json");
  REQUIRE(csv.exit_code == 0);
  REQUIRE(js.exit_code == 0);

  auto rows = parse_csv(csv.out);
  REQUIRE(rows.size() >= 2);
  CHECK(rows[0] == std::vector<std::string>{"indicator", "level", "unit", "total"});

  auto parsed = nlohmann::json::parse(js.out);
  REQUIRE(parsed.size() == rows.size() - 1);
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    CHECK(parsed[i]["indicator"] == rows[i + 1][0]);
    CHECK(parsed[i]["total"] == rows[i + 1][3]);
  }

  auto again = run("footprint " + model + " --scope all --format csv");
  CHECK(again.out == csv.out);
}

TEST_CASE("footprint scoping and per-capita column") {
  std::string model = build_model("3sector");
  auto all = run("footprint " + model + " --scope all");
  auto hh = run("footprint " + model + " --scope households");
  auto gov = run("footprint " + model + " --scope government");
  REQUIRE(all.exit_code == 0);
  REQUIRE(hh.exit_code == 0);
  REQUIRE(gov.exit_code == 0);
  auto a = parse_csv(all.out), h = parse_csv(hh.out), g = parse_csv(gov.out);
  for (std::size_t r = 1; r < a.size(); ++r) {
    double total = std::stod(a[r][3]);
    double split = std::stod(h[r][3]) + std::stod(g[r][3]);
    CHECK(total == doctest::Approx(split).epsilon(1e-5));
  }

  auto pc = run("footprint " + model + " --scope all --per-capita 1000");
  auto rows = parse_csv(pc.out);
  REQUIRE(rows[0].size() == 5);
  CHECK(rows[0][4] == "per_capita");
  CHECK(std::stod(rows[1][4]) ==
        doctest::Approx(std::stod(rows[1][3]) / 1000.0).epsilon(1e-5));

  auto unknown = run("footprint " + model + " --scope exports");
  CHECK(unknown.exit_code == 2);
}

TEST_CASE("contribute shares sum to one per indicator") {
  std::string model = build_model("road");
  auto result = run("contribute " + model + " --sector road --level cat");
  REQUIRE_MESSAGE(result.exit_code == 0, result.err);
  auto rows = parse_csv(result.out);
  REQUIRE(rows.size() > 1);
  CHECK(rows[0] == std::vector<std::string>{"group", "indicator", "value", "share"});

  std::map<std::string, double> share_sum;
  bool saw_direct = false;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    share_sum[rows[r][1]] += std::stod(rows[r][3]);
    if (rows[r][0] == "Direct emissions") saw_direct = true;
  }
  CHECK(saw_direct);
  for (const auto& [indicator, sum] : share_sum) {
    CHECK_MESSAGE(sum == doctest::Approx(1.0).epsilon(1e-4), indicator);
  }

  fs::path plot = work_dir() / "plot.csv";
  auto with_plot = run("contribute " + model +
                       " --sector road --level cat --plot " + plot.string());
  REQUIRE(with_plot.exit_code == 0);
  auto plot_rows = parse_csv(slurp(plot));
  CHECK(plot_rows[0] == std::vector<std::string>{"group", "indicator", "share"});
  CHECK(plot_rows.size() == rows.size());

  auto missing = run("contribute " + model + " --sector nope");
  CHECK(missing.exit_code == 2);
}

TEST_CASE("correlate reports the midpoint-endpoint fit per endpoint") {
  std::string model = build_model("road");
  auto base = run("correlate " + model + " --sector road --level cat");
  REQUIRE_MESSAGE(base.exit_code == 0, base.err);
  auto rows = parse_csv(base.out);
  REQUIRE(rows.size() == 3);  // header + 2 endpoints
  CHECK(rows[0] == std::vector<std::string>{"endpoint", "slope", "intercept",
                                            "r_squared", "n_points"});

  std::map<std::string, double> r2;
  for (std::size_t r = 1; r < rows.size(); ++r) r2[rows[r][0]] = std::stod(rows[r][3]);
  CHECK(r2.at("eq") == doctest::Approx(0.995).epsilon(2e-3));
  CHECK(r2.at("hh") == doctest::Approx(0.991).epsilon(2e-3));

  auto with_direct =
      run("correlate " + model + " --sector road --level cat --include-direct");
  REQUIRE(with_direct.exit_code == 0);
  auto rows2 = parse_csv(with_direct.out);
  std::map<std::string, double> r2_direct;
  std::map<std::string, int> n_direct;
  for (std::size_t r = 1; r < rows2.size(); ++r) {
    r2_direct[rows2[r][0]] = std::stod(rows2[r][3]);
    n_direct[rows2[r][0]] = std::stoi(rows2[r][4]);
  }
  CHECK(r2_direct.at("eq") > r2.at("eq"));
  CHECK(r2_direct.at("hh") > r2.at("hh"));
  CHECK(n_direct.at("eq") == std::stoi(rows[1][4]) + 1);

  fs::path scatter = work_dir() / "scatter.csv";
  auto with_scatter = run("correlate " + model +
                          " --sector road --level cat --scatter " + scatter.string());
  REQUIRE(with_scatter.exit_code == 0);
  auto srows = parse_csv(slurp(scatter));
  CHECK(srows[0] == std::vector<std::string>{"endpoint", "group", "x", "y"});

  auto bad_mid = run("correlate " + model + " --sector road --midpoint nope");
  CHECK(bad_mid.exit_code == 2);
}

TEST_CASE("lifecycle renders component and group shares from a csv") {
  auto result = run("lifecycle " + kFixtures + "/transport_components.csv");
  REQUIRE_MESSAGE(result.exit_code == 0, result.err);
  auto rows = parse_csv(result.out);
  CHECK(rows[0] ==
        std::vector<std::string>{"kind", "group", "label", "value", "share"});

  double total = 0.0;
  std::map<std::string, double> group_share;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r][0] == "total") total = std::stod(rows[r][3]);
    if (rows[r][0] == "group") group_share[rows[r][1]] = std::stod(rows[r][4]);
  }
  CHECK(total == doctest::Approx(1.7886e11).epsilon(1e-3));
  CHECK(group_share.at("Infrastructure") == doctest::Approx(0.046).epsilon(2e-2));
  CHECK(group_share.at("Tailpipe emissions") + group_share.at("Fuel supply chain") ==
        doctest::Approx(0.7208).epsilon(1e-3));

  auto rerun = run("lifecycle " + kFixtures + "/transport_components.csv");
  CHECK(rerun.out == result.out);
}
