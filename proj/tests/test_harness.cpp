#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fracdiff/snapshot.hpp"
#include "fracdiff/study.hpp"
#include "json.hpp"

using namespace fracdiff;

namespace {

std::string render(const RateTable& t, ReportFormat f) {
  std::ostringstream os;
  emit_report(t, f, os);
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("rates are log2 ratios and scale invariant") {
  std::vector<double> e{1.0, 0.25, 0.0625};
  auto r = compute_rates(e);
  REQUIRE(r.size() == 3);
  CHECK(std::isnan(r[0]));
  CHECK(r[1] == doctest::Approx(2.0));
  CHECK(r[2] == doctest::Approx(2.0));

  std::vector<double> scaled{7.3, 7.3 * 0.25, 7.3 * 0.0625};
  auto rs = compute_rates(scaled);
  for (std::size_t i = 1; i < rs.size(); ++i)
    CHECK(rs[i] == doctest::Approx(r[i]).epsilon(1e-12));
}

TEST_CASE("report emission is deterministic and parseable") {
  RateTable t;
  t.problem = "demo";
  t.norm = "l2";
  t.rows = {{"(0.5,0)", 8, 1.25e-3, std::nan(""), true, ""},
            {"(0.5,0)", 16, 3.125e-4, 2.0, true, ""},
            {"(0.5,0)", 32, 1.0e-4, 1.64, false, "made \"up\" note"}};

  for (auto f : {ReportFormat::Csv, ReportFormat::Json, ReportFormat::Markdown})
    CHECK(render(t, f) == render(t, f));

  const std::string csv = render(t, ReportFormat::Csv);
  CHECK(csv.find("1.250000e-03") != std::string::npos);
  CHECK(csv.find("2.000000e+00") != std::string::npos);

  // the json emitter must produce valid json including escaped quotes
  auto parsed = nlohmann::json::parse(render(t, ReportFormat::Json));
  CHECK(parsed["rows"].size() == 3);
  CHECK(parsed["rows"][0]["rate"].is_null());
  CHECK(parsed["rows"][2]["note"] == "made \"up\" note");

  const std::string md = render(t, ReportFormat::Markdown);
  CHECK(md.find("| (0.5,0) | 16 |") != std::string::npos);
}

TEST_CASE("emitted rates are consistent with neighboring errors") {
  StudyConfig c;
  c.problem = "smooth-steady";
  c.study = StudyKind::SteadySpatial;
  c.dim = 2;
  c.mode_n = 1;
  c.kind = Discretization::Cdm4;
  c.pairs = {{0.5, 0.0}, {1.3, 1.0}};
  c.nx = {4, 8, 16};
  RateTable t = run_convergence(c);
  REQUIRE(t.rows.size() == 6);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (i % 3 == 0) {
      CHECK(std::isnan(t.rows[i].rate));
      continue;
    }
    const double recomputed = std::log2(t.rows[i - 1].error / t.rows[i].error);
    CHECK(std::abs(t.rows[i].rate - recomputed) < 1e-9);
    CHECK(t.rows[i].rate == doctest::Approx(4.0).epsilon(0.05));
  }
}

TEST_CASE("parallel sweeps give identical tables") {
  StudyConfig c;
  c.problem = "smooth-steady";
  c.study = StudyKind::SteadySpatial;
  c.dim = 2;
  c.kind = Discretization::FemLinear;
  c.pairs = {{0.4, 0.0}, {0.8, 1.0}};
  c.nx = {8, 16, 32};
  c.threads = 1;
  const std::string serial = render(run_convergence(c), ReportFormat::Csv);
  c.threads = 4;
  const std::string parallel = render(run_convergence(c), ReportFormat::Csv);
  CHECK(serial == parallel);
}

TEST_CASE("golden regression for a small spatial study") {
  StudyConfig c;
  c.problem = "smooth-steady";
  c.study = StudyKind::SteadySpatial;
  c.dim = 3;
  c.mode_n = 2;
  c.kind = Discretization::FemLinear;
  c.pairs = {{0.4, 0.0}};
  c.nx = {8, 16};
  const std::string got = render(run_convergence(c), ReportFormat::Csv);
  const std::string want = read_file(std::string(FRACDIFF_TEST_DATA_DIR) +
                                     "/golden_smooth_steady.csv");
  CHECK(got == want);
}

TEST_CASE("self-convergence study needs doubled grids") {
  StudyConfig c;
  c.problem = "singular-steady";
  c.study = StudyKind::SteadySelf;
  c.dim = 2;
  c.kind = Discretization::FemLinear;
  c.pairs = {{0.5, 0.0}};
  c.nx = {8, 12};
  RateTable t = run_convergence(c);
  REQUIRE(t.rows.size() == 1);
  CHECK_FALSE(t.rows[0].ok);
  CHECK(t.rows[0].note.find("doubled") != std::string::npos);

  c.nx = {8, 16, 32};
  t = run_convergence(c);
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0].ok);
  CHECK(t.rows[1].ok);
  CHECK(t.rows[1].rate > 1.0);
}

TEST_CASE("config parsing accepts the documented schema") {
  const std::string text = R"({
    "problem": "manufactured-evolve",
    "study": "evolve-temporal",
    "kind": "cdm4",
    "g": "power15",
    "pairs": [[0.8, 0.8], [0.6, 0.4]],
    "nt": [20, 40],
    "nx_fixed": 64,
    "max_norm": true,
    "threads": 2,
    "format": "json",
    "ch": {"intervals": 64, "seed": 9}
  })";
  StudyConfig c = StudyConfig::from_json_text(text);
  CHECK(c.study == StudyKind::EvolveTemporal);
  CHECK(c.kind == Discretization::Cdm4);
  CHECK(c.g == TimeProfile::Power15);
  REQUIRE(c.pairs.size() == 2);
  CHECK(c.pairs[1].second == doctest::Approx(0.4));
  CHECK(c.nx_fixed == 64);
  CHECK(c.max_norm);
  CHECK(c.format == ReportFormat::Json);
  CHECK(c.ch.intervals == 64);
  CHECK(c.ch.seed == 9);
}

TEST_CASE("config parsing rejects malformed input") {
  CHECK_THROWS_AS(StudyConfig::from_json_text("not json"), ConfigError);
  CHECK_THROWS_AS(StudyConfig::from_json_text("[1,2,3]"), ConfigError);
  CHECK_THROWS_AS(StudyConfig::from_json_text(R"({"mystery": 1})"), ConfigError);
  CHECK_THROWS_AS(StudyConfig::from_json_text(R"({"kind": "spectral"})"), ConfigError);
  CHECK_THROWS_AS(StudyConfig::from_json_text(R"({"dim": 5})"), ConfigError);
  CHECK_THROWS_AS(StudyConfig::from_json_text(R"({"alpha": 1.5})"), ConfigError);
  CHECK_THROWS_AS(StudyConfig::from_json_text(R"({"threads": 0})"), ConfigError);
  CHECK_THROWS_AS(StudyConfig::from_json_text(R"({"nx": [1]})"), ConfigError);
  CHECK_THROWS_AS(StudyConfig::from_json_text(R"({"pairs": [[0.5]]})"), ConfigError);
  CHECK_THROWS_AS(StudyConfig::from_json_file("/no/such/file.json"), ConfigError);
}

TEST_CASE("empty sweeps and pair lists are config errors") {
  StudyConfig c;
  c.nx.clear();
  c.pairs = {{0.5, 0.0}};
  CHECK_THROWS_AS(run_convergence(c), ConfigError);
  c.nx = {8, 16};
  c.pairs.clear();
  CHECK_THROWS_AS(run_convergence(c), ConfigError);
}

TEST_CASE("field snapshots carry coordinates and values") {
  Grid g = Grid::unit_box(2, 4);
  TensorField f(g);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = static_cast<double>(i);
  const auto path = std::filesystem::temp_directory_path() / "snapshot_test.csv";
  emit_field_snapshot(f, g, path.string());
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "x,y,u");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 9);
  std::filesystem::remove(path);
}

#ifdef FRACDIFF_CLI_PATH
TEST_CASE("cli maps config errors to exit code 2 and runs to 0 on success") {
  const std::string cli = FRACDIFF_CLI_PATH;
  const std::string data = FRACDIFF_TEST_DATA_DIR;
  const auto out = std::filesystem::temp_directory_path() / "cli_exit_test";

  int rc = std::system((cli + " convergence --config " + data +
                        "/bad_config.json > /dev/null 2>&1").c_str());
  CHECK(WEXITSTATUS(rc) == 2);

  rc = std::system((cli + " steady --nx 8 --kind cdm4 --out " + out.string() +
                    " > /dev/null 2>&1").c_str());
  CHECK(WEXITSTATUS(rc) == 0);

  rc = std::system((cli + " convergence --config /missing.json > /dev/null 2>&1").c_str());
  CHECK(WEXITSTATUS(rc) == 2);
  std::filesystem::remove_all(out);
}
#endif
