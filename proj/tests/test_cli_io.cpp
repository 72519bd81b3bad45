#include <doctest.h>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <string>

#include <unistd.h>

#include "blowup/config.hpp"
#include "blowup/errors.hpp"
#include "blowup/io.hpp"
#include "blowup/runner.hpp"

using namespace blowup;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  static std::atomic<int> counter{0};
  const fs::path dir = fs::temp_directory_path() /
                       ("blowup_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + "_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string error_of(std::string_view text, const std::vector<std::string>& overrides = {}) {
  try {
    (void)parse_config(text, overrides);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

constexpr const char* kMinimal = "[params]\np = 3\na = 1\nN = 1\n[run]\nscenario = ode\n";

}  // namespace

TEST_CASE("minimal document fills defaults") {
  const RunConfig c = parse_config(kMinimal);
  CHECK(c.scenario == Scenario::ode);
  CHECK(c.params.p == 3.0);
  CHECK(c.params.a == 1.0);
  CHECK(c.params.N == 1);
  CHECK(c.seed == 0);
  CHECK(c.grid.geometry == Geometry::line);
  CHECK(c.grid.resolution == 401);
  CHECK(c.solver.rel_tol == 1e-10);
  CHECK(c.initial.kind == InitialKind::gaussian);
}

TEST_CASE("comments, spacing and radial default") {
  const RunConfig c = parse_config(
      "# header\n[params]\n  p=1.5 ; inline\n a = -0.5\nN = 3\n\n[run]\nscenario = similarity\nseed = 7\n");
  CHECK(c.params.p == 1.5);
  CHECK(c.params.a == -0.5);
  CHECK(c.grid.geometry == Geometry::radial);
  CHECK(c.seed == 7);
}

TEST_CASE("verify needs no params") {
  const RunConfig c = parse_config("[run]\nscenario = verify\n");
  CHECK(c.scenario == Scenario::verify);
}

TEST_CASE("rejections") {
  CHECK(!error_of("[params]\np = 5\na = 0\nN = 3\n[run]\nscenario = ode\n").empty());
  const std::string unknown = error_of(std::string(kMinimal) + "foo = 1\n");
  CHECK(unknown.find("foo") != std::string::npos);
  CHECK(unknown.find("line 7") != std::string::npos);
  CHECK(!error_of(std::string(kMinimal) + "[nowhere]\n").empty());
  CHECK(!error_of(std::string(kMinimal) + "scenario = ode\n").empty());
  CHECK(!error_of("[params]\np = 3\na = 1\nN = 1\n").empty());
  CHECK(!error_of("[run]\nscenario = ode\n").empty());
  CHECK(!error_of(kMinimal, {"grid.resolution=63"}).empty());
  CHECK(!error_of(kMinimal, {"params.N=2", "grid.geometry=line"}).empty());
  CHECK(!error_of(kMinimal, {"solver.T=1.5"}).empty());
  CHECK(!error_of(kMinimal, {"solver.M_stop=1"}).empty());
  CHECK(!error_of(kMinimal, {"solver.ds=0"}).empty());
  CHECK(!error_of(kMinimal, {"params.p=three"}).empty());
  const std::string bad_override = error_of(kMinimal, {"grid.bogus=1"});
  CHECK(bad_override.find("bogus") != std::string::npos);
  CHECK(bad_override.find("override") != std::string::npos);
}

TEST_CASE("overrides win over the document") {
  const RunConfig c = parse_config(kMinimal, {"params.a=-1", "run.scenario=physical", "grid.resolution=128"});
  CHECK(c.params.a == -1.0);
  CHECK(c.scenario == Scenario::physical);
  CHECK(c.grid.resolution == 128);
  const nlohmann::json j = to_json(c);
  CHECK(j["params"]["a"].get<double>() == -1.0);
}

TEST_CASE("csv round trip is exact") {
  const fs::path dir = scratch("csv");
  fs::create_directories(dir);
  CsvTable t{{"x", "y"}, {}};
  for (int k = 0; k < 50; ++k) t.rows.push_back({std::sqrt(k + 0.1) * 1e-7, std::exp(k * 0.73) * -1.0 / 3.0});
  t.rows.push_back({5e-324, 1.7976931348623157e308});
  write_csv(dir / "t.csv", t);
  const CsvTable r = read_csv(dir / "t.csv");
  CHECK(r.header == t.header);
  REQUIRE(r.rows.size() == t.rows.size());
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    CHECK(r.rows[i][0] == t.rows[i][0]);
    CHECK(r.rows[i][1] == t.rows[i][1]);
  }
  CHECK(r.column("y") == 1);
  CHECK_THROWS_AS((void)r.column("z"), ConfigError);
  CHECK_THROWS_AS(write_csv(dir / "bad.csv", CsvTable{{"a"}, {{1.0, 2.0}}}), Error);
  fs::remove_all(dir);
}

TEST_CASE("ode scenario at a = 0 tracks kappa_0 and is deterministic") {
  const fs::path d1 = scratch("ode1"), d2 = scratch("ode2");
  RunConfig c = parse_config(kMinimal, {"params.a=0", "solver.s_max=12", "run.output=" + d1.string()});
  const RunOutcome o1 = run(c);
  c.output = d2.string();
  const RunOutcome o2 = run(c);
  REQUIRE(o1.exit_code == 0);
  CHECK(o1.report["schema_version"].get<int>() == kSchemaVersion);
  CHECK(o1.report["status"].get<std::string>() == "ok");
  CHECK(read_text(d1 / "trajectory.csv") == read_text(d2 / "trajectory.csv"));
  const CsvTable t = read_csv(d1 / "trajectory.csv");
  const std::size_t col = t.column("ratio");
  CHECK(t.rows.size() > 10);
  for (const auto& row : t.rows) CHECK(row[col] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-8));
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST_CASE("physical scenario writes its ledgers") {
  const fs::path dir = scratch("phys");
  const RunConfig c = parse_config(kMinimal, {"run.scenario=physical", "grid.extent=10", "grid.resolution=101",
                                              "solver.M_stop=1e6", "initial.amplitude=3",
                                              "run.output=" + dir.string()});
  const RunOutcome o = run(c);
  INFO(o.report.dump());
  REQUIRE(o.exit_code == 0);
  CHECK(o.report["results"]["status"].get<std::string>() == "blowup");
  const CsvTable h = read_csv(dir / "sup_history.csv");
  CHECK(h.header == std::vector<std::string>{"t", "sup"});
  CHECK(h.rows.back()[1] >= 1e6);
  CHECK(read_csv(dir / "final_field.csv").rows.size() == 101);
  CHECK(fs::exists(dir / "report.json"));
  fs::remove_all(dir);
}

TEST_CASE("similarity scenario writes its ledgers and audits") {
  const fs::path dir = scratch("sim");
  const RunConfig c = parse_config(kMinimal, {"run.scenario=similarity", "grid.resolution=101", "solver.s_span=3",
                                              "initial.kind=constant", "initial.c=0",
                                              "run.output=" + dir.string()});
  const RunOutcome o = run(c);
  REQUIRE(o.exit_code == 0);
  const CsvTable f = read_csv(dir / "functionals.csv");
  CHECK(f.header.size() == 13);
  CHECK(f.rows.front()[0] == doctest::Approx(2.0));
  CHECK(f.rows.back()[0] == doctest::Approx(5.0));
  CHECK(o.report["results"]["lyapunov"]["passed"].get<bool>());
  fs::remove_all(dir);
}

TEST_CASE("errors become exit code 2 with a report") {
  const fs::path dir = scratch("err");
  const RunConfig c = parse_config(kMinimal, {"run.scenario=similarity", "initial.kind=file",
                                              "initial.path=" + (dir / "missing.csv").string(),
                                              "run.output=" + dir.string()});
  const RunOutcome o = run(c);
  CHECK(o.exit_code == 2);
  CHECK(o.report["status"].get<std::string>() == "error");
  CHECK(o.report.contains("error"));
  CHECK(fs::exists(dir / "report.json"));
  fs::remove_all(dir);
}
