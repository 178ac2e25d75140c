#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "ojj/cli/config.hpp"
#include "ojj/cli/result_table.hpp"
#include "ojj/cli/scenario.hpp"

namespace fs = std::filesystem;
using namespace ojj::cli;

namespace {

struct TempDir {
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("ojj_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path path;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct RunResult {
  int code = -1;
  std::string err;
};

RunResult run_cli(const TempDir& dir, const std::string& args, const json& config,
                  const std::string& out = "out") {
  const fs::path cfg = dir.path / "config.json";
  const fs::path err = dir.path / "stderr.txt";
  std::ofstream(cfg) << config.dump();
  const std::string cmd = std::string(OJJ_BINARY) + " " + args + " --config " + cfg.string() +
                          " --out " + (dir.path / out).string() + " > /dev/null 2> " + err.string();
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(err)};
}

json protocol_config(json params) {
  return {{"schema_version", 1}, {"kind", "protocol"}, {"parameters", std::move(params)}};
}

json without_provenance(const std::string& text) {
  auto doc = json::parse(text);
  doc.erase("provenance");
  return doc;
}

}  // namespace

TEST_CASE("number formatting") {
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(123456789012345.0) == "1.23456789012e+14");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(NAN) == "nan");
  CHECK(json_number(INFINITY).is_null());
  CHECK(json_number(2.0 / 3.0).get<double>() == 0.666666666667);
}

TEST_CASE("result table is rectangular and sorts stably") {
  ResultTable t;
  t.columns = {"x", "y"};
  t.add_row({2, 1});
  t.add_row({1, 2});
  t.add_row({2, 3});
  CHECK_THROWS_AS(t.add_row({1}), ojj::DimensionError);
  t.sort_by(0);
  CHECK(t.to_csv() == "x,y\n1,2\n2,1\n2,3\n");
}

TEST_CASE("config envelope validation") {
  const json ok = {{"schema_version", 1}, {"parameters", json::object()}};
  CHECK_NOTHROW(parse_config(ok, ScenarioKind::kProtocol));

  json bad = ok;
  bad["colour"] = 1;
  try {
    parse_config(bad, ScenarioKind::kProtocol);
    FAIL("unknown key accepted");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "colour");
  }

  bad = ok;
  bad["schema_version"] = 2;
  CHECK_THROWS_AS(parse_config(bad, ScenarioKind::kProtocol), ConfigError);
  bad = ok;
  bad["kind"] = "ring";
  CHECK_THROWS_AS(parse_config(bad, ScenarioKind::kProtocol), ConfigError);
  CHECK_THROWS_AS(parse_config({{"schema_version", 1}}, ScenarioKind::kRing), ConfigError);
  CHECK_NOTHROW(parse_config({{"schema_version", 1}}, ScenarioKind::kSelftest));
}

TEST_CASE("parameter reader") {
  const json p = {{"N", 4}, {"x", 2.5}, {"extra", true}, {"list", {1, 2}}};
  ParamReader r(p);
  CHECK(r.integer("N") == 4);
  CHECK(r.number("x") == 2.5);
  CHECK(r.number("missing", 7.0) == 7.0);
  CHECK(r.numbers("list").size() == 2);
  CHECK_THROWS_AS(r.integer("x"), ConfigError);
  try {
    r.finish();
    FAIL("unread key accepted");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "extra");
  }
}

TEST_CASE("protocol scenario writes the documented table") {
  TempDir dir;
  const auto res = run_cli(dir, "protocol", protocol_config({{"N", 16}, {"phi_count", 11}}));
  REQUIRE(res.code == kExitOk);
  const auto csv = slurp(dir.path / "out/protocol.csv");
  CHECK(csv.rfind("phi,delta_n_sim,delta_n_eq22,delta_n_exact\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 12);
  CHECK(csv.find('\r') == std::string::npos);

  const auto summary = json::parse(slurp(dir.path / "out/summary.json"));
  for (const char* key : {"scenario", "parameters", "results", "integrity", "provenance"}) {
    CHECK(summary.contains(key));
  }
  CHECK(summary["integrity"].contains("max_norm_drift"));
  CHECK(summary["integrity"].contains("max_hermiticity_residual"));
  CHECK(summary["results"]["slope_at_zero"].get<double>() ==
        doctest::Approx(std::sqrt(16 * 18 / 8.0)).epsilon(1e-9));
}

TEST_CASE("missing N exits 1 and names the key") {
  TempDir dir;
  const auto res = run_cli(dir, "protocol", protocol_config({{"phi_count", 5}}));
  CHECK(res.code == kExitConfig);
  CHECK(res.err.find("'N'") != std::string::npos);
}

TEST_CASE("configuration errors exit 1") {
  TempDir dir;
  CHECK(run_cli(dir, "protocol", protocol_config({{"N", 3}})).code == kExitConfig);
  CHECK(run_cli(dir, "protocol", protocol_config({{"N", 4}, {"bogus", 1}})).code == kExitConfig);
  CHECK(run_cli(dir, "ring", protocol_config({{"N", 4}})).code == kExitConfig);
  CHECK(run_cli(dir, "ring", {{"schema_version", 1}, {"parameters", {{"omega_k1", 1.0}}}}).code ==
        kExitConfig);
}

TEST_CASE("injected non-Hermitian operator exits 2") {
  TempDir dir;
  const json cfg = {{"schema_version", 1}, {"parameters", {{"inject_fault", "non_hermitian"}}}};
  const auto res = run_cli(dir, "selftest", cfg);
  CHECK(res.code == kExitIntegrity);
  CHECK(res.err.find("integrity") != std::string::npos);
}

TEST_CASE("selftest passes") {
  TempDir dir;
  CHECK(run_cli(dir, "selftest", {{"schema_version", 1}}).code == kExitOk);
}

TEST_CASE("repeated runs are byte-identical outside provenance") {
  TempDir dir;
  const json cfg = {{"schema_version", 1},
                    {"parameters", {{"N", 8}, {"tau_count", 400}}}};
  REQUIRE(run_cli(dir, "interference", cfg, "a").code == kExitOk);
  REQUIRE(run_cli(dir, "interference --emit-plots", cfg, "b").code == kExitOk);
  CHECK(slurp(dir.path / "a/interference.csv") == slurp(dir.path / "b/interference.csv"));
  CHECK(without_provenance(slurp(dir.path / "a/summary.json")) ==
        without_provenance(slurp(dir.path / "b/summary.json")));
  CHECK(fs::exists(dir.path / "b/interference.svg"));
  CHECK_FALSE(fs::exists(dir.path / "a/interference.svg"));
}

TEST_CASE("sweep contract") {
  TempDir dir;
  auto sweep = [](json values, bool parallel, std::string parameter = "N") {
    return json{{"schema_version", 1},
                {"parameters",
                 {{"scenario", "protocol"},
                  {"parameter", parameter},
                  {"values", std::move(values)},
                  {"base", {{"phi_count", 7}}},
                  {"parallel", parallel}}}};
  };

  REQUIRE(run_cli(dir, "sweep", sweep({8, 2, 4}, false), "serial").code == kExitOk);
  REQUIRE(run_cli(dir, "sweep", sweep({8, 2, 4}, true), "parallel").code == kExitOk);
  const auto serial = slurp(dir.path / "serial/sweep.csv");
  CHECK(serial == slurp(dir.path / "parallel/sweep.csv"));
  std::istringstream lines(serial);
  std::string line;
  std::vector<std::string> firsts;
  while (std::getline(lines, line)) firsts.push_back(line.substr(0, line.find(',')));
  CHECK(firsts == std::vector<std::string>{"N", "2", "4", "8"});

  CHECK(run_cli(dir, "sweep", sweep(json::array(), true)).code == kExitConfig);
  const auto unknown = run_cli(dir, "sweep", sweep({1, 2}, true, "colour"));
  CHECK(unknown.code == kExitConfig);
  CHECK(unknown.err.find("colour") != std::string::npos);
  CHECK(run_cli(dir, "sweep", sweep({1, 2}, true, "phi_values")).code == kExitConfig);
}

TEST_CASE("every sweepable parameter is accepted by its scenario") {
  const json bases[] = {
      {{"N", 4}, {"phi_count", 3}},
      {{"N", 4}, {"tau_count", 200}},
      {{"gamma_prime_1", 0.05}, {"omega_k1", 1.0}, {"grid_points", 400}},
      {{"omega_pump", 1.0}, {"detuning", 20.0}, {"omega_k", 1.0}, {"scan_count", 5}},
  };
  const ScenarioKind kinds[] = {ScenarioKind::kProtocol, ScenarioKind::kInterference,
                                ScenarioKind::kRing, ScenarioKind::kBragg};
  for (int k = 0; k < 4; ++k) {
    const auto out = run_kind(kinds[k], bases[k]);
    for (const auto& name : sweepable_parameters(kinds[k])) {
      CAPTURE(name);
      json p = bases[k];
      if (!p.contains(name)) p[name] = out.parameters.contains(name) ? out.parameters[name] : json(1);
      if (!p[name].is_number()) continue;
      CHECK_NOTHROW(run_kind(kinds[k], p));
    }
  }
}
