#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include "feykac/cli/commands.hpp"

using namespace feykac;
using namespace feykac::cli;
namespace fs = std::filesystem;

namespace {

struct Run {
  int status = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch_dir() {
  const auto dir = fs::temp_directory_path() / ("feykac_cli_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

// Runs the installed tool with the given argument string.
Run tool(const std::string& args) {
  static int counter = 0;
  const auto dir = scratch_dir();
  const auto out = dir / ("stdout_" + std::to_string(counter));
  const auto err = dir / ("stderr_" + std::to_string(counter++));
  const std::string cmd = std::string(FEYKAC_TOOL) + " " + args + " >" + out.string() + " 2>" + err.string();
  const int raw = std::system(cmd.c_str());
  Run r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("settings") {
  RunConfig cfg;
  apply_assignment(cfg, "t=0.1,0.25, 1");
  CHECK(cfg.t == std::vector<double>{0.1, 0.25, 1.0});
  apply_assignment(cfg, "x=[-1,2]");
  CHECK(cfg.x == std::vector<double>{-1.0, 2.0});
  apply_assignment(cfg, "x=");
  CHECK(cfg.x.empty());
  apply_assignment(cfg, "potential=gauss_cos(1,2)");
  CHECK(cfg.potential == "gauss_cos(1,2)");
  apply_assignment(cfg, "n_paths=1000");
  apply_assignment(cfg, "seed=18446744073709551615");
  CHECK(cfg.seed == 18446744073709551615ULL);
  apply_assignment(cfg, "antithetic=true");
  CHECK(cfg.antithetic);
  apply_assignment(cfg, "h=0.04");
  CHECK(cfg.n_points == 601);

  CHECK_THROWS_AS(apply_assignment(cfg, "n_paths=0"), ConfigError);
  CHECK_THROWS_AS(apply_assignment(cfg, "n_paths=2.5"), ConfigError);
  CHECK_THROWS_AS(apply_assignment(cfg, "m_steps=abc"), ConfigError);
  CHECK_THROWS_AS(apply_assignment(cfg, "colour=red"), ConfigError);
  CHECK_THROWS_AS(apply_assignment(cfg, "no_equals_sign"), ConfigError);
  CHECK_THROWS_AS(apply_assignment(cfg, "t=0.1,,2"), ConfigError);
  CHECK_THROWS_AS(apply_assignment(cfg, "seed=-3"), ConfigError);
  CHECK_THROWS_AS(apply_assignment(cfg, "format=xml"), ConfigError);
  CHECK_THROWS_AS(apply_assignment(cfg, "h=0.07"), ConfigError);

  cfg.command = "oracle";
  CHECK_NOTHROW(validate(cfg));
  cfg.t = {0.5, -1.0};
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg.t = {0.5};
  cfg.command = "plot";
  CHECK_THROWS_AS(validate(cfg), ConfigError);
}

TEST_CASE("JSON configuration") {
  RunConfig cfg;
  apply_json(cfg, Json::parse(R"json({"command": "mc", "t": [0.1, 0.2], "x": [0], "n_paths": 500,
                                      "potential": "bump(2)", "antithetic": true, "seed": 99})json"));
  CHECK(cfg.command == "mc");
  CHECK(cfg.t == std::vector<double>{0.1, 0.2});
  CHECK(cfg.n_paths == 500);
  CHECK(cfg.potential == "bump(2)");
  CHECK(cfg.antithetic);
  CHECK(cfg.seed == 99);
  CHECK_THROWS_AS(apply_json(cfg, Json::parse(R"({"n": [1, 2]})")), ConfigError);
  CHECK_THROWS_AS(apply_json(cfg, Json::parse(R"([1, 2])")), ConfigError);

  // to_json round-trips through apply_json
  RunConfig back;
  apply_json(back, to_json(cfg));
  CHECK(to_json(back) == to_json(cfg));
}

TEST_CASE("oracle table") {
  RunConfig cfg;
  cfg.command = "oracle";
  cfg.t = {0.5};
  cfg.x = {0.0};
  const auto r = run_command(cfg);
  REQUIRE(r.table.rows.size() == 1);
  CHECK(std::get<double>(r.table.rows[0][2]) == Catch::Approx(1.0 / std::sqrt(std::cosh(1.0))).epsilon(1e-15));
  CHECK(to_csv(r.table).rfind("t,x,k,m1,m2,q_marginal\n0.5,0,", 0) == 0);

  cfg.t.clear();
  CHECK(run_command(cfg).table.rows.empty());
}

TEST_CASE("number formatting") {
  CHECK(format_real(0.1) == "0.10000000000000001");
  CHECK(format_real(2.0) == "2");
  CHECK(format_real(std::nan("")) == "nan");
  CHECK(format_cell(Cell{std::int64_t{64}}) == "64");
  CHECK(format_cell(Cell{true}) == "true");
}

TEST_CASE("tool: oracle to stdout and file") {
  const auto r = tool("oracle --set t=0.5 --set x=0,1");
  REQUIRE(r.status == 0);
  CHECK(count_lines(r.out) == 3);
  CHECK(r.out.rfind("t,x,k,m1,m2,q_marginal\n", 0) == 0);
  CHECK(r.out.find('\r') == std::string::npos);

  const auto path = scratch_dir() / "oracle.csv";
  fs::remove(path);
  REQUIRE(tool("oracle --set t=0.5 --set x=0,1 --out " + path.string()).status == 0);
  CHECK(slurp(path) == r.out);

  const auto empty = tool("oracle --set t=");
  CHECK(empty.status == 0);
  CHECK(empty.out == "t,x,k,m1,m2,q_marginal\n");
}

TEST_CASE("tool: errors leave no output file") {
  const auto dir = scratch_dir();
  const auto bad_json = dir / "bad.json";
  std::ofstream(bad_json) << "{\"t\": [0.5,";
  const auto target = dir / "never.csv";
  fs::remove(target);

  const auto a = tool("oracle --config " + bad_json.string() + " --out " + target.string());
  CHECK(a.status == 2);
  CHECK_FALSE(a.err.empty());
  CHECK_FALSE(fs::exists(target));

  CHECK(tool("oracle --set bogus=1 --out " + target.string()).status == 2);
  CHECK(tool("frobnicate").status == 2);
  CHECK(tool("mc --set v0=square --set n_paths=10 --out " + target.string()).status == 3);
  CHECK(tool("split --set potential=nonesuch --out " + target.string()).status == 3);
  CHECK_FALSE(fs::exists(target));
}

TEST_CASE("tool: configuration echo") {
  const auto r = tool("mc --seed 5 --set n_paths=77 --show-config");
  REQUIRE(r.status == 0);
  const auto j = Json::parse(r.out);
  CHECK(j["seed"] == 5);
  CHECK(j["n_paths"] == 77);
  CHECK(j["m_steps"] == 512);
  CHECK(j["potential"] == "zero");
  CHECK(j["n_points"] == 1201);
}

TEST_CASE("tool: runs are byte-identical for a fixed seed") {
  const std::string args = "mc --set 'potential=gauss_cos(1,1)' --set t=0.2,0.5 --set n_paths=3000 --seed 17";
  const auto a = tool(args);
  const auto b = tool(args + " --set workers=4");
  REQUIRE(a.status == 0);
  CHECK(a.out == b.out);
  CHECK(count_lines(a.out) == 5);
  CHECK(a.out != tool(args + " --seed 18").out);

  const auto j = tool(args + " --format json");
  REQUIRE(j.status == 0);
  const auto doc = Json::parse(j.out);
  CHECK(doc["config"]["seed"] == 17);
  CHECK(doc["rows"].size() == 4);
  CHECK(doc["rows"][0]["n_paths"] == 3000);
}

TEST_CASE("tool: split and pde") {
  const auto s = tool("split --set n=4 --set x=0");
  REQUIRE(s.status == 0);
  CHECK(s.out.rfind("t,x,n,value\n0.5,0,4,", 0) == 0);
  const auto p = tool("pde --set dt=0.001 --set x=0 --format json");
  REQUIRE(p.status == 0);
  const auto doc = Json::parse(p.out);
  const double mehler = apply_semigroup(gaussian_v0(1.0), 0.5, 0.0);
  CHECK(std::abs(doc["rows"][0]["value"].get<double>() - mehler) < 1e-4);
  CHECK(tool("pde --set dt=0.3").status == 3);
}

TEST_CASE("tool: compare") {
  const auto zero = tool("compare --format json");
  CHECK(zero.status == 0);
  const auto doc = Json::parse(zero.out);
  CHECK(doc["pass"] == true);
  CHECK(doc["rows"].size() == 2);
  CHECK(doc["rows"][0]["mehler_value"].is_number());

  const auto gc = tool("compare --set 'potential=gauss_cos(1,1)' --format json");
  CHECK(gc.status == 0);
  CHECK(Json::parse(gc.out)["rows"][1]["mehler_value"].is_null());

  const auto tiny = tool("compare --set n_paths=10");
  CHECK(tiny.status == 0);
  CHECK(tiny.out.find(",nan,") == std::string::npos);

  // a too-coarse splitting is caught
  CHECK(tool("compare --set 'potential=gauss_cos(1,1)' --set n=1 --set n_paths=2000").status == 1);
}

TEST_CASE("tool: converge") {
  const auto gc = tool("converge --set 'potential=gauss_cos(1,1)' --format json");
  REQUIRE(gc.status == 0);
  const auto doc = Json::parse(gc.out);
  double order = std::nan("");
  std::size_t levels = 0;
  for (const auto& row : doc["rows"]) {
    if (row["kind"] == "limit") order = row["order"].get<double>();
    if (row["kind"] == "level") ++levels;
  }
  CHECK(levels == 14);
  CHECK(order >= 0.7);
  CHECK(order <= 1.3);

  const auto single = tool("converge --set p_max=1 --set x=0");
  REQUIRE(single.status == 0);
  CHECK(count_lines(single.out) == 2);

  const auto flat = tool("converge --set p_max=4 --format json");
  REQUIRE(flat.status == 0);
  for (const auto& row : Json::parse(flat.out)["rows"]) {
    if (row["kind"] == "level" && row["diff"].is_number()) CHECK(std::abs(row["diff"].get<double>()) < 1e-6);
  }

  const auto inner = tool("converge --set p_max=3 --set x=0 --set intermediate=true");
  REQUIRE(inner.status == 0);
  CHECK(inner.out.find(",dyadic,") != std::string::npos);
}
