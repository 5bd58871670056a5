#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "shapeopt/errors.hpp"
#include "shapeopt/run_config.hpp"

#ifndef SHAPEOPT_CLI_PATH
#error "SHAPEOPT_CLI_PATH must point at the CLI binary"
#endif

namespace fs = std::filesystem;
using namespace shapeopt;

namespace {

const std::string kSmallConfig = R"(# tiny Re=1 case for CLI tests
[mesh]
n = 48
n_rings = 12
r_far = 8.0
stretch = 1.1
radius = 1.0
[flow]
mu = 2.0
u_inf = 1.0
rho = 1.0
[optimizer]
method = compare
gamma = 1.0
max_iters = 2
eta = 2.0
eps_d = 1.0
[output]
dir = OUTDIR
)";

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("shapeopt_cli_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

fs::path write_config(const TempDir& dir, std::string text) {
  const std::string out = (dir.path / "out").string();
  const std::string key = "OUTDIR";
  if (const auto pos = text.find(key); pos != std::string::npos)
    text.replace(pos, key.size(), out);
  const fs::path cfg = dir.path / "run.ini";
  std::ofstream(cfg) << text;
  return cfg;
}

int run_cli(const std::string& args) {
  const std::string cmd =
      std::string(SHAPEOPT_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::vector<std::string> read_lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  return lines;
}

}  // namespace

TEST_CASE("config parse-serialize-parse round-trips") {
  RunConfig a = parse_config(kSmallConfig);
  RunConfig b = parse_config(serialize_config(a));
  CHECK(serialize_config(a) == serialize_config(b));
  CHECK(config_hash(a) == config_hash(b));
  CHECK(b.n == 48);
  CHECK(b.mu == 2.0);
  CHECK(b.method == "compare");
}

TEST_CASE("unknown keys and sections are rejected with line numbers") {
  CHECK_THROWS_AS(parse_config("[mesh]\nbogus_key = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[nonsense]\nn = 4\n"), ConfigError);
  try {
    parse_config("[mesh]\nn = 48\nbogus_key = 1\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("3") != std::string::npos);
  }
}

TEST_CASE("invalid physical parameters fail validation") {
  CHECK_THROWS_AS(parse_config("[flow]\nmu = -1.0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[flow]\nmu = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[optimizer]\ngamma = -2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[mesh]\nn = 0\n"), ConfigError);
}

TEST_CASE("malformed config lines exit with status 2") {
  TempDir dir;
  const fs::path cfg = write_config(dir, "[mesh\nn = 48\n");
  CHECK(run_cli("solve --config " + cfg.string()) == 2);
  const fs::path cfg2 = write_config(dir, "[flow]\nmu -1\n");
  CHECK(run_cli("solve --config " + cfg2.string()) == 2);
}

TEST_CASE("solve on a valid config exits 0 and reports positive drag") {
  TempDir dir;
  const fs::path cfg = write_config(dir, kSmallConfig);
  const std::string out = (dir.path / "cli_out.txt").string();
  const std::string cmd = std::string(SHAPEOPT_CLI_PATH) + " solve --config " +
                          cfg.string() + " > " + out + " 2>&1";
  REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  const auto pos = text.find("drag = ");
  REQUIRE(pos != std::string::npos);
  CHECK(std::stod(text.substr(pos + 7)) > 0.0);
  CHECK(fs::exists(dir.path / "out" / "flow.csv"));
  CHECK(fs::exists(dir.path / "out" / "adjoint.csv"));
  CHECK(fs::exists(dir.path / "out" / "gradient.csv"));
}

TEST_CASE("all emitted CSVs carry the config-hash comment and a header") {
  TempDir dir;
  const fs::path cfg = write_config(dir, kSmallConfig);
  REQUIRE(run_cli("solve --config " + cfg.string()) == 0);
  for (const char* name : {"flow.csv", "adjoint.csv", "gradient.csv"}) {
    const auto lines = read_lines(dir.path / "out" / name);
    REQUIRE(lines.size() >= 2);
    CHECK(lines[0].rfind("# config ", 0) == 0);
    CHECK(lines[1].find(',') != std::string::npos);
  }
}

TEST_CASE("compare mode writes matched side-by-side histories") {
  TempDir dir;
  const fs::path cfg = write_config(dir, kSmallConfig);
  REQUIRE(run_cli("optimize --config " + cfg.string()) == 0);
  const auto local = read_lines(dir.path / "out" / "history_local.csv");
  const auto global = read_lines(dir.path / "out" / "history_global.csv");
  REQUIRE(local.size() >= 3);
  REQUIRE(global.size() >= 3);
  // row layout: iter,drag,volume,grad_inf_norm,step_inf_norm,method
  auto field = [](const std::string& line, int idx) {
    std::stringstream ss(line);
    std::string tok;
    for (int i = 0; i <= idx; ++i) std::getline(ss, tok, ',');
    return tok;
  };
  const double sl = std::stod(field(local[2], 4));
  const double sg = std::stod(field(global[2], 4));
  CHECK(std::abs(sl - sg) <= 1e-12 * std::max(sl, sg));
  CHECK(field(local[2], 5) == "local");
  CHECK(field(global[2], 5) == "global");
}

TEST_CASE("optimize with max_iters 0 logs a single record") {
  TempDir dir;
  std::string text = kSmallConfig;
  const auto pos = text.find("max_iters = 2");
  text.replace(pos, 13, "max_iters = 0");
  const fs::path cfg = write_config(dir, text);
  REQUIRE(run_cli("optimize --config " + cfg.string()) == 0);
  const auto local = read_lines(dir.path / "out" / "history_local.csv");
  CHECK(local.size() == 3);  // hash comment + header + one record
}
