#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(BTQ_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  return WEXITSTATUS(rc);
}

fs::path write_config(const std::string& name, const std::string& body) {
  fs::path dir = fs::temp_directory_path() / "btq-cli-test";
  fs::create_directories(dir);
  fs::path p = dir / name;
  std::ofstream(p) << body;
  return p;
}

}  // namespace

TEST_CASE("list-checks and describe succeed") {
  CHECK(run_cli("list-checks") == 0);
  CHECK(run_cli("describe commutator") == 0);
  CHECK(run_cli("describe suite") == 0);
}

TEST_CASE("describe of an unknown check is a usage error") {
  CHECK(run_cli("describe bogus") == 2);
}

TEST_CASE("missing or malformed config is a config error") {
  CHECK(run_cli("run --config /nonexistent/none.json") == 2);
  fs::path bad = write_config("bad.json", "{ not json");
  CHECK(run_cli("run --config " + bad.string()) == 2);
}

TEST_CASE("unknown config keys are rejected") {
  fs::path p = write_config("unknown.json", R"({"checks": ["bergman"], "plist": [4]})");
  CHECK(run_cli("run --config " + p.string()) == 2);
  fs::path q = write_config("unknown2.json",
                            R"({"geometry": {"name": "bargmann", "a": 1.0, "b": 2.0}})");
  CHECK(run_cli("run --config " + q.string()) == 2);
}

TEST_CASE("unknown geometry name is a config error") {
  fs::path p = write_config("geom.json", R"({"geometry": {"name": "torus"}})");
  CHECK(run_cli("run --config " + p.string()) == 2);
}

TEST_CASE("starved truncation is a numerical failure") {
  fs::path p = write_config("trunc.json",
                            R"({"truncation": 2, "p_list": [64], "checks": ["space"]})");
  CHECK(run_cli("run --config " + p.string()) == 3);
}

TEST_CASE("a small run passes and writes its report") {
  fs::path cfg = write_config("small.json", R"({"checks": ["toeplitz"], "p_list": [4]})");
  fs::path out = fs::temp_directory_path() / "btq-cli-test" / "out";
  fs::remove_all(out);
  CHECK(run_cli("run --config " + cfg.string() + " --out " + out.string()) == 0);
  CHECK(fs::exists(out / "summary.json"));
  CHECK(fs::exists(out / "toeplitz.csv"));
}

TEST_CASE("--checks rejects unknown ids") {
  fs::path cfg = write_config("small2.json", R"({"p_list": [4]})");
  CHECK(run_cli("run --config " + cfg.string() + " --checks nosuch") == 2);
}
