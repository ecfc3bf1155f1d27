#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "pencil_lab/config.hpp"
#include "pencil_lab/errors.hpp"

using namespace pencil_lab;

namespace {

const std::string kData = TEST_DATA_DIR;

int run_cli(const std::string& args) {
  const std::string cmd = std::string(PENCIL_LAB_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "pencil_lab_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("config files parse into run configurations") {
  auto cfg = load_config(kData + "/quartic.toml");
  finalize(cfg);
  CHECK(cfg.problem.degree() == 4 / 2);
  CHECK(cfg.sizes == std::vector<int>{60, 90, 120});
  CHECK(cfg.words.size() == 2);

  const auto table = load_config(kData + "/schatten.toml");
  CHECK(table.schatten_n == 2);
  CHECK(table.schatten_m == 4);
  CHECK(table.problem.degree() == 2);

  auto custom = load_config(kData + "/custom_2d.toml");
  finalize(custom);
  CHECK(custom.problem.dimension() == 2);
  CHECK(custom.problem.degree() == 4);
  CHECK(custom.problem_name == "custom");
}

TEST_CASE("malformed and inconsistent configs are input errors") {
  CHECK_THROWS_AS(load_config(kData + "/corrupt.toml"), InputError);
  CHECK_THROWS_AS(load_config(kData + "/missing.toml"), InputError);
  CHECK_THROWS_AS(parse_config("[problem]\npreset = \"monomial:2\"\ncolour = 3\n"), InputError);
  CHECK_THROWS_AS(parse_config("[problem]\npreset = 7\n"), InputError);
  CHECK_THROWS_AS(parse_config("[problem]\npreset = \"monomial:2\"\n[sweep]\nsizes = [\"a\"]\n"), InputError);

  auto shrinking = parse_config("[problem]\npreset = \"monomial:2\"\n[sweep]\nsizes = [200, 100, 400]\n");
  CHECK_THROWS_AS(finalize(shrinking), InputError);
  auto single = parse_config("[problem]\npreset = \"monomial:2\"\n[sweep]\nsizes = [200]\n");
  CHECK_THROWS_AS(finalize(single), InputError);
  auto cube = parse_config("[problem]\npreset = \"radial:3:3\"\n");
  CHECK_THROWS_AS(finalize(cube), InputError);
  cube.slow = true;
  CHECK_NOTHROW(finalize(cube));
  auto huge = parse_config("[problem]\npreset = \"radial:2:2\"\n[sweep]\nsizes = [100, 150, 200]\n");
  CHECK_THROWS_AS(finalize(huge), InputError);
}

TEST_CASE("presets and size lists") {
  CHECK(shipped_presets().size() >= 10);
  for (const auto& p : shipped_presets()) CHECK_NOTHROW(preset_problem(p.name));
  CHECK(preset_problem("weighted:5:1").ell == 1);
  CHECK_THROWS_AS(preset_problem("weighted:5:5"), InputError);
  CHECK(parse_sizes("10, 20,30") == std::vector<int>{10, 20, 30});
  CHECK_THROWS_AS(parse_sizes("10,x"), InputError);
  CHECK(default_sizes(2) == std::vector<int>{24, 32, 40});
  CHECK(default_sizes(1, true) == std::vector<int>{50, 100, 200});
}

TEST_CASE("CLI exit codes") {
  CHECK(run_cli("schatten --n 1 --m 2 --variant B") == 0);
  CHECK(run_cli("criteria --preset monomial:2 --sizes 60,90,120") == 0);
  CHECK(run_cli("criteria --preset monomial:1 --sizes 60,90,120") == 2);
  CHECK(run_cli("pencil --preset monomial:1 --sizes 60,90,120") == 2);
  CHECK(run_cli("criteria --config " + kData + "/corrupt.toml") == 3);
  CHECK(run_cli("criteria --preset monomial:2 --sizes 90,60,120") == 3);
  CHECK(run_cli("traces --preset monomial:2 --word 'A Q'") == 3);
  CHECK(run_cli("schatten --n 4 --m 2") == 3);
  CHECK(run_cli("schatten --m 2") == 3);
  CHECK(run_cli("schatten --config " + kData + "/schatten.toml") == 0);
  CHECK(run_cli("no-such-command") == 3);
}

TEST_CASE("CLI reports are JSON with the documented fields") {
  const auto json_path = scratch("pencil.json");
  const auto csv_dir = scratch("csv");
  REQUIRE(run_cli("pencil --preset monomial:2 --sizes 60,90,120 --json " + json_path.string() +
                  " --csv-dir " + csv_dir.string()) == 0);
  std::ifstream is(json_path);
  const auto report = nlohmann::json::parse(is);
  CHECK(report.contains("timestamp"));
  REQUIRE(!report["eigenvalues"].empty());
  for (const char* key : {"lambda_re", "lambda_im", "residual", "size", "certified", "drift"}) {
    CHECK(report["eigenvalues"][0].contains(key));
  }
  CHECK(report["eigenfunction"]["grid"].size() == 201);
  CHECK(std::filesystem::exists(csv_dir / "eigenvalues.csv"));
  CHECK(std::filesystem::exists(csv_dir / "eigenfunction.csv"));

  const auto criteria_path = scratch("criteria.json");
  REQUIRE(run_cli("criteria --preset monomial:3 --sizes 60,90,120 --json " + criteria_path.string()) == 0);
  std::ifstream cs(criteria_path);
  const auto criteria = nlohmann::json::parse(cs);
  for (const char* key : {"criterion", "value", "error", "hypothesis_ok", "verdict", "warnings"}) {
    CHECK(criteria["criteria"][0].contains(key));
  }
}
