#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "subheat/cli.hpp"
#include "subheat/config.hpp"
#include "subheat/io.hpp"

using namespace subheat;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "subheat_tests";
  fs::create_directories(dir);
  return dir;
}

fs::path write_file(const std::string& name, const std::string& text) {
  const fs::path path = scratch_dir() / name;
  std::ofstream out(path);
  out << text;
  return path;
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

constexpr const char* kQuickRun =
    "scenario = custom\n"
    "grid_extents = 9,9\n"
    "grid_spacing = 0.125\n"
    "t_end = 0.05\n"
    "trace_stride = 10\n"
    "snapshot_stride = 50\n";

}  // namespace

TEST_CASE("scenario defaults cover every published id") {
  const auto& ids = known_scenarios();
  CHECK(ids.size() == 7);
  for (const std::string& id : ids) CHECK(default_config(id).scenario == id);
  CHECK_THROWS_AS(default_config("unheard-of"), ConfigError);

  const ExperimentConfig damped = default_config("boundedness-3.2i");
  CHECK(damped.alpha == -1.0);
  CHECK(damped.beta == 1.0);
  CHECK(damped.q_list == std::vector<double>{2.0});
  CHECK(damped.r_list == std::vector<double>{1.5});
  CHECK(damped.t_end == 5.0);
  CHECK(damped.grid_extents == std::vector<int>{33, 33});

  const ExperimentConfig profile = default_config("blowup-3.3");
  CHECK(profile.alpha == 1.0);
  CHECK(profile.beta == -1.0);
  CHECK(profile.grid_lower == std::vector<double>{-1.25, -1.25});
  CHECK(profile.grid_spacing == doctest::Approx(0.078125));

  const ExperimentConfig energy = default_config("blowup-3.4");
  CHECK(energy.r_list == std::vector<double>{3.0});
  CHECK(energy.ladder == std::vector<int>{1, 2, 4, 8});
}

TEST_CASE("config text overrides scenario defaults in file order") {
  const ExperimentConfig cfg = parse_config_text(
      "alpha = -2.5\n"
      "scenario = boundedness-3.2i\n"
      "# a comment line\n"
      "\n"
      "q_list = 2.25\n");
  CHECK(cfg.scenario == "boundedness-3.2i");
  CHECK(cfg.alpha == -2.5);          // kept even though it precedes the id
  CHECK(cfg.beta == 1.0);            // untouched default
  CHECK(cfg.q_list == std::vector<double>{2.25});

  const ExperimentConfig cleared = parse_config_text(
      "scenario = boundedness-3.5\n"
      "s_list =\n");
  CHECK(cleared.s_list.empty());
}

TEST_CASE("config parser names the offending key or value") {
  CHECK_THROWS_WITH_AS(parse_config_text("bogus_key = 1\n"),
                       doctest::Contains("bogus_key"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("alpha = xyz\n"),
                       doctest::Contains("alpha"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("no equals sign here\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("q_list = 1,,2\n"), ConfigError);
}

TEST_CASE("group descriptions parse or fail loudly") {
  ExperimentConfig cfg;
  cfg.group = "euclidean:3";
  CHECK(cfg.make_group().first_stratum_dimension == 3);
  cfg.group = "heisenberg";
  CHECK(cfg.make_group().total_dimension == 3);
  cfg.group = "euclidean:0";
  CHECK_THROWS_AS(cfg.make_group(), ConfigError);
  cfg.group = "banana";
  CHECK_THROWS_AS(cfg.make_group(), ConfigError);
}

TEST_CASE("run command exit codes separate parse, invariant and assertion") {
  CHECK(run_command((scratch_dir() / "missing.cfg").string()) == 2);
  CHECK(run_command(write_file("broken.cfg", "what is this\n").string()) == 2);
  CHECK(run_command(
            write_file("badkey.cfg", std::string(kQuickRun) + "bogus = 1\n")
                .string()) == 2);
  // Structurally valid config, semantically impossible problem.
  CHECK(run_command(
            write_file("badp.cfg", std::string(kQuickRun) + "p = 0.5\n")
                .string()) == 3);
}

TEST_CASE("run command writes the documented outputs") {
  const fs::path out = scratch_dir() / "run_outputs";
  fs::remove_all(out);
  setenv("SUBHEAT_OUT_DIR", out.string().c_str(), 1);
  const int code = run_command(write_file("quick.cfg", kQuickRun).string());
  unsetenv("SUBHEAT_OUT_DIR");
  REQUIRE(code == 0);

  const fs::path dir = out / "custom";
  REQUIRE(fs::exists(dir / "trace.csv"));
  REQUIRE(fs::exists(dir / "slices.csv"));
  REQUIRE(fs::exists(dir / "summary.json"));

  const auto lines = read_lines(dir / "trace.csv");
  REQUIRE(lines.size() >= 3);
  CHECK(lines[0] == "t,sup_norm,energy_y,dt");
  double prev = -1.0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const double t = std::stod(lines[i]);
    CHECK(t > prev);
    prev = t;
  }

  std::ifstream in(dir / "summary.json");
  const auto summary = nlohmann::json::parse(in);
  CHECK(summary.at("scenario") == "custom");
  CHECK(summary.at("outcome") == "completed");
  CHECK(summary.at("passed") == true);
  CHECK(summary.contains("wall_seconds"));

  const auto slice_lines = read_lines(dir / "slices.csv");
  REQUIRE(!slice_lines.empty());
  CHECK(slice_lines[0] == "t,x,u");
  CHECK(slice_lines.size() > 9);  // at least one 9-node slice plus header
}

TEST_CASE("identical configs produce byte-identical summaries modulo timing") {
  const fs::path cfg = write_file("det.cfg", kQuickRun);
  const fs::path out1 = scratch_dir() / "det1";
  const fs::path out2 = scratch_dir() / "det2";
  for (const fs::path& out : {out1, out2}) {
    fs::remove_all(out);
    setenv("SUBHEAT_OUT_DIR", out.string().c_str(), 1);
    REQUIRE(run_command(cfg.string()) == 0);
  }
  unsetenv("SUBHEAT_OUT_DIR");

  auto load = [](const fs::path& dir) {
    std::ifstream in(dir / "custom" / "summary.json");
    auto j = nlohmann::ordered_json::parse(in);
    j.erase("wall_seconds");
    return j.dump();
  };
  CHECK(load(out1) == load(out2));
}

TEST_CASE("verification table isolates the genuine failure and the sabotage") {
  // A healthy build still has exactly one red row: the randomized inequality
  // sweep draws exponents below two, where the bound it tests is false.
  VerifyOptions quick;
  quick.samples = 40;
  quick.seed = 3;
  const std::vector<VerifyRow> rows = verify_rows(quick);
  std::vector<std::string> failing;
  for (const VerifyRow& row : rows)
    if (!row.passed) failing.push_back(row.name);
  REQUIRE(failing == std::vector<std::string>{"monotone-inequality-sweep"});
  CHECK(verify_command(quick) == 1);

  // Shrinking the certified constant must flip exactly the matching row.
  VerifyOptions broken = quick;
  broken.scale_k1 = 0.5;
  std::vector<std::string> sabotaged;
  for (const VerifyRow& row : verify_rows(broken))
    if (!row.passed) sabotaged.push_back(row.name);
  REQUIRE(sabotaged == std::vector<std::string>{"monotone-inequality-sweep",
                                                "barrier-v1-residual"});
}
