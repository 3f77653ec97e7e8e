#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef GASFLOW_BIN
#error "GASFLOW_BIN must point at the CLI executable"
#endif

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("gasflow_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out.good());
  out << text;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run(const std::string& args, const fs::path& dir) {
  const fs::path log = dir / "stdout.txt";
  const std::string cmd =
      std::string(GASFLOW_BIN) + " " + args + " > " + log.string() + " 2> " +
      (dir / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  RunResult res;
#ifdef _WIN32
  res.exit_code = status;
#else
  res.exit_code = WEXITSTATUS(status);
#endif
  std::ifstream in(log, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  res.out = ss.str();
  return res;
}

const char* kIdealConfig = R"({
  "gas": "ideal",
  "n": 3,
  "sigma0": 0.0,
  "intensity": 1.0,
  "calibration": {"c0": 2.5},
  "grid": {"r_start": 2.0, "r_end": 10.0, "points": 33, "spacing": "log"}
})";

}  // namespace

TEST_CASE("calibrate prints the flow constant") {
  const auto dir = scratch_dir("calibrate");
  write_file(dir / "cfg.json", R"({
    "gas": "ideal", "n": 3, "sigma0": 0.0, "intensity": 1.0,
    "calibration": {"rho_inf": 1.0}
  })");
  const auto res = run("calibrate --config " + (dir / "cfg.json").string(), dir);
  CHECK(res.exit_code == 0);
  CHECK(res.out == "2.5\n");
}

TEST_CASE("euler-profile emits a CSV and is byte-identical across runs") {
  const auto dir = scratch_dir("euler");
  write_file(dir / "cfg.json", kIdealConfig);
  const std::string base =
      "euler-profile --config " + (dir / "cfg.json").string();
  const auto a = run(base + " --branch higher --out " + (dir / "a").string(),
                     dir);
  const auto b = run(base + " --branch higher --out " + (dir / "b").string(),
                     dir);
  REQUIRE(a.exit_code == 0);
  REQUIRE(b.exit_code == 0);
  const std::string csv_a = read_file(dir / "a" / "euler_profile.csv");
  CHECK(csv_a == read_file(dir / "b" / "euler_profile.csv"));
  CHECK(csv_a.rfind("r,v,rho,T,p,U,phase", 0) == 0);

  SUBCASE("validate --input accepts the emitted profile") {
    const auto v = run("validate --config " + (dir / "cfg.json").string() +
                           " --input " + (dir / "a" / "euler_profile.csv").string(),
                       dir);
    CHECK(v.exit_code == 0);
  }
}

TEST_CASE("euler-profile below the existence radius exits 2 with diagnostics") {
  const auto dir = scratch_dir("fold");
  write_file(dir / "cfg.json", R"({
    "gas": "ideal", "n": 3, "sigma0": 0.0, "intensity": 1.0,
    "calibration": {"c0": 10.0},
    "grid": {"r_start": 0.1, "r_end": 1.0, "points": 9}
  })");
  const auto res = run("euler-profile --config " + (dir / "cfg.json").string() +
                           " --branch higher --out " + dir.string(),
                       dir);
  CHECK(res.exit_code == 2);
  CHECK(fs::exists(dir / "diagnostic.json"));
  const std::string diag = read_file(dir / "diagnostic.json");
  CHECK(diag.find("\"error\"") != std::string::npos);
}

TEST_CASE("phases on an ideal gas is a configuration error") {
  const auto dir = scratch_dir("phases_ideal");
  write_file(dir / "cfg.json", kIdealConfig);
  const auto res = run("phases --config " + (dir / "cfg.json").string() +
                           " --out " + dir.string(),
                       dir);
  CHECK(res.exit_code == 1);
}

TEST_CASE("phases on a van der Waals gas labels the profile") {
  const auto dir = scratch_dir("phases_vdw");
  // entropy constant c = exp(sigma0 / 4) = 0.5^{1/4}
  write_file(dir / "cfg.json", R"({
    "gas": "vdw", "n": 3, "sigma0": -0.6931471805599453, "intensity": 1.0,
    "calibration": {"c0": 5.0},
    "grid": {"r_start": 0.5, "r_end": 5.0, "points": 33, "spacing": "log"},
    "branch": "lower"
  })");
  const auto res = run("phases --config " + (dir / "cfg.json").string() +
                           " --out " + dir.string(),
                       dir);
  REQUIRE(res.exit_code == 0);
  std::ifstream in(dir / "phases.csv");
  std::string line;
  std::getline(in, line);  // header
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++rows;
    CHECK(line.substr(line.rfind(',') + 1) == "0.5");
  }
  CHECK(rows == 33);
}

TEST_CASE("malformed configs exit 1") {
  const auto dir = scratch_dir("badcfg");
  write_file(dir / "missing_intensity.json", R"({
    "gas": "ideal", "calibration": {"c0": 2.5}
  })");
  write_file(dir / "not_json.json", "{ this is not json");
  write_file(dir / "two_calibrations.json", R"({
    "gas": "ideal", "intensity": 1.0,
    "calibration": {"c0": 2.5, "rho_inf": 1.0}
  })");
  for (const char* name :
       {"missing_intensity.json", "not_json.json", "two_calibrations.json"}) {
    const auto res =
        run("calibrate --config " + (dir / name).string(), dir);
    CHECK(res.exit_code == 1);
  }
  const auto res = run("calibrate --config " + (dir / "absent.json").string(),
                       dir);
  CHECK(res.exit_code == 1);
}

TEST_CASE("ns-profile writes profile and summary, validate re-checks it") {
  const auto dir = scratch_dir("ns");
  write_file(dir / "cfg.json", R"({
    "gas": "ideal", "n": 3, "sigma0": 0.0, "intensity": 1.0,
    "calibration": {"c0": 3.0},
    "grid": {"r_start": 1.2, "r_end": 4.0, "points": 2},
    "viscosity": {"eta": 0.0, "zeta": 0.05, "bc_left": "lower",
                  "bc_right": "higher", "nodes": 401}
  })");
  const auto res = run("ns-profile --config " + (dir / "cfg.json").string() +
                           " --out " + dir.string(),
                       dir);
  REQUIRE(res.exit_code == 0);
  REQUIRE(fs::exists(dir / "ns_profile.csv"));
  REQUIRE(fs::exists(dir / "ns_summary.json"));
  const std::string summary = read_file(dir / "ns_summary.json");
  for (const char* key :
       {"\"mu\"", "\"r_step\"", "\"step_width\"", "\"residual_norm\"",
        "\"newton_iters\""})
    CHECK(summary.find(key) != std::string::npos);

  const auto v = run("validate --config " + (dir / "cfg.json").string() +
                         " --input " + (dir / "ns_profile.csv").string(),
                     dir);
  CHECK(v.exit_code == 0);

  SUBCASE("mu sweep emits indexed outputs") {
    const auto sweep = run(
        "ns-profile --config " + (dir / "cfg.json").string() +
            " --mu-sweep 0.05,0.025 --out " + (dir / "sweep").string(),
        dir);
    REQUIRE(sweep.exit_code == 0);
    CHECK(fs::exists(dir / "sweep" / "ns_profile_0.csv"));
    CHECK(fs::exists(dir / "sweep" / "ns_summary_1.json"));
  }
}

TEST_CASE("expand reports a passing order fit") {
  const auto dir = scratch_dir("expand");
  write_file(dir / "cfg.json", R"({
    "gas": "ideal", "n": 3, "sigma0": 0.0, "intensity": 100.0,
    "calibration": {"c0": 1.0},
    "grid": {"r_start": 0.7, "r_end": 1.4, "points": 3},
    "viscosity": {"eta": 0.0, "zeta": 1.0},
    "expansion": {"type": "singular", "regime": "large",
                  "constants": {"c1": 1.0, "c2": 1.0, "c3": 0.5, "c4": 0.25}}
  })");
  const auto res = run("expand --config " + (dir / "cfg.json").string() +
                           " --out " + dir.string(),
                       dir);
  REQUIRE(res.exit_code == 0);
  REQUIRE(fs::exists(dir / "expand_report.json"));
  const std::string report = read_file(dir / "expand_report.json");
  CHECK(report.find("\"pass\": true") != std::string::npos);
  CHECK(report.find("\"regime\": \"large\"") != std::string::npos);
  CHECK(fs::exists(dir / "expand_series.csv"));

  SUBCASE("regular series fit also passes") {
    write_file(dir / "reg.json", R"({
      "gas": "ideal", "n": 3, "sigma0": 0.0, "intensity": 0.01,
      "calibration": {"c0": 1.0},
      "grid": {"r_start": 1.0, "r_end": 2.0, "points": 3},
      "viscosity": {"eta": 0.0, "zeta": 1.0},
      "expansion": {"type": "regular", "order": 2,
                    "constants": {"f0": 2.5}}
    })");
    const auto reg = run("expand --config " + (dir / "reg.json").string() +
                             " --out " + (dir / "reg").string(),
                         dir);
    CHECK(reg.exit_code == 0);
    CHECK(read_file(dir / "reg" / "expand_report.json")
              .find("\"pass\": true") != std::string::npos);
  }
}

TEST_CASE("validate runs the built-in invariant suite") {
  const auto dir = scratch_dir("validate");
  write_file(dir / "cfg.json", kIdealConfig);
  const auto res =
      run("validate --config " + (dir / "cfg.json").string(), dir);
  CHECK(res.exit_code == 0);
  CHECK(res.out.find("FAIL") == std::string::npos);
}
