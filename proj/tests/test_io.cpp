#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "mcf/commands.hpp"
#include "mcf/config.hpp"
#include "mcf/csv.hpp"
#include "mcf/errors.hpp"

namespace fs = std::filesystem;
using namespace mcf;
using nlohmann::json;

namespace {

fs::path scratch() {
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  auto dir = fs::temp_directory_path() /
             (std::string("mcf_io_") + info->test_suite_name() + "_" + info->name());
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

void write_text(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

RunConfig small_run(double t_end) {
  RunConfig c;
  c.solver.n_nodes = 51;
  c.solver.t_end = t_end;
  c.solver.snapshot_times = {0.25, 0.5};
  return c;
}

}  // namespace

TEST(Config, EmptyDocumentGivesDefaults) {
  const auto c = parse_config("{}");
  EXPECT_EQ(c.solver.dim, 2);
  EXPECT_EQ(c.solver.form, Form::V);
  EXPECT_EQ(c.verify.checks, known_checks());
  EXPECT_EQ(c.verify.barriers.M0, 1.0);
  EXPECT_EQ(c.thresholds.epsilon_max, AsymptoticsThresholds{}.epsilon_max);
}

TEST(Config, UnknownKeyReportsLine) {
  const auto msg = config_error("{\n  \"solver\": {\n    \"dim\": 3,\n    \"nodes\": 5\n  }\n}");
  EXPECT_NE(msg.find("line 4"), std::string::npos) << msg;
  EXPECT_NE(msg.find("nodes"), std::string::npos) << msg;
  EXPECT_NE(config_error("{\"solvr\": {}}").find("solvr"), std::string::npos);
}

TEST(Config, MalformedJsonReportsLine) {
  const auto msg = config_error("{\n  \"solver\": {\n    \"dim\": ,\n  }\n}");
  EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
}

TEST(Config, TypeAndValueErrors) {
  EXPECT_FALSE(config_error(R"({"solver": {"dim": "two"}})").empty());
  EXPECT_FALSE(config_error(R"({"solver": {"dim": 0}})").empty());
  EXPECT_FALSE(config_error(R"({"solver": {"form": "w"}})").empty());
  EXPECT_FALSE(config_error(R"({"solver": {"snapshot_times": [1], "snapshot_interval": 1}})").empty());
  EXPECT_FALSE(config_error(R"({"solver": {"boundary": {"kind": "neumann"}}})").empty());
  EXPECT_FALSE(config_error(R"({"soliton": {"c": 1, "k": 1}})").empty());
  EXPECT_FALSE(config_error(R"({"verify": {"checks": ["barriers", "bogus"]}})").empty());
  EXPECT_FALSE(config_error(R"({"thresholds": {"epsilon_max": -1}})").empty());
  EXPECT_FALSE(config_error("[1, 2]").empty());
}

TEST(Config, SuperUSeedBelowOneRejected) {
  const auto msg = config_error(R"({"verify": {"barriers": {"M0": 0.5}}})");
  EXPECT_NE(msg.find("M0"), std::string::npos) << msg;
}

TEST(Config, SnapshotIntervalExpands) {
  const auto c = parse_config(R"({"solver": {"t_end": 1, "snapshot_interval": 0.1}})");
  ASSERT_EQ(c.solver.snapshot_times.size(), 10u);
  EXPECT_EQ(c.solver.snapshot_times[2], 0.3);
  EXPECT_EQ(c.solver.snapshot_times.back(), 1.0);
}

TEST(Config, EchoRoundTrips) {
  const auto c = parse_config(R"({
    "solver": {"dim": 3, "n_nodes": 101, "form": "u", "t_end": 2,
               "initial": {"kind": "table", "rows": [[0, 1], [0.5, 1.5], [1, 2]]},
               "boundary": {"kind": "neumann", "slope": 0.5}},
    "soliton": {"k": 1.5, "k_list": [1, 2]},
    "verify": {"checks": ["sandwich"], "sandwich_w0": "r"},
    "thresholds": {"burn_in": 2}})");
  const auto echo = to_json(c);
  EXPECT_EQ(to_json(parse_config(echo.dump())), echo);
  EXPECT_EQ(echo["solver"]["dim"], 3);
  EXPECT_EQ(echo["verify"]["checks"], json::array({"sandwich"}));
}

TEST(Config, LoadMissingFile) {
  EXPECT_THROW(load_config("/nonexistent/cfg.json"), ConfigError);
}

TEST(Csv, SeventeenDigits) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_time(0.1), "0.1");
  EXPECT_EQ(format_time(30.0), "30");
}

TEST(Csv, RoundTripIsExact) {
  const auto dir = scratch();
  CsvTable t{{"a", "b"}, {{0.1, 1.0 / 3.0, 1e-300}, {-2.5e300, std::numbers::pi, 0.0}}};
  write_csv(dir / "t.csv", t);
  const auto back = read_csv(dir / "t.csv");
  EXPECT_EQ(back.header, t.header);
  EXPECT_EQ(back.columns, t.columns);
  EXPECT_EQ(back.column("b")[1], std::numbers::pi);
  EXPECT_THROW(back.column("c"), ConfigError);
}

TEST(Csv, MalformedInputRejected) {
  const auto dir = scratch();
  write_text(dir / "ragged.csv", "a,b\n1,2\n3\n");
  write_text(dir / "junk.csv", "a\nfoo\n");
  EXPECT_THROW(read_csv(dir / "ragged.csv"), ConfigError);
  EXPECT_THROW(read_csv(dir / "junk.csv"), ConfigError);
  EXPECT_THROW(read_csv(dir / "missing.csv"), ConfigError);
  CsvTable bad{{"a", "b"}, {{1.0}, {}}};
  EXPECT_THROW(write_csv(dir / "bad.csv", bad), std::invalid_argument);
}

TEST(Commands, DefaultOutputDirFollowsEnvironment) {
  ::setenv("MCF_OUTPUT_DIR", "/tmp/somewhere", 1);
  EXPECT_EQ(default_output_dir("solve"), fs::path("/tmp/somewhere/solve"));
  ::unsetenv("MCF_OUTPUT_DIR");
  EXPECT_EQ(default_output_dir("verify"), fs::path("mcf_out/verify"));
}

TEST(Commands, SolveWritesManifestAndFiles) {
  const auto dir = scratch();
  std::ostringstream log;
  ASSERT_EQ(cmd_solve(small_run(1.0), dir, log), exit_code::ok) << log.str();
  const auto m = read_json(dir / "manifest.json");
  EXPECT_EQ(m["command"], "solve");
  EXPECT_EQ(m["exit_code"], 0);
  for (const auto& f : m["files"]) EXPECT_TRUE(fs::exists(dir / f.get<std::string>())) << f;
  ASSERT_EQ(m["snapshots"].size(), 4u);
  for (const auto& s : m["snapshots"]) {
    const auto file = s["file"].get<std::string>();
    EXPECT_NE(file.find("_t" + format_time(s["t"].get<double>()) + "."), std::string::npos) << file;
  }
  EXPECT_EQ(read_csv(dir / "snapshots/v_t0.5.csv").header, (std::vector<std::string>{"r", "v"}));
}

TEST(Commands, ManifestEchoReproducesRun) {
  const auto a = scratch() / "a", b = a.parent_path() / "b";
  std::ostringstream log;
  ASSERT_EQ(cmd_solve(small_run(1.0), a, log), exit_code::ok);
  write_text(a.parent_path() / "echo.json", read_json(a / "manifest.json")["config"].dump());
  ASSERT_EQ(cmd_solve(a.parent_path() / "echo.json", b, log), exit_code::ok) << log.str();
  for (const auto& f : read_json(a / "manifest.json")["files"]) {
    EXPECT_EQ(slurp(a / f.get<std::string>()), slurp(b / f.get<std::string>())) << f;
  }
}

TEST(Commands, TrajectoryReloadsExactly) {
  const auto dir = scratch();
  std::ostringstream log;
  const auto cfg = small_run(1.0);
  ASSERT_EQ(cmd_solve(cfg, dir, log), exit_code::ok);
  const auto direct = run(cfg.solver);
  const auto loaded = load_trajectory(dir);
  ASSERT_EQ(loaded.snapshots.size(), direct.snapshots.size());
  for (std::size_t j = 0; j < direct.snapshots.size(); ++j) {
    EXPECT_EQ(loaded.snapshots[j].t(), direct.snapshots[j].t());
    const auto a = loaded.snapshots[j].field().values(), b = direct.snapshots[j].field().values();
    EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin(), b.end())) << j;
  }
  EXPECT_EQ(loaded.center_series.size(), direct.center_series.size());
  EXPECT_THROW(load_trajectory(dir / "snapshots"), ConfigError);
}

TEST(Commands, SolveConfigErrors) {
  const auto dir = scratch();
  std::ostringstream log;
  write_text(dir / "bad.json", R"({"solver": {"n_nodes": 1}})");
  EXPECT_EQ(cmd_solve(dir / "bad.json", dir / "out", log), exit_code::config);
  EXPECT_EQ(cmd_solve(dir / "none.json", dir / "out", log), exit_code::config);
  EXPECT_FALSE(fs::exists(dir / "out" / "manifest.json"));
}

TEST(Commands, AsymptoticsOnLongRun) {
  const auto dir = scratch();
  std::ostringstream log;
  RunConfig c;
  c.solver.n_nodes = 101;
  c.solver.t_end = 30.0;
  for (int k = 1; k < 60; ++k) c.solver.snapshot_times.push_back(k * 0.5);
  ASSERT_EQ(cmd_solve(c, dir / "run", log), exit_code::ok);
  EXPECT_EQ(cmd_asymptotics(dir / "run", std::nullopt, dir / "asym", log), exit_code::ok)
      << log.str();
  for (const char* f : {"epsilon.csv", "H.csv", "rate.csv", "profile_dev.csv", "report.json",
                        "manifest.json"}) {
    EXPECT_TRUE(fs::exists(dir / "asym" / f)) << f;
  }
  const auto rep = read_json(dir / "asym" / "report.json");
  EXPECT_NEAR(rep["mean_rate"].get<double>(), 1.0, 0.02);

  write_text(dir / "strict.json", R"({"thresholds": {"profile_deviation_max": 1e-30}})");
  std::ostringstream strict_log;
  EXPECT_EQ(cmd_asymptotics(dir / "run", dir / "strict.json", dir / "strict", strict_log),
            exit_code::threshold);
  EXPECT_NE(strict_log.str().find("profile"), std::string::npos) << strict_log.str();
}

TEST(Commands, AsymptoticsNeedsEnoughSnapshots) {
  const auto dir = scratch();
  std::ostringstream log;
  auto c = small_run(0.5);
  c.solver.snapshot_times.clear();
  ASSERT_EQ(cmd_solve(c, dir / "run", log), exit_code::ok);
  EXPECT_EQ(cmd_asymptotics(dir / "run", std::nullopt, dir / "asym", log), exit_code::config);
  EXPECT_EQ(cmd_asymptotics(dir / "nothing", std::nullopt, dir / "asym", log), exit_code::config);
}

TEST(Commands, CkTable) {
  const auto dir = scratch();
  std::ostringstream log;
  ASSERT_EQ(cmd_ck_table(2, {0.5, 1, 2, 4}, dir / "n2", log), exit_code::ok) << log.str();
  const auto t = read_csv(dir / "n2" / "ck_table.csv");
  ASSERT_EQ(t.rows(), 4u);
  for (std::size_t j = 1; j < 4; ++j) EXPECT_GT(t.column("c")[j], t.column("c")[j - 1]);
  ASSERT_EQ(cmd_ck_table(1, {1.0}, dir / "n1", log), exit_code::ok);
  EXPECT_NEAR(read_csv(dir / "n1" / "ck_table.csv").column("c")[0], std::numbers::pi / 4, 1e-9);
  EXPECT_EQ(cmd_ck_table(2, {}, dir / "e", log), exit_code::config);
  EXPECT_EQ(cmd_ck_table(2, {1, 1}, dir / "e", log), exit_code::config);
  EXPECT_EQ(cmd_ck_table(2, {-1}, dir / "e", log), exit_code::config);
  EXPECT_EQ(cmd_ck_table(0, {1}, dir / "e", log), exit_code::config);
}

TEST(Commands, Soliton) {
  const auto dir = scratch();
  std::ostringstream log;
  SolitonOptions k_opt;
  k_opt.k = 1.0;
  ASSERT_EQ(cmd_soliton(k_opt, dir / "k", log), exit_code::ok) << log.str();
  const auto entry = read_json(dir / "k" / "speed_slope.json");
  EXPECT_EQ(entry["k"], 1.0);
  EXPECT_GT(entry["c"].get<double>(), std::numbers::pi / 4);
  const auto prof = read_csv(dir / "k" / "profile.csv");
  EXPECT_NEAR(prof.column("phi_prime").back(), 1.0, 1e-8);

  SolitonOptions c_opt;
  c_opt.c = 0.1;
  ASSERT_EQ(cmd_soliton(c_opt, dir / "c", log), exit_code::ok);
  EXPECT_EQ(read_csv(dir / "c" / "profile.csv").column("r").front(), 0.0);

  SolitonOptions both = k_opt;
  both.c = 1.0;
  EXPECT_EQ(cmd_soliton(both, dir / "x", log), exit_code::config);
  EXPECT_EQ(cmd_soliton(SolitonOptions{}, dir / "x", log), exit_code::config);
  SolitonOptions blowup;  // phi' = tan(c r) for N = 1
  blowup.dim = 1;
  blowup.c = 2.0;
  EXPECT_EQ(cmd_soliton(blowup, dir / "x", log), exit_code::config);
}

TEST(Commands, VerifyBarriersOnly) {
  const auto dir = scratch();
  std::ostringstream log;
  RunConfig c;
  c.solver.n_nodes = 101;
  c.verify.checks = {"barriers"};
  ASSERT_EQ(cmd_verify(c, dir, log), exit_code::ok) << log.str();
  const auto rep = read_json(dir / "barriers.json");
  EXPECT_EQ(rep["status"], "PASS");
  EXPECT_EQ(rep["barriers"].size(), 4u);
  EXPECT_EQ(rep["super_w_rejected_past_t_plus"], true);
  EXPECT_EQ(read_json(dir / "manifest.json")["checks"]["barriers"], "PASS");
}

TEST(Commands, VerifyRejectsBadSeed) {
  const auto dir = scratch();
  std::ostringstream log;
  write_text(dir / "cfg.json", R"({"verify": {"barriers": {"M0": 0.5}}})");
  EXPECT_EQ(cmd_verify(dir / "cfg.json", dir / "out", log), exit_code::config);
  EXPECT_NE(log.str().find("M0"), std::string::npos) << log.str();
}
