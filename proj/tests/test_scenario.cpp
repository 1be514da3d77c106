#include "levyreg/scenario.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace levyreg;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("levyreg_test_" + name);
  fs::remove_all(dir);
  return dir;
}

ScenarioConfig small_s1() {
  auto c = default_config("S1");
  c.replicas = 2000;
  c.seed = 77;
  return c;
}

}  // namespace

TEST(RunParallel, IndexOrderIndependentOfThreads) {
  auto work = [](std::int64_t i) { return ReplicaResult{static_cast<double>(i * i), 0.0, false, {}, {}}; };
  const auto one = run_parallel(100, 1, work);
  const auto many = run_parallel(100, 8, work);
  ASSERT_EQ(one.size(), 100u);
  for (std::size_t i = 0; i < one.size(); ++i) {
    EXPECT_EQ(one[i].terminal_x, many[i].terminal_x);
  }
}

TEST(RunParallel, FailuresAreIsolated) {
  auto work = [](std::int64_t i) {
    if (i % 10 == 3) {
      throw std::runtime_error("boom " + std::to_string(i));
    }
    return ReplicaResult{1.0, 2.0, false, {}, {}};
  };
  const auto rows = run_parallel(50, 4, work);
  int failed = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i % 10 == 3) {
      EXPECT_TRUE(rows[i].failed);
      EXPECT_TRUE(std::isnan(rows[i].terminal_x));
      EXPECT_EQ(rows[i].error, "boom " + std::to_string(i));
      ++failed;
    } else {
      EXPECT_FALSE(rows[i].failed);
    }
  }
  EXPECT_EQ(failed, 5);
}

TEST(ExecuteScenario, ThreadCountDoesNotChangeResults) {
  const auto c = small_s1();
  auto a = execute_scenario(c, 1);
  auto b = execute_scenario(c, 8);
  std::ostringstream sa;
  std::ostringstream sb;
  write_samples_csv(a.replicas, sa);
  write_samples_csv(b.replicas, sb);
  EXPECT_EQ(sa.str(), sb.str());
  a.summary.wall_time = b.summary.wall_time = 0.0;
  EXPECT_EQ(a.summary, b.summary);
}

TEST(ExecuteScenario, SameSeedSameOutputDifferentSeedDifferent) {
  auto c = small_s1();
  const auto a = execute_scenario(c, 2);
  const auto b = execute_scenario(c, 2);
  c.seed = 78;
  const auto d = execute_scenario(c, 2);
  int differ = 0;
  for (std::size_t i = 0; i < a.replicas.size(); ++i) {
    ASSERT_EQ(a.replicas[i].terminal_x, b.replicas[i].terminal_x);
    differ += a.replicas[i].terminal_x != d.replicas[i].terminal_x;
  }
  EXPECT_GT(differ, 100);
}

TEST(ExecuteScenario, RejectsBadInput) {
  auto c = small_s1();
  c.scenario = "S9";
  EXPECT_THROW(execute_scenario(c, 1), ConfigError);
  EXPECT_THROW(execute_scenario(small_s1(), 0), ConfigError);
}

TEST(ExecuteScenario, NumericFailuresAreCountedNotFatal) {
  // Drift x' = 40 x from 0 only leaves 0 after a jump; late jumps stay finite,
  // early ones overflow.
  auto c = default_config("S1");
  c.replicas = 1000;
  c.x0 = 0.0;
  c.horizon = 20.0;
  c.step = 0.05;
  c.measure.atoms = {{1.0, 0.05}};
  c.drift_field = {"linear", {{"slope", 40.0}}, std::nullopt};
  const auto out = execute_scenario(c, 2);
  EXPECT_GT(out.summary.failures, 0);
  EXPECT_LT(out.summary.failures, 1000);
  EXPECT_EQ(out.summary.failed_replicas.size(), static_cast<std::size_t>(out.summary.failures));
  EXPECT_TRUE(out.summary.diagnostics.contains("first_failure"));
  for (auto i : out.summary.failed_replicas) {
    EXPECT_TRUE(out.replicas[static_cast<std::size_t>(i)].failed);
  }
  EXPECT_NEAR(out.summary.failure_fraction(), out.summary.failures / 1000.0, 1e-15);
}

TEST(RunScenario, WritesArtifacts) {
  auto c = small_s1();
  const auto dir = scratch_dir("artifacts");
  c.output_dir = dir.string();
  const auto s = run_scenario(c, 2);
  for (const char* f : {"samples.csv", "summary.json", "plots/terminal_samples.gp"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  const auto samples = slurp(dir / "samples.csv");
  EXPECT_EQ(samples.rfind("replica,terminal_x,terminal_z,failed\n0,", 0), 0u);
  EXPECT_EQ(std::count(samples.begin(), samples.end(), '\n'), 2001);
  const auto j = nlohmann::json::parse(slurp(dir / "summary.json"));
  for (const char* key : {"scenario", "seed", "replicas", "failures", "diagnostics", "version", "wall_time"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j.get<RunSummary>(), s);
  fs::remove_all(dir);
}

TEST(RunScenario, SamplesFileIdenticalAcrossThreadCounts) {
  auto c = small_s1();
  const auto d1 = scratch_dir("t1");
  const auto d8 = scratch_dir("t8");
  c.output_dir = d1.string();
  run_scenario(c, 1);
  c.output_dir = d8.string();
  run_scenario(c, 8);
  EXPECT_EQ(slurp(d1 / "samples.csv"), slurp(d8 / "samples.csv"));
  auto j1 = nlohmann::json::parse(slurp(d1 / "summary.json"));
  auto j8 = nlohmann::json::parse(slurp(d8 / "summary.json"));
  j1.erase("wall_time");
  j8.erase("wall_time");
  EXPECT_EQ(j1, j8);
  fs::remove_all(d1);
  fs::remove_all(d8);
}

TEST(RunScenario, UnwritableDirectoryIsIoError) {
  auto c = small_s1();
  const auto dir = scratch_dir("blocked");
  fs::create_directories(dir);
  std::ofstream(dir / "file") << "x";
  c.output_dir = (dir / "file" / "sub").string();
  EXPECT_THROW(run_scenario(c, 1), IoError);
  fs::remove_all(dir);
}

TEST(Summary, JsonRoundTrip) {
  RunSummary s;
  s.scenario = "S4";
  s.seed = 9;
  s.replicas = 10;
  s.failures = 2;
  s.failed_replicas = {3, 7};
  s.wall_time = 1.25;
  s.diagnostics = {{"pass", true}, {"lattice_x", 0.5}};
  const nlohmann::json j = s;
  EXPECT_EQ(j.get<RunSummary>(), s);
  EXPECT_EQ(j.at("version"), kVersion);
  EXPECT_DOUBLE_EQ(s.failure_fraction(), 0.2);
}

TEST(ListScenarios, AllInOrderWithAnchors) {
  const auto text = list_scenarios();
  std::size_t pos = 0;
  for (int i = 1; i <= 7; ++i) {
    const auto at = text.find("S" + std::to_string(i) + "  ", pos);
    ASSERT_NE(at, std::string::npos) << i;
    pos = at + 1;
  }
  EXPECT_NE(text.find("[Proposition 3]"), std::string::npos);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 7);
}

TEST(Scenarios, SmallRunsPassQuickChecks) {
  // Pipelines that are cheap at reduced size.
  for (const char* id : {"S2", "S6"}) {
    auto c = default_config(id);
    c.replicas = 20;
    const auto out = execute_scenario(c, 2);
    EXPECT_EQ(out.summary.failures, 0) << id;
    EXPECT_TRUE(out.summary.diagnostics.at("pass").get<bool>()) << id << " " << out.summary.diagnostics.dump();
  }
}
