#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gymnav/cli.hpp"
#include "gymnav/harness.hpp"

namespace gymnav {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(const std::vector<std::string>& args, const Registry& reg = Registry::builtin()) {
  std::ostringstream out, err;
  const int code = cli::run(args, reg, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t count_lines(const std::string& s) { return std::count(s.begin(), s.end(), '\n'); }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() /
          ("gymnav_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir);
  }
  void TearDown() override { fs::remove_all(dir); }
  fs::path dir;
};

TEST_F(CliTest, ListEnvsIsSorted) {
  const auto r = invoke({"list-envs"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(count_lines(r.out), 4u);
  EXPECT_EQ(r.out.rfind("Circuit2TurtlebotLidar-v0", 0), 0u);
  EXPECT_NE(r.out.find("maze"), std::string::npos);
  EXPECT_EQ(invoke({"list-envs"}).out, r.out);
}

TEST_F(CliTest, ListEnvsWithEmptyRegistry) {
  const auto r = invoke({"list-envs"}, Registry{});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
}

TEST_F(CliTest, TrainWritesArtifactsReproducibly) {
  const std::vector<std::string> base = {"train", "--env", "Circuit2TurtlebotLidar-v0", "--algo",
                                         "qlearning", "--seed", "7", "--episodes", "400"};
  auto with_out = [&](const fs::path& out) {
    auto args = base;
    args.insert(args.end(), {"--out", out.string()});
    return args;
  };
  ASSERT_EQ(invoke(with_out(dir / "r1")).code, 0);
  ASSERT_EQ(invoke(with_out(dir / "r2")).code, 0);
  for (const char* f : {"run.csv", "intervals.csv", "curve.svg", "qtable.txt"}) {
    ASSERT_TRUE(fs::exists(dir / "r1" / f)) << f;
    EXPECT_EQ(slurp(dir / "r1" / f), slurp(dir / "r2" / f)) << f;
  }
  EXPECT_EQ(count_lines(slurp(dir / "r1" / "run.csv")), 401u);
  EXPECT_EQ(count_lines(slurp(dir / "r1" / "intervals.csv")), 3u);
  const auto q = QTable::load(dir / "r1" / "qtable.txt");
  EXPECT_GT(q.size(), 0u);
}

TEST_F(CliTest, TrainDefaultEpisodesGiveFifteenIntervals) {
  const auto r = invoke({"train", "--env", "RoundTurtlebotLidar-v0", "--algo", "sarsa", "--seed",
                         "1", "--out", (dir / "full").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto text = slurp(dir / "full" / "intervals.csv");
  EXPECT_EQ(count_lines(text), 16u);  // header + 15 rows
  EXPECT_EQ(text.rfind("interval_start,interval_end,mean_reward\n", 0), 0u);
  EXPECT_EQ(count_lines(slurp(dir / "full" / "run.csv")), 3001u);
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  const auto out = (dir / "x").string();
  EXPECT_EQ(invoke({"train", "--env", "Circuit2TurtlebotLidar-v0", "--algo", "dqn", "--out", out}).code, 2);
  EXPECT_EQ(invoke({"train", "--env", "Nope-v0", "--algo", "sarsa", "--out", out}).code, 2);
  EXPECT_EQ(invoke({"train", "--env", "Circuit2TurtlebotLidar-v0", "--algo", "sarsa", "--episodes", "0", "--out", out}).code, 2);
  EXPECT_EQ(invoke({"train", "--env", "Circuit2TurtlebotLidar-v0", "--algo", "sarsa", "--gamma", "1", "--out", out}).code, 2);
  EXPECT_EQ(invoke({"train", "--env", "Circuit2TurtlebotLidar-v0", "--algo", "sarsa", "--bogus", "--out", out}).code, 2);
  EXPECT_EQ(invoke({"train", "--env", "Circuit2TurtlebotLidar-v0", "--algo", "sarsa", "--episodes", "ten", "--out", out}).code, 2);
  EXPECT_EQ(invoke({"train", "--algo", "sarsa", "--out", out}).code, 2);
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"fly"}).code, 2);
  EXPECT_EQ(invoke({"render", "--env", "Nope-v0", "--out", out}).code, 2);
  EXPECT_FALSE(fs::exists(dir / "x" / "run.csv"));
}

TEST_F(CliTest, UnwritableOutputExitsOne) {
  fs::create_directories(dir);
  std::ofstream(dir / "file") << "not a directory";
  const auto r = invoke({"train", "--env", "Circuit2TurtlebotLidar-v0", "--algo", "sarsa",
                         "--episodes", "2", "--out", (dir / "file" / "sub").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, BenchmarkWithOneSeedJoinsSingleRunTables) {
  const auto r = invoke({"benchmark", "--env", "Circuit2TurtlebotLidar-v0", "--episodes", "400",
                         "--seeds", "1", "--seed", "3", "--out", (dir / "b").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("Learning onset"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "b" / "benchmark.svg"));
  EXPECT_TRUE(fs::exists(dir / "b" / "qlearning_seed3.csv"));
  EXPECT_TRUE(fs::exists(dir / "b" / "sarsa_seed3.csv"));

  const Registry reg = Registry::builtin();
  const auto q = train(reg, "Circuit2TurtlebotLidar-v0", Algorithm::QLearning, {}, 400, 1500, 3);
  const auto s = train(reg, "Circuit2TurtlebotLidar-v0", Algorithm::Sarsa, {}, 400, 1500, 3);
  EXPECT_EQ(slurp(dir / "b" / "benchmark.csv"),
            intervals_table_csv({"qlearning", "sarsa"},
                                {interval_averages(q.log, 200), interval_averages(s.log, 200)}));
  EXPECT_EQ(slurp(dir / "b" / "qlearning_seed3.csv"), run_csv(q.log));
}

TEST_F(CliTest, BenchmarkRunsEveryAlgorithmSeedPair) {
  const auto r = invoke({"benchmark", "--env", "RoundTurtlebotLidar-v0", "--episodes", "50",
                         "--seeds", "5", "--jobs", "2", "--out", (dir / "b").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  int runs = 0;
  for (const auto& e : fs::directory_iterator(dir / "b")) {
    const auto name = e.path().filename().string();
    if (name.find("_seed") != std::string::npos && e.path().extension() == ".csv") ++runs;
  }
  EXPECT_EQ(runs, 10);
  EXPECT_EQ(count_lines(slurp(dir / "b" / "benchmark.csv")), 2u);
}

TEST_F(CliTest, RenderWorldWithAndWithoutRollout) {
  const auto plain = dir / "round.svg";
  ASSERT_EQ(invoke({"render", "--env", "RoundTurtlebotLidar-v0", "--out", plain.string()}).code, 0);
  const auto svg = slurp(plain);
  EXPECT_NE(svg.find("<title>round</title>"), std::string::npos);
  EXPECT_EQ(svg.find("class=\"trajectory\""), std::string::npos);

  fs::create_directories(dir);
  std::ofstream(dir / "zero.txt") << "";
  std::vector<std::string> args = {"render", "--env", "RoundTurtlebotLidar-v0", "--qtable",
                                   (dir / "zero.txt").string(), "--seed", "4", "--out"};
  auto a = args, b = args;
  a.push_back((dir / "a.svg").string());
  b.push_back((dir / "b.svg").string());
  ASSERT_EQ(invoke(a).code, 0);
  ASSERT_EQ(invoke(b).code, 0);
  EXPECT_NE(slurp(dir / "a.svg").find("class=\"trajectory\""), std::string::npos);
  EXPECT_EQ(slurp(dir / "a.svg"), slurp(dir / "b.svg"));

  std::ofstream(dir / "bad.txt") << "00000 Sideways 3\n";
  args.back() = "--out";
  auto bad = std::vector<std::string>{"render", "--env", "RoundTurtlebotLidar-v0", "--qtable",
                                      (dir / "bad.txt").string(), "--out", (dir / "c.svg").string()};
  EXPECT_EQ(invoke(bad).code, 1);
}

}  // namespace
}  // namespace gymnav
