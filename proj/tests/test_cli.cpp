#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "wfax/wfax.hpp"

namespace fs = std::filesystem;
using namespace wfax;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("wfax_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  int run(const std::string& args) const {
    const std::string cmd = std::string(WFAX_CLI) + " " + args + " >" + path("stdout") + " 2>" + path("stderr");
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string read(const std::string& name) const {
    std::ifstream in(path(name));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, GenerateExtractEvaluate) {
  ASSERT_EQ(run("gen-wfa --alphabet-size 2 --states 2 --seed 3 --out " + path("t.json")), 0);
  const Wfa target = load(read("t.json"));
  EXPECT_EQ(target.n_states(), 2u);

  ASSERT_EQ(run("extract --oracle wfa:" + path("t.json") + " --eq bfs --n 2000 --e 1e-7 --out " + path("a.json") +
                " --report " + path("r.json") + " --dump-table " + path("table.csv")),
            0)
      << read("stderr");
  const Wfa learned = load(read("a.json"));
  EXPECT_LE(learned.n_states(), 2u);
  EXPECT_TRUE(Json::parse(read("r.json"))["converged"].get<bool>());
  EXPECT_EQ(read("table.csv").rfind("access,", 0), 0u);

  ASSERT_EQ(run("eval --oracle wfa:" + path("t.json") + " --wfa " + path("a.json") + " --exhaustive-len 6 --out " +
                path("e.json")),
            0);
  EXPECT_LT(Json::parse(read("e.json"))["sup_error"].get<double>(), 1e-6);
}

TEST_F(Cli, DataEvalAndBench) {
  ASSERT_EQ(run("gen-wfa --alphabet-size 3 --states 3 --seed 1 --out " + path("t.json")), 0);
  ASSERT_EQ(run("gen-data --sampler block --alphabet-size 3 --count 200 --seed 2 --label " + path("t.json") +
                " --out " + path("d.jsonl")),
            0);
  const Dataset d = from_jsonl(read("d.jsonl"), Alphabet::letters(3));
  ASSERT_EQ(d.items.size(), 200u);
  for (const auto& item : d.items) EXPECT_TRUE(is_block_word(item.word));

  ASSERT_EQ(run("eval --oracle wfa:" + path("t.json") + " --wfa " + path("t.json") + " --data " + path("d.jsonl")), 0);
  EXPECT_EQ(Json::parse(read("stdout"))["mse"].get<double>(), 0.0);

  ASSERT_EQ(run("bench --oracle wfa:" + path("t.json") + " --wfa " + path("t.json") + " --data " + path("d.jsonl") +
                " --reps 2"),
            0);
  EXPECT_GT(Json::parse(read("stdout"))["speedup"].get<double>(), 0.0);
}

TEST_F(Cli, WparenDatasetAndDot) {
  ASSERT_EQ(run("gen-wparen --seed 5 --out-train " + path("train.jsonl") + " --out-test " + path("test.jsonl")), 0);
  EXPECT_EQ(from_jsonl(read("train.jsonl"), wparen_alphabet()).items.size(), 9000u);
  EXPECT_EQ(from_jsonl(read("test.jsonl"), wparen_alphabet()).items.size(), 1000u);

  std::ofstream(path("ex.json")) << save(example_wfa());
  ASSERT_EQ(run("export-dot --wfa " + path("ex.json") + " --threshold 3 --out " + path("ex.dot")), 0);
  const std::string dot = read("ex.dot");
  EXPECT_NE(dot.find("digraph"), std::string::npos);
  EXPECT_NE(dot.find("q2 -> q1"), std::string::npos);
}

TEST_F(Cli, RnnOracle) {
  std::ofstream(path("rnn.json")) << to_json(RnnWeights::zeros(2, 3), Alphabet::letters(2)).dump();
  ASSERT_EQ(run("extract --oracle rnn:" + path("rnn.json") + " --out " + path("a.json")), 0) << read("stderr");
  const Wfa a = load(read("a.json"));
  EXPECT_NEAR(a.weight({0, 1, 1}), 0.5, 1e-9);
}

TEST_F(Cli, ErrorsExitNonZero) {
  EXPECT_NE(run("extract --oracle nothing --out " + path("a.json")), 0);
  EXPECT_NE(read("stderr").find("error:"), std::string::npos);
  std::ofstream(path("bad.json")) << "{\"alphabet\":[\"a\"],\"alpha\":[1]}";
  EXPECT_NE(run("export-dot --wfa " + path("bad.json") + " --out " + path("x.dot")), 0);
  EXPECT_NE(read("stderr").find("beta"), std::string::npos);
  EXPECT_NE(run("extract --oracle wparen --eq dfs --out " + path("a.json")), 0);
  EXPECT_NE(run(""), 0);
}
