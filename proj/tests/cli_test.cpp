#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <gtest/gtest.h>
#include <json.hpp>

#include "frocc/data.hpp"
#include "frocc/serialize.hpp"
#include "run_cli.hpp"

namespace frocc {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using testing::run_cli;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("frocc_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& contents) const {
    std::ofstream(path(name)) << contents;
    return path(name);
  }

  std::string synth_moons(const std::string& name, int n, int seed) const {
    const auto r = run_cli("synth --gen moons --n " + std::to_string(n) + " --noise 0.1 --seed " +
                           std::to_string(seed) + " --out " + path(name));
    EXPECT_EQ(r.exit_code, 0);
    return path(name);
  }

  fs::path dir_;
};

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST_F(CliTest, TrainThenSelfScoreIsOne) {
  const std::string data = synth_moons("moons.csv", 400, 1);
  const std::string model = path("model.json");
  const auto train = run_cli("train --train " + data + " --header --label-column label --model " + model +
                             " -m 100 --epsilon 0.1 --kernel rbf --seed 3");
  ASSERT_EQ(train.exit_code, 0) << train.out;
  const json report = json::parse(train.out);
  EXPECT_EQ(report.at("m"), 100);
  EXPECT_EQ(report.at("n_train"), 200);
  EXPECT_TRUE(report.contains("train_seconds"));
  EXPECT_GE(report.at("model_size").at("total").get<int>(), 200);
  ASSERT_TRUE(fs::exists(model));

  // Score only the positive training rows: write them unlabeled.
  Dataset pos = load_csv(data, {.has_header = true, .label_column = "label", .positive_label = "1"})
                    .select(Label::Positive);
  write_csv(pos, path("train_pos.csv"));
  const auto pred = run_cli("predict --test " + path("train_pos.csv") + " --header --model " + model);
  ASSERT_EQ(pred.exit_code, 0);
  const json scores = json::parse(pred.out).at("scores");
  ASSERT_EQ(scores.size(), 200u);
  for (const auto& s : scores) EXPECT_EQ(s.get<double>(), 1.0);
}

TEST_F(CliTest, ArgumentErrorsExitTwo) {
  const std::string data = synth_moons("moons.csv", 50, 1);
  EXPECT_EQ(run_cli("train --train " + data + " --header --model " + path("m.json") + " --epsilon 0").exit_code, 2);
  EXPECT_EQ(run_cli("train --train " + data + " --header --model " + path("m.json") + " -m 0").exit_code, 2);
  EXPECT_EQ(run_cli("train --train " + data + " --header --model " + path("m.json") + " --kernel cosine").exit_code, 2);
  EXPECT_EQ(run_cli("train --train " + data + " --header --model " + path("m.json") + " --threads zero").exit_code, 2);
  EXPECT_EQ(run_cli("train --bogus").exit_code, 2);
  EXPECT_EQ(run_cli("").exit_code, 2);
  EXPECT_EQ(run_cli("--help").exit_code, 0);
}

TEST_F(CliTest, IoErrorsExitFour) {
  EXPECT_EQ(run_cli("train --train " + path("missing.csv") + " --model " + path("m.json")).exit_code, 4);
  const std::string data = synth_moons("moons.csv", 50, 1);
  EXPECT_EQ(run_cli("train --train " + data + " --header --model " + path("no/such/dir/m.json")).exit_code, 4);
  EXPECT_EQ(run_cli("predict --test " + data + " --header --model " + path("missing.json")).exit_code, 4);
}

TEST_F(CliTest, DataErrorsExitThree) {
  const std::string ragged = write("ragged.csv", "1,2\n3\n");
  EXPECT_EQ(run_cli("train --train " + ragged + " --model " + path("m.json")).exit_code, 3);

  const std::string two_d = write("train2.csv", "0,0\n1,1\n0.5,0.2\n");
  const std::string three_d = write("test3.csv", "0,0,0,1\n1,1,1,0\n");
  ASSERT_EQ(run_cli("train --train " + two_d + " --model " + path("m.json") + " -m 5").exit_code, 0);
  EXPECT_EQ(run_cli("eval --test " + three_d + " --label-column 3 --model " + path("m.json")).exit_code, 3);

  const std::string single = write("single.csv", "0,0,1\n1,1,1\n");
  EXPECT_EQ(run_cli("eval --test " + single + " --label-column 2 --model " + path("m.json")).exit_code, 3);

  const std::string corrupt = write("corrupt.json", "{\"format_version\": 1");
  EXPECT_EQ(run_cli("predict --test " + two_d + " --model " + corrupt).exit_code, 3);
}

TEST_F(CliTest, SeparableToySetScoresPerfectly) {
  const std::string train = write("train.csv", "0,0,1\n0.1,0,1\n0,0.1,1\n0.1,0.1,1\n0.05,0.05,1\n9,9,0\n");
  const std::string test = write("test.csv", "0.02,0.03,1\n0.08,0.06,1\n5,5,0\n-4,6,0\n");
  const auto r = run_cli("eval --train " + train + " --test " + test + " --label-column 2 -m 50 --epsilon 0.1");
  ASSERT_EQ(r.exit_code, 0) << r.out;
  const json report = json::parse(r.out);
  EXPECT_EQ(report.at("roc_auc"), 1.0);
  EXPECT_EQ(report.at("n"), 2);
  EXPECT_EQ(report.at("precision_at_n"), 1.0);
  EXPECT_EQ(report.at("n_train"), 5);
}

TEST_F(CliTest, RepeatedRunsAreIdentical) {
  const std::string data = synth_moons("moons.csv", 300, 7);
  const std::string common = " --header --label-column label -m 40 --epsilon 0.1 --kernel rbf --seed 11";
  ASSERT_EQ(run_cli("train --train " + data + common + " --model " + path("a.json")).exit_code, 0);
  ASSERT_EQ(run_cli("train --train " + data + common + " --model " + path("b.json") + " --threads 4").exit_code, 0);
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));

  auto strip = [](json j) {
    j.erase("train_seconds");
    j.erase("test_seconds");
    return j;
  };
  const auto r1 = run_cli("eval --test " + data + " --header --label-column label --model " + path("a.json"));
  const auto r2 = run_cli("eval --test " + data + " --header --label-column label --model " + path("a.json"));
  ASSERT_EQ(r1.exit_code, 0);
  EXPECT_EQ(strip(json::parse(r1.out)), strip(json::parse(r2.out)));
}

TEST_F(CliTest, BenchReportsRepeatedTimings) {
  const auto r = run_cli("bench --gen gaussians --n 500 --k 3 --d 4 --reps 5 -m 20 --epsilon 0.1");
  ASSERT_EQ(r.exit_code, 0) << r.out;
  const json j = json::parse(r.out);
  EXPECT_EQ(j.at("train_seconds").at("runs").size(), 5u);
  EXPECT_EQ(j.at("test_seconds").at("runs").size(), 5u);
  EXPECT_GE(j.at("train_seconds").at("stdev").get<double>(), 0.0);
  EXPECT_TRUE(j.at("train_seconds").contains("median"));
}

TEST_F(CliTest, SynthWritesLabeledCsv) {
  const auto r = run_cli("synth --gen gaussians --n 120 --k 2 --d 3 --seed 4 --out " + path("g.csv"));
  ASSERT_EQ(r.exit_code, 0);
  const Dataset ds = load_csv(path("g.csv"), {.has_header = true, .label_column = "label", .positive_label = "1"});
  EXPECT_EQ(ds.size(), 120);
  EXPECT_EQ(ds.dim(), 3);
  EXPECT_EQ(run_cli("synth --gen spirals --out " + path("x.csv")).exit_code, 2);
}

}  // namespace
}  // namespace frocc
