#include "cli/run.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

#include "fixtures.hpp"

namespace depq::cli {
namespace {

namespace fs = std::filesystem;
using depq::testing::fixture;

struct Result {
  int status;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "depq");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int status = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

std::vector<std::string> listing(const fs::path& dir) {
  std::vector<std::string> names;
  if (!fs::exists(dir)) return names;
  for (const auto& e : fs::directory_iterator(dir)) names.push_back(e.path().filename().string());
  std::sort(names.begin(), names.end());
  return names;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("depq_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string out(const std::string& sub = "") const { return (dir_ / sub).string(); }
  fs::path dir_;
};

TEST_F(Cli, ProfileTable1) {
  const auto r = invoke({"profile", fixture("table1.csv").string(), "--max-lhs", "1", "--out", out()});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("12 Q-scores over 4 columns"), std::string::npos) << r.out;
  const auto q = nlohmann::json::parse(slurp(dir_ / "qscores.json"));
  EXPECT_EQ(q["entries"].size(), 12u);
  const auto f = nlohmann::json::parse(slurp(dir_ / "fds.json"));
  EXPECT_EQ(f["count"], 6);
  EXPECT_EQ(listing(dir_),
            (std::vector<std::string>{"fds.json", "fds.txt", "histogram.csv", "qscores.csv", "qscores.json"}));
}

TEST_F(Cli, ProfileFormatsSelectFiles) {
  const auto r = invoke({"profile", fixture("table1.csv").string(), "--format", "csv", "--out", out()});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(listing(dir_), (std::vector<std::string>{"fds.txt", "histogram.csv", "qscores.csv"}));
}

TEST_F(Cli, ProfileColumnsAndExclude) {
  auto r = invoke({"profile", fixture("table1.csv").string(), "--columns", "Gender,Pregnant", "--out", out()});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(slurp(dir_ / "qscores.json"))["entries"].size(), 2u);
  r = invoke({"profile", fixture("table1.csv").string(), "--exclude", "Gender", "--out", out("x")});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(slurp(dir_ / "x" / "qscores.json"))["entries"].size(), 6u);
}

TEST_F(Cli, ProfileErrors) {
  EXPECT_EQ(invoke({"profile", fixture("empty.csv").string(), "--out", out()}).status, 1);
  EXPECT_EQ(invoke({"profile", fixture("missing.csv").string(), "--out", out()}).status, 1);
  EXPECT_EQ(invoke({"profile", fixture("table1.csv").string(), "--columns", "Gender", "--out", out()}).status, 2);
  EXPECT_EQ(invoke({"profile", fixture("table1.csv").string(), "--columns", "Nope,Gender", "--out", out()}).status, 2);
  EXPECT_EQ(invoke({"profile", fixture("table1.csv").string(), "--max-lhs", "0", "--out", out()}).status, 2);
  EXPECT_EQ(invoke({"profile", fixture("table1.csv").string(), "--bogus"}).status, 2);
  EXPECT_EQ(invoke({}).status, 2);
  EXPECT_TRUE(listing(dir_).empty());
}

TEST_F(Cli, ProfileDiscretize) {
  const fs::path csv = dir_ / "num.csv";
  fs::create_directories(dir_);
  {
    std::ofstream f(csv);
    f << "x,g\n";
    for (int i = 0; i < 40; ++i) f << i * 0.5 << "," << (i % 2 ? "a" : "b") << "\n";
  }
  auto r = invoke({"profile", csv.string(), "--out", out("o")});
  EXPECT_EQ(r.status, 1) << "continuous column without binning";
  r = invoke({"profile", csv.string(), "--discretize", "x:4", "--out", out("o")});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(invoke({"profile", csv.string(), "--discretize", "x", "--out", out("o")}).status, 2);
}

TEST_F(Cli, CompareIdentity) {
  const auto t = fixture("table1.csv").string();
  const auto r = invoke({"compare", t, t, "--out", out()});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("LD preserved: 100.0% (6 of 6 pairs)"), std::string::npos) << r.out;
  EXPECT_EQ(listing(dir_), (std::vector<std::string>{"report.json", "scatter.csv", "scatter.svg", "venn.svg"}));
}

TEST_F(Cli, ComparePregnantMale) {
  const auto r = invoke({"compare", fixture("table1.csv").string(), fixture("table1_male_pregnant.csv").string(),
                         "--out", out()});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto report = nlohmann::json::parse(slurp(dir_ / "report.json"));
  int violated = 0;
  for (const auto& v : report["verdicts"]) {
    const bool gender_pregnant = (v["a"] == "Gender" && v["b"] == "Pregnant") || (v["a"] == "Pregnant" && v["b"] == "Gender");
    if (gender_pregnant) {
      EXPECT_EQ(v["status"], "violated");
      ++violated;
    }
  }
  EXPECT_EQ(violated, 2);
}

TEST_F(Cli, CompareQscoreMode) {
  const auto t = fixture("table1.csv").string();
  const auto r = invoke({"compare", t, t, "--mode", "qscore", "--epsilon", "0", "--out", out()});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(slurp(dir_ / "report.json"))["mode"], "qscore");
  EXPECT_EQ(invoke({"compare", t, t, "--mode", "magic", "--out", out("m")}).status, 2);
  EXPECT_EQ(invoke({"compare", t, t, "--epsilon", "-1", "--out", out("m")}).status, 2);
}

TEST_F(Cli, CompareSchemaMismatchLeavesNothing) {
  const auto r = invoke({"compare", fixture("table1.csv").string(), fixture("table1_stage.csv").string(),
                         "--out", out()});
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("Stage"), std::string::npos) << r.err;
  EXPECT_TRUE(listing(dir_).empty());
}

TEST_F(Cli, CompareNeedsTwoInputs) {
  EXPECT_EQ(invoke({"compare", fixture("table1.csv").string(), "--out", out()}).status, 2);
}

TEST_F(Cli, BaselineBootstrap) {
  const auto r = invoke({"baseline", fixture("table1.csv").string(), "--seed", "7", "--out", out()});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto path = dir_ / "table1.bootstrap.seed7.csv";
  ASSERT_TRUE(fs::exists(path));
  const auto text = slurp(path);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 5);
  EXPECT_EQ(text.substr(0, text.find('\n')), "Disease,Examiner,Pregnant,Gender");
}

TEST_F(Cli, BaselineIndependentRows) {
  const auto r = invoke({"baseline", fixture("table1.csv").string(), "--method", "independent", "--rows", "100",
                         "--seed", "3", "--out", out()});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto text = slurp(dir_ / "table1.independent.seed3.csv");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 101);
}

TEST_F(Cli, BaselineErrors) {
  const auto t = fixture("table1.csv").string();
  EXPECT_EQ(invoke({"baseline", t, "--method", "noisy-swap", "--fraction", "1.5", "--out", out()}).status, 2);
  EXPECT_EQ(invoke({"baseline", t, "--method", "gan", "--out", out()}).status, 2);
  EXPECT_EQ(invoke({"baseline", t, "--wat", "--out", out()}).status, 2);
  EXPECT_EQ(invoke({"baseline", fixture("empty.csv").string(), "--out", out()}).status, 1);
  EXPECT_TRUE(listing(dir_).empty());
}

TEST_F(Cli, Help) {
  const auto r = invoke({"--help"});
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("profile"), std::string::npos);
}

TEST_F(Cli, FixedTimestampIsByteStable) {
  const auto t = fixture("table1.csv").string();
  const auto s = fixture("table1_male_pregnant.csv").string();
  for (const auto& sub : {"a", "b"}) {
    ASSERT_EQ(invoke({"profile", t, "--fixed-timestamp", "--out", out(std::string("p") + sub)}).status, 0);
    ASSERT_EQ(invoke({"compare", t, s, "--fixed-timestamp", "--out", out(std::string("c") + sub)}).status, 0);
  }
  for (const auto& prefix : {"p", "c"}) {
    const auto a = dir_ / (std::string(prefix) + "a");
    const auto b = dir_ / (std::string(prefix) + "b");
    ASSERT_EQ(listing(a), listing(b));
    for (const auto& name : listing(a)) EXPECT_EQ(slurp(a / name), slurp(b / name)) << name;
  }
  EXPECT_NE(slurp(dir_ / "pa" / "qscores.json").find("1970-01-01T00:00:00Z"), std::string::npos);
}

}  // namespace
}  // namespace depq::cli
