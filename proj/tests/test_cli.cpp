#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qdioph_cli/cli.hpp"
#include "qdioph_cli/config.hpp"

namespace qdioph::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string config_path(const std::string& name) { return std::string(QDIOPH_SOURCE_DIR) + "/configs/" + name; }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("qdioph_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string read(const std::string& name) {
    std::ifstream in(dir_ / name, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }
  std::string path(const std::string& name) { return (dir_ / name).string(); }

  std::string plan_config(const std::string& grid, const std::string& csv) {
    return R"({"field": {"D": 1},
      "problem": {"m": 1, "n": 2, "psi": {"family": "power", "params": {"c": 1, "s": 0.5}}},
      "plan": {"T_grid": )" +
           grid + R"(, "theta_count": 3, "theta_box": 1, "seed": 5},
      "outputs": {"csv_path": ")" +
           csv + R"(", "svg_path": ")" + path("plot.svg") + R"("}})";
  }

  fs::path dir_;
};

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

TEST_F(CliTest, CountFixture) {
  const Result r = run_cli({"count", config_path("fixture_400.json"), "--theta", "zero"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 2u);
  EXPECT_EQ(ls[0], "count,T,predicted,ratio,q_enumerated,theorem_backed");
  EXPECT_EQ(ls[1].substr(0, 7), "400,16,");
}

TEST_F(CliTest, ThetaZeroMatchesExplicitZeros) {
  const Result a = run_cli({"count", config_path("fixture_400.json"), "--theta", "zero"});
  const Result b = run_cli({"count", config_path("fixture_400.json"), "--theta", "0x0p+0", "0x0p+0", "0x0p+0", "0x0p+0"});
  const Result c = run_cli({"count", config_path("fixture_400.json"), "--theta", "0x0p+0,0x0p+0,0x0p+0,0x0p+0"});
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, c.out);
}

TEST_F(CliTest, CountHexThetaAndErrors) {
  const Result r = run_cli({"count", config_path("fixture_400.json"), "--theta", "0x1.8p-2", "0x1p-3", "-0x1p-1", "0x0p+0",
                            "--T", "50"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(run_cli({"count", config_path("fixture_400.json"), "--theta", "1", "2"}).code, 2);
  EXPECT_EQ(run_cli({"count", config_path("fixture_400.json"), "--theta", "abc", "0", "0", "0"}).code, 2);
  const Result missing = run_cli({"count", path("missing.json")});
  EXPECT_EQ(missing.code, 2);
  EXPECT_NE(missing.err.find("cannot read"), std::string::npos);
  EXPECT_EQ(run_cli({"count", config_path("fixture_400.json"), "--T", "1"}).code, 2);
}

TEST_F(CliTest, OverflowExitCode) {
  const std::string cfg = write("big.json", R"({"field": {"D": 1},
    "problem": {"m": 1, "n": 2, "psi": {"family": "constant", "params": {"c": 1}},
                "ideal": {"generators": [[4611686018427387904, 4611686018427387904]]}}})");
  const Result r = run_cli({"count", cfg, "--T", "10"});
  EXPECT_EQ(r.code, 3) << r.err;
}

TEST_F(CliTest, ConfigSchemaIsStrict) {
  const std::string good = R"({"field": {"D": 1}, "problem": {"m": 1, "n": 2, "psi": {"family": "constant"}}})";
  EXPECT_NO_THROW(parse_config(good));
  EXPECT_THROW(parse_config(R"({"field": {"D": 1}, "problem": {"m": 1, "n": 2, "psi": {"family": "constant"}}, "x": 1})"),
               ConfigError);
  EXPECT_THROW(parse_config(R"({"field": {"D": 1, "E": 2}, "problem": {"m": 1, "n": 2, "psi": {"family": "constant"}}})"),
               ConfigError);
  EXPECT_THROW(parse_config(R"({"field": {"D": 4}, "problem": {"m": 1, "n": 2, "psi": {"family": "constant"}}})"),
               ConfigError);
  EXPECT_THROW(parse_config(R"({"field": {"D": 1}, "problem": {"m": 1, "n": 2, "psi": {"family": "cubic"}}})"),
               ConfigError);
  EXPECT_THROW(parse_config(R"({"field": {"D": 1}, "problem": {"m": 1, "n": 2, "psi": {"family": "power", "params": {"s": 2}}}})"),
               ConfigError);
  EXPECT_THROW(parse_config(R"({"field": {"D": 1}, "problem": {"m": 1, "n": 2, "v": [[0, 0]], "psi": {"family": "constant"}}})"),
               ConfigError);
  EXPECT_THROW(parse_config("{not json"), ConfigError);
  const ExperimentConfig c = parse_config(
      R"({"field": {"D": 2}, "problem": {"m": 2, "n": 1, "psi": {"family": "step", "params": {"breaks": [1, 4], "values": [2, 1]}},
          "v": [[1, 0], [0, 1], [0, 0]], "ideal": {"generators": [[2, 0]]}},
          "plan": {"T_grid": [10, 20], "theta_count": 2, "theta_box": 0.5, "seed": 7}})");
  EXPECT_EQ(c.problem.field.D(), 2);
  EXPECT_EQ(c.problem.ideal.norm, 4);
  EXPECT_EQ(c.plan->T_grid.size(), 2u);
  EXPECT_EQ(c.experiment_plan().seed, 7u);
}

TEST_F(CliTest, AsymptoticsWritesTablesDeterministically) {
  const std::string cfg = write("plan.json", plan_config("[20, 80, 320]", path("table.csv")));
  const Result r = run_cli({"asymptotics", cfg, "--threads", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string first = read("table.csv");
  const auto ls = lines(first);
  ASSERT_EQ(ls.size(), 1u + 3u * 3u);
  EXPECT_EQ(ls[0], "theta_index,T,count,predicted,ratio");
  const std::string svg = read("plot.svg");
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_NE(svg.find("class=\"reference\""), std::string::npos);
  EXPECT_EQ(lines(r.out)[0], "T,median_ratio,q1,q3,median_abs_deviation");

  ASSERT_EQ(run_cli({"asymptotics", cfg, "--threads", "1"}).code, 0);
  EXPECT_EQ(read("table.csv"), first);
}

TEST_F(CliTest, AsymptoticsRejectsBadPlans) {
  EXPECT_EQ(run_cli({"asymptotics", write("a.json", plan_config("[100, 10]", path("t.csv")))}).code, 2);
  EXPECT_EQ(run_cli({"asymptotics", write("b.json", plan_config("[]", path("t.csv")))}).code, 2);
  EXPECT_EQ(run_cli({"asymptotics", write("c.json", plan_config("[10, 20]", path("no/such/dir/t.csv")))}).code, 2);
  EXPECT_EQ(run_cli({"asymptotics", config_path("volume_fixture.json")}).code, 0);
  EXPECT_EQ(run_cli({"asymptotics", write("d.json", R"({"field": {"D": 1}, "problem": {"m": 1, "n": 2, "psi": {"family": "constant"}}})")}).code, 2);
}

TEST_F(CliTest, Volume) {
  const Result r = run_cli({"volume", config_path("volume_fixture.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 2u);
  EXPECT_EQ(ls[1].substr(0, 29), "E_T,3,10,0.10000000000000001,");
  EXPECT_NE(ls[1].find(",279.0564901226"), std::string::npos);
  EXPECT_EQ(run_cli({"volume", config_path("volume_fixture.json"), "--region", "E_X"}).code, 2);
  const Result t1 = run_cli({"volume", config_path("volume_fixture.json"), "--T", "1"});
  EXPECT_EQ(t1.code, 0);
  EXPECT_EQ(lines(t1.out)[1].substr(0, 32), "E_T,3,1,0.10000000000000001,0,0,");
  const Result mc = run_cli({"volume", config_path("volume_fixture.json"), "--region", "E_T_eps_plus", "--mc", "20000",
                             "--seed", "3"});
  EXPECT_EQ(mc.code, 0);
  EXPECT_EQ(mc.out, run_cli({"volume", config_path("volume_fixture.json"), "--region", "E_T_eps_plus", "--mc", "20000",
                             "--seed", "3", "--threads", "3"})
                        .out);
}

TEST_F(CliTest, HeightsEchelonSiegel) {
  const Result h = run_cli({"heights", "--k", "2", "--xmax", "1"});
  ASSERT_EQ(h.code, 0);
  EXPECT_EQ(h.out, "height,count\n1,0\n");
  const Result b = run_cli({"heights", "--k", "2", "--d", "3", "--xmax", "64", "--table", "blocks"});
  EXPECT_EQ(b.code, 0);
  EXPECT_EQ(lines(b.out).size(), 1u + 6u);
  EXPECT_EQ(run_cli({"heights", "--k", "3", "--d", "3", "--xmax", "8", "--table", "blocks"}).code, 2);
  EXPECT_EQ(run_cli({"heights", "--k", "2", "--xmax", "5000"}).code, 2);

  const Result e = run_cli({"echelon", "--m", "2", "--k", "2", "--bound", "5"});
  ASSERT_EQ(e.code, 0);
  EXPECT_EQ(e.out, "index,pivots,form,height\n0,1 2,[1 0;0 1],1\n");
  EXPECT_EQ(run_cli({"echelon", "--m", "3", "--k", "2", "--bound", "1"}).code, 2);

  const Result s = run_cli({"siegel", "--radius", "0.79788456080286536", "--samples", "10000", "--seed", "1"});
  ASSERT_EQ(s.code, 0);
  const auto ls = lines(s.out);
  ASSERT_EQ(ls.size(), 2u);
  EXPECT_EQ(ls[0], "radius,samples,mean,std_error,target");
  EXPECT_EQ(s.out, run_cli({"siegel", "--radius", "0.79788456080286536", "--samples", "10000", "--seed", "1", "--threads",
                            "3"})
                       .out);
  EXPECT_EQ(run_cli({"siegel", "--radius", "-1"}).code, 2);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
  EXPECT_EQ(run_cli({"--help"}).code, 0);
  EXPECT_EQ(run_cli({"heights", "--k", "2"}).code, 2);
}

}  // namespace
}  // namespace qdioph::cli
