#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("cpac_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name), std::ios::binary) << text;
  }

  std::string read(const std::string& name) const {
    std::ifstream in(path(name), std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  Result run(const std::string& args) const {
    const std::string cmd = "cd '" + dir_.string() + "' && '" CPAC_CLI_PATH "' " + args + " > '" +
                            path("stdout.txt") + "' 2> '" + path("stderr.txt") + "'";
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, read("stdout.txt")};
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, VcMonotone) {
  const auto r = run("vc --class monotone --window 8 --cap 3");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "dimension,1\nshattered_set,0\n");
}

TEST_F(Cli, VcReachesCap) {
  const auto r = run("vc --class full --window 6 --cap 2");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "dimension,>=2\nshattered_set,0 1\n");
}

TEST_F(Cli, WitnessWritesCertificate) {
  const auto r = run("witness --class monotone --window 3 --d 1");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "# d=1\n0,1 : 10\n0,2 : 10\n1,2 : 10\n");
}

TEST_F(Cli, WitnessFailsOnShatteredTuple) {
  EXPECT_EQ(run("witness --class full --window 4 --d 1").code, 1);
}

TEST_F(Cli, ErmOnTree) {
  write("s.txt", "2,1\n");
  const auto r = run("erm --class full --window 6 --tree --sample s.txt");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "hypothesis,001000\nempirical_risk,0/1\n");
  EXPECT_EQ(run("erm --class thresholds --window 6 --tree --sample s.txt").code, 2);
}

TEST_F(Cli, ValidateErmRejectsAndDumpsCounterexample) {
  EXPECT_EQ(run("validate-erm --class thresholds --window 6 --samples 50 --sample-size 4").code, 0);
  const auto r = run("validate-erm --class thresholds --window 6 --learner zero --samples 50 --counterexample bad.txt");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("valid,false"), std::string::npos);
  EXPECT_FALSE(read("bad.txt").empty());
}

TEST_F(Cli, CertifyThenValidateAerm) {
  ASSERT_EQ(run("certify-aerm --class thresholds --window 5 --per-size 20 --max-size 8 --out eps.txt").code, 0);
  EXPECT_EQ(run("validate-aerm --class thresholds --window 5 --eps eps.txt --sample-size 3").code, 0);
  write("zero.txt", "*,0/1\n");
  EXPECT_EQ(run("validate-aerm --class thresholds --window 5 --learner stage:1 --eps zero.txt").code, 1);
}

TEST_F(Cli, HaltingTableAndReduce) {
  const auto t = run("halting-table --max 4 --budget 8");
  EXPECT_EQ(t.code, 0);
  EXPECT_EQ(t.out.substr(0, t.out.find('\n')), "e,halt_step");
  EXPECT_NE(t.out.find("\n0,1\n"), std::string::npos);
  const auto r = run("reduce --max 16 --budget 32 --m 5");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.find(",0\n"), std::string::npos);
  EXPECT_EQ(run("reduce --m 0").code, 2);
}

TEST_F(Cli, PacRunIsReproducible) {
  write("exp.cfg", "class = thresholds\nwindow = 10\ndistribution = realizable-threshold:4\ntrials = 20\nseed = 5\n");
  ASSERT_EQ(run("pac-run --config exp.cfg --out a.csv").code, 0);
  ASSERT_EQ(run("pac-run --config exp.cfg --out b.csv").code, 0);
  EXPECT_EQ(read("a.csv"), read("b.csv"));
  ASSERT_EQ(run("pac-run --config exp.cfg --seed 6 --out c.csv").code, 0);
  EXPECT_NE(read("a.csv"), read("c.csv"));
  EXPECT_EQ(run("pac-run --config exp.cfg --learner zero --m 5").code, 1);
}

TEST_F(Cli, EncodeDecode) {
  write("p.prog", "INC 0\nDECJZ 1 1\n");
  const auto e = run("encode --program p.prog");
  ASSERT_EQ(e.code, 0);
  const auto d = run("decode --code " + e.out.substr(0, e.out.size() - 1));
  EXPECT_EQ(d.code, 0);
  EXPECT_EQ(d.out, "INC 0\nDECJZ 1 1\n");
  EXPECT_EQ(run("decode --code 4").out, "DECJZ 0 0\n");
  EXPECT_EQ(run("decode --code -3").code, 2);
}

TEST_F(Cli, UsageAndInputErrors) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("erm --sample missing.txt").code, 2);
  write("bad.txt", "0,7\n");
  EXPECT_EQ(run("erm --sample bad.txt").code, 2);
  EXPECT_EQ(run("vc --class nosuchfile.cls").code, 2);
}
