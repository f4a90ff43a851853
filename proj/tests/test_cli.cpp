#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(PEDRECON_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("pedrecon_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    std::ofstream(dir_ / "small.conf") << "avg_children = 3\npop_size = 12\nhalf_sibling_rate = 0.5\n"
                                          "height = 4\ngenome_length = 300000000\nseed = 3\n";
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, SimulateReconstructEvaluate) {
  ASSERT_EQ(run("simulate --config " + path("small.conf") + " --out " + path("sim")), 0);
  for (const char* f : {"pedigree.tsv", "haplotypes.tsv", "truth_siblings.tsv",
                        "truth_half_siblings.tsv", "params.txt"})
    EXPECT_TRUE(fs::exists(dir_ / "sim" / f)) << f;

  ASSERT_EQ(run("reconstruct " + path("sim/haplotypes.tsv") + " --max-height 4 --out " + path("rec")),
            0);
  EXPECT_TRUE(fs::exists(dir_ / "rec" / "reconstructed.tsv"));
  EXPECT_TRUE(fs::exists(dir_ / "rec" / "trace.json"));

  const std::string cmd = std::string(PEDRECON_CLI) + " evaluate " + path("rec/reconstructed.tsv") +
                          " " + path("sim/pedigree.tsv") + " --truth " +
                          path("sim/truth_half_siblings.tsv") + " > " + path("report.json");
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  const auto report = nlohmann::json::parse(slurp(dir_ / "report.json"));
  EXPECT_GE(report.at("accuracy").get<double>(), 0.0);
  EXPECT_LE(report.at("accuracy").get<double>(), 1.0);
}

TEST_F(Cli, FixedSeedIsByteIdentical) {
  ASSERT_EQ(run("simulate --config " + path("small.conf") + " --seed 8 --out " + path("a")), 0);
  ASSERT_EQ(run("simulate --config " + path("small.conf") + " --seed 8 --out " + path("b")), 0);
  EXPECT_EQ(slurp(dir_ / "a/pedigree.tsv"), slurp(dir_ / "b/pedigree.tsv"));
  EXPECT_EQ(slurp(dir_ / "a/haplotypes.tsv"), slurp(dir_ / "b/haplotypes.tsv"));
  ASSERT_EQ(run("reconstruct " + path("a/haplotypes.tsv") + " --out " + path("ra")), 0);
  ASSERT_EQ(run("reconstruct " + path("b/haplotypes.tsv") + " --out " + path("rb")), 0);
  EXPECT_EQ(slurp(dir_ / "ra/reconstructed.tsv"), slurp(dir_ / "rb/reconstructed.tsv"));
}

TEST_F(Cli, MaxHeightAndPairingRule) {
  ASSERT_EQ(run("simulate --config " + path("small.conf") + " --out " + path("sim")), 0);
  ASSERT_EQ(run("reconstruct " + path("sim/haplotypes.tsv") +
                " --max-height 3 --pairing-rule eq4 --out " + path("rec")),
            0);
  std::ifstream in(dir_ / "rec" / "reconstructed.tsv");
  std::string line;
  int top = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream f(line);
    std::string id, sex;
    int gen = 0;
    f >> id >> sex >> gen;
    top = std::max(top, gen);
  }
  EXPECT_EQ(top, 3);
  const auto trace = nlohmann::json::parse(slurp(dir_ / "rec" / "trace.json"));
  EXPECT_EQ(trace.at("pairing_rule"), "eq4");
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run(""), 1);
  EXPECT_EQ(run("reconstruct " + path("missing.tsv")), 1);
  EXPECT_EQ(run("reconstruct " + path("small.conf") + " --pairing-rule other"), 1);
  std::ofstream(dir_ / "bad.tsv") << "1\t1\tx\t10\t7\n";
  EXPECT_EQ(run("reconstruct " + path("bad.tsv") + " --out " + path("rec")), 2);
  std::ofstream(dir_ / "bad.conf") << "pop_size = many\n";
  EXPECT_EQ(run("simulate --config " + path("bad.conf") + " --out " + path("sim")), 2);
}

TEST_F(Cli, Experiment) {
  ASSERT_EQ(run("experiment --config " + path("small.conf") + " --heights 3 --replicates 2 --out " +
                path("exp")),
            0);
  for (const char* f : {"runs.tsv", "summary.tsv", "summary.md"})
    EXPECT_TRUE(fs::exists(dir_ / "exp" / f)) << f;
}
