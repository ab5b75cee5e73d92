#include <cstdlib>
#include <filesystem>
#include <string>

#include <sys/wait.h>

#include <gtest/gtest.h>

namespace fs = std::filesystem;

namespace {

const fs::path& out_dir() {
  static const fs::path d = fs::temp_directory_path() / "nslab_cli_test";
  return d;
}

int run(const std::string& args) {
  const std::string cmd = std::string(NSLAB_CLI_PATH) + " --out " + out_dir().string() + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Cli, LedgerVerifyWritesReport) {
  fs::remove_all(out_dir());
  EXPECT_EQ(run("ledger verify"), 0);
  EXPECT_TRUE(fs::exists(out_dir() / "ledger.json"));
  EXPECT_TRUE(fs::exists(out_dir() / "ledger_tables.csv"));
  EXPECT_TRUE(fs::exists(out_dir() / "timings.json"));
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run("--delta 1/3 ledger verify"), 2);
  EXPECT_EQ(run("ledger verify --delta 3/4"), 2);
  EXPECT_EQ(run("--delta banana ledger verify"), 2);
  EXPECT_EQ(run("bogus"), 2);
  EXPECT_EQ(run("ledger verify --no-such-flag"), 2);
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("fields run --config /nonexistent/config.json"), 2);
  EXPECT_EQ(run("ledger sum --alpha 0"), 2);
  EXPECT_EQ(run("kernels scan --kind wave"), 2);
  EXPECT_EQ(run("--dyads 5..2 ledger verify"), 2);
}

TEST(Cli, SubcommandsSucceed) {
  EXPECT_EQ(run("ledger sum --alpha 15/4 --k0 0 --kmax 20"), 0);
  EXPECT_EQ(run("--quick freqgeo check"), 0);
  EXPECT_EQ(run("phase verify --N 256"), 0);
  EXPECT_EQ(run("--quick symbols corona --N 1024 --samples 2000"), 0);
  EXPECT_EQ(run("--dyads 6..8 packets decoupling --geometry generic --trials 4"), 0);
  EXPECT_EQ(run("--dyads 6..8 kernels scan --kind heat --trials 4 --samples 500"), 0);
  EXPECT_TRUE(fs::exists(out_dir() / "packets_decoupling.csv"));
}

TEST(Cli, FieldsRunThenScaling) {
  const fs::path cfg = out_dir() / "cfg.json";
  fs::create_directories(out_dir());
  {
    std::FILE* f = std::fopen(cfg.c_str(), "w");
    std::fputs(R"({"M": 32, "horizon": 0.05, "snapshots": 4, "seed": 2})", f);
    std::fclose(f);
  }
  const fs::path traj = out_dir() / "traj";
  EXPECT_EQ(run("fields run --config " + cfg.string() + " --traj " + traj.string()), 0);
  EXPECT_TRUE(fs::exists(traj / "manifest.json"));
  EXPECT_EQ(run("fields scaling --traj " + traj.string()), 0);
  EXPECT_TRUE(fs::exists(out_dir() / "fields_scaling_scaling.csv"));
  EXPECT_EQ(run("fields scaling --traj " + (out_dir() / "missing").string()), 2);
}
