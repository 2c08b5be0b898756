// Copyright The lyapkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "lyapkit/bench.hpp"
#include "lyapkit/mmio.hpp"
#include "run_config.hpp"

namespace fs = std::filesystem;

namespace
{

struct CliRun
{
  int code = -1;
  std::string out;
};

CliRun run(const std::string &args)
{
  const std::string cmd = std::string(LYAPKIT_CLI_PATH) + " " + args + " 2>&1";
  CliRun r;
  FILE *pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr)
  {
    return r;
  }
  std::array<char, 4096> buf{};
  size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
  {
    r.out.append(buf.data(), got);
  }
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string read_file(const fs::path &p)
{
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test
{
protected:
  void SetUp() override
  {
    dir_ = fs::temp_directory_path() /
           ("lyapkit_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }

  std::string path(const std::string &name) const { return (dir_ / name).string(); }

  void write_system(std::uint64_t seed)
  {
    const auto gp = lyapkit::gen_random_stable(40, 1, 1, seed);
    lyapkit::mm::write_sparse(path("A.mtx"), gp.sys.A);
    lyapkit::mm::write_dense(path("B.mtx"), gp.sys.B);
    lyapkit::mm::write_dense(path("C.mtx"), *gp.sys.C);
  }

  std::string system_args() const
  {
    return "--A " + path("A.mtx") + " --B " + path("B.mtx") + " --C " + path("C.mtx");
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, AdiPorkVerifyPipeline)
{
  write_system(5);
  const std::string adi = path("adi");
  const CliRun a = run("solve-adi " + system_args() + " --shifts 1,2+1i,2-1i,5 --tol 0 --out " + adi);
  EXPECT_EQ(a.code, 2) << a.out;  // tolerance 0 cannot be met within the four shifts
  for (const char *f : {"Z.mtx", "S.mtx", "L.mtx", "B_perp.mtx", "history.csv", "meta.json"})
  {
    EXPECT_TRUE(fs::exists(fs::path(adi) / f)) << f;
  }
  const CliRun p = run("pork " + system_args() + " --from " + adi + " --out " + path("pork"));
  ASSERT_EQ(p.code, 0) << p.out;
  const std::string rom = path("pork") + "/rom.json";
  const CliRun v = run("verify-h2 " + system_args() + " --rom " + rom + " --out " + path("h2"));
  EXPECT_EQ(v.code, 0) << v.out;
  EXPECT_TRUE(fs::exists(path("h2") + "/h2_report.json"));
  const CliRun bad = run("verify-h2 " + system_args() + " --rom " + rom + " --perturb 1e-2 --out " +
                      path("h2bad"));
  EXPECT_EQ(bad.code, 3) << bad.out;
}

TEST_F(Cli, ConvergedSolveExitsZero)
{
  const CliRun r = run("solve-adi --gen diffusion --n 100 --irka --q 4 --cyclic --max-steps 120 --out " +
                    path("o"));
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(read_file(path("o") + "/meta.json").find("\"max_steps\": 120"), std::string::npos);
}

TEST_F(Cli, OperationalErrors)
{
  const CliRun missing = run("solve-adi --A " + path("nope.mtx") + " --B " + path("nope_b.mtx") +
                          " --shifts 1 --out " + path("o"));
  EXPECT_EQ(missing.code, 1);
  EXPECT_NE(missing.out.find(path("nope.mtx")), std::string::npos) << missing.out;

  const CliRun open = run("solve-adi --gen random --n 20 --shifts 1+1i,3 --out " + path("o"));
  EXPECT_EQ(open.code, 1);
  EXPECT_NE(open.out.find("conjugat"), std::string::npos) << open.out;

  EXPECT_EQ(run("solve-adi --bogus-flag").code, 1);
  EXPECT_EQ(run("no-such-command").code, 1);
}

TEST_F(Cli, HelpListsDefaults)
{
  const CliRun h = run("solve-adi --help");
  EXPECT_EQ(h.code, 0);
  for (const char *s : {"--tol", "1e-08", "--max-steps", "200", "--shifts", "--cyclic"})
  {
    EXPECT_NE(h.out.find(s), std::string::npos) << s;
  }
  for (const char *sub : {"solve-rksm", "pork", "verify-h2", "angle", "irka", "experiment"})
  {
    EXPECT_EQ(run(std::string(sub) + " --help").code, 0) << sub;
  }
  EXPECT_EQ(run("--help").code, 0);
}

TEST_F(Cli, ConfigFileRoundTrip)
{
  const CliRun d = run("irka --gen diffusion --n 50 --q 2 --irka-tol 1e-4 --dump-config");
  ASSERT_EQ(d.code, 0) << d.out;
  {
    std::ofstream f(path("cfg.json"));
    f << d.out;
  }
  const lyapkit::cli::RunConfig c = lyapkit::cli::RunConfig::load(path("cfg.json"));
  EXPECT_EQ(c.n, 50);
  EXPECT_EQ(c.q, 2);
  EXPECT_EQ(c.irka_tol, 1e-4);
  const CliRun again = run("irka --config " + path("cfg.json") + " --dump-config");
  EXPECT_EQ(again.out, d.out);
}

TEST_F(Cli, IdempotentOutputs)
{
  for (int i = 0; i < 2; i++)
  {
    const std::string out = path("run" + std::to_string(i));
    ASSERT_EQ(run("angle --gen random --n 30 --seed 3 --shifts 1,2+2i,2-2i --cyclic --max-steps 9 "
                  "--out " + out).code,
              0);
  }
  EXPECT_EQ(read_file(path("run0") + "/history.csv"), read_file(path("run1") + "/history.csv"));
  EXPECT_EQ(read_file(path("run0") + "/angle.json"), read_file(path("run1") + "/angle.json"));
}
