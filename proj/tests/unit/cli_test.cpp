#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "scratch_dir.hpp"

using testing_support::read_text;
using testing_support::ScratchDir;

namespace {

int cli(const std::string& args, const std::filesystem::path& log) {
    const std::string cmd = std::string("\"") + ALE_SUPG_EXE + "\" " + args + " > \"" + log.string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Cli, ExitCodes) {
    ScratchDir dir;
    const auto log = dir.path() / "log.txt";
    EXPECT_EQ(cli("run --no-such-flag 1", log), 2);
    EXPECT_EQ(cli("run --set nosuch.key=1", log), 2);
    EXPECT_EQ(cli("run --time.dt abc", log), 2);
    EXPECT_EQ(cli("", log), 2);
    EXPECT_EQ(cli("mesh-info --mesh /nonexistent/mesh.txt", log), 4);
    EXPECT_NE(read_text(log).find("I/O error"), std::string::npos);
    EXPECT_EQ(cli("run --config /nonexistent/run.cfg", log), 4);
}

TEST(Cli, SmallRunAndMeshInfo) {
    ScratchDir dir;
    const auto log = dir.path() / "log.txt";
    const auto out = dir.path() / "run";
    const std::string common = "--case moving_square --mms.n 4 --output.snapshots none --T 0.1 --dt 0.05 ";
    ASSERT_EQ(cli("run " + common + "--scheme bdf2 --out " + out.string(), log), 0) << read_text(log);
    EXPECT_TRUE(std::filesystem::exists(out / "summary.json"));
    EXPECT_NE(read_text(out / "config.cfg").find("time.scheme = bdf2"), std::string::npos);
    EXPECT_NE(read_text(log).find("L2 error"), std::string::npos);

    const auto mesh_file = dir.path() / "square.mesh";
    ASSERT_EQ(cli("mesh-info " + common + "--write " + mesh_file.string(), log), 0) << read_text(log);
    EXPECT_NE(read_text(log).find("cells: 32"), std::string::npos);
    ASSERT_EQ(cli("mesh-info --case moving_square --mesh " + mesh_file.string(), log), 0) << read_text(log);
    EXPECT_NE(read_text(log).find("cells: 32"), std::string::npos);
}

TEST(Cli, ConfigFileAndOverridePrecedence) {
    ScratchDir dir;
    const auto cfg = dir.path() / "run.cfg";
    {
        std::ofstream f(cfg);
        f << "case = moving_square\nmms.n = 3\ntime.dt = 0.05\ntime.T = 0.05\noutput.snapshots = none\n";
        f << "time.scheme = cn\n";
    }
    const auto out = dir.path() / "run";
    const auto log = dir.path() / "log.txt";
    ASSERT_EQ(cli("run --config " + cfg.string() + " --set time.scheme=euler --out " + out.string(), log), 0)
        << read_text(log);
    EXPECT_NE(read_text(out / "config.cfg").find("time.scheme = euler"), std::string::npos);
}
