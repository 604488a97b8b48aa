#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include <nlohmann/json.hpp>

#include "alesupg/driver.hpp"
#include "scratch_dir.hpp"

using namespace alesupg;
using testing_support::read_text;
using testing_support::ScratchDir;

namespace {

RunConfig small_square(const std::filesystem::path& out) {
    RunConfig c;
    apply_setting(c, "case", "moving_square");
    apply_setting(c, "mms.n", "4");
    apply_setting(c, "time.dt", "0.05");
    apply_setting(c, "time.T", "0.2");
    apply_setting(c, "output.snapshots", "0.1");
    apply_setting(c, "output.line_y", "0.5");
    apply_setting(c, "output.line_points", "11");
    c.output_dir = out.string();
    return c;
}

}  // namespace

TEST(Driver, SmallRunWritesOutputs) {
    ScratchDir dir;
    const auto config = small_square(dir.path());
    const auto s = execute_run(config);
    EXPECT_EQ(s.steps, 4);
    EXPECT_EQ(s.records.size(), 4u);
    EXPECT_EQ(s.dofs, 81);
    EXPECT_TRUE(std::isfinite(s.l2_error));
    EXPECT_LT(s.l2_error, 0.05);
    EXPECT_EQ(s.final_coefficients.size(), 81u);
    for (const char* name : {"config.cfg", "steps.csv", "line.csv", "summary.json", "field_000002.vtk"}) {
        EXPECT_TRUE(std::filesystem::exists(dir.path() / name)) << name;
    }
    const auto j = nlohmann::json::parse(read_text(dir.path() / "summary.json"));
    EXPECT_EQ(j.at("steps").get<int>(), 4);
    EXPECT_EQ(j.at("config").at("case").get<std::string>(), "moving_square");
    EXPECT_EQ(j.at("dt_max_history").size(), 4u);

    // The written config reproduces the run.
    RunConfig again;
    apply_config_file(again, dir.path() / "config.cfg");
    EXPECT_EQ(resolved_settings(again), resolved_settings(config));
}

TEST(Driver, RunWithoutOutputsIsDeterministic) {
    ScratchDir dir;
    auto config = small_square(dir.path() / "unused");
    RunHooks quiet;
    quiet.write_outputs = false;
    const auto a = execute_run(config, quiet);
    const auto b = execute_run(config, quiet);
    EXPECT_EQ(a.final_coefficients, b.final_coefficients);
    EXPECT_FALSE(std::filesystem::exists(dir.path() / "unused"));
}

TEST(Driver, TimeStudyErrorsDecrease) {
    ScratchDir dir;
    auto config = small_square(dir.path());
    apply_setting(config, "time.dt", "0.1");
    apply_setting(config, "time.scheme", "euler");
    const auto rows = convergence_study(config, StudyKind::Time, 3, false, nullptr);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_TRUE(std::isnan(rows[0].order));
    EXPECT_DOUBLE_EQ(rows[2].dt, 0.025);
    EXPECT_GT(rows[1].difference, rows[2].difference);
    EXPECT_GT(rows[2].difference_order, 0.5);
}

TEST(Driver, MeshInfoReportsAudit) {
    RunConfig c;
    apply_setting(c, "case", "moving_square");
    apply_setting(c, "mms.n", "3");
    std::ostringstream out;
    describe_mesh(c, out);
    const auto text = out.str();
    EXPECT_NE(text.find("cells: 18\n"), std::string::npos) << text;
    EXPECT_NE(text.find("dofs P2: 49\n"), std::string::npos) << text;
    EXPECT_NE(text.find("audit: ok"), std::string::npos) << text;
}

TEST(Driver, MissingMeshFileIsIoError) {
    RunConfig c;
    c.mesh = "/nonexistent/mesh.txt";
    EXPECT_THROW(build_case(c), IoError);
}
