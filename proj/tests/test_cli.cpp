// Runs the built xdc binary end to end.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "support/grids.hpp"
#include "xdc/png_io.hpp"

namespace fs = std::filesystem;
using namespace xdc;
using nlohmann::json;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("xdc_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()) + "_" +
                std::to_string(::getpid()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
        ImageGrid ref = xdc::testing::random_grid({16, 16, 3}, 4, -0.8, 0.8);
        io::write_image(dir_ / "ref.png", ref);
        io::write_mask(dir_ / "mask.png", xdc::testing::rect_mask(16, 16, 4, 11, 5, 12));
    }
    void TearDown() override { fs::remove_all(dir_); }

    // Runs `xdc <args>`, capturing stdout and stderr; returns the exit code.
    int run(const std::string& args, const std::string& env = {}) {
        const std::string cmd = env + " '" XDC_BINARY "' " + args + " >'" + (dir_ / "stdout").string() + "' 2>'" +
                                (dir_ / "stderr").string() + "'";
        const int status = std::system(cmd.c_str());
        out_ = slurp(dir_ / "stdout");
        err_ = slurp(dir_ / "stderr");
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    std::string scene() const {
        return "--reference '" + (dir_ / "ref.png").string() + "' --mask '" + (dir_ / "mask.png").string() + "'";
    }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
    std::string out_;
    std::string err_;
};

std::vector<json> json_lines(const std::string& text) {
    std::vector<json> lines;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        if (!line.empty()) lines.push_back(json::parse(line));
    }
    return lines;
}

}  // namespace

TEST_F(Cli, UnguidedSmokeRun) {
    ASSERT_EQ(run("composite " + scene() + " --steps 20 --t-in 0 --t-out 0 -o " + path("out.png")), 0) << err_;
    EXPECT_TRUE(fs::exists(path("out.png")));
    EXPECT_TRUE(fs::exists(path("out.cfg")));
    EXPECT_EQ(io::read_rgb(path("out.png")).shape(), (GridShape{16, 16, 3}));
}

TEST_F(Cli, MissingMaskFailsWithInputCodeAndNoOutput) {
    const std::string args = "composite --reference " + path("ref.png") + " --mask " + path("nope.png") +
                             " --steps 10 -o " + path("out.png");
    EXPECT_EQ(run(args), 2);
    EXPECT_NE(err_.find("xdc: error:"), std::string::npos) << err_;
    EXPECT_FALSE(fs::exists(path("out.png")));
    EXPECT_FALSE(fs::exists(path("out.cfg")));
}

TEST_F(Cli, BadFlagsAreInputErrors) {
    EXPECT_EQ(run("composite " + scene() + " --t-in abc -o " + path("o.png")), 2);
    EXPECT_EQ(run("composite " + scene() + " --t-in 1.5 -o " + path("o.png")), 2);
    EXPECT_EQ(run("frobnicate"), 2);
    EXPECT_EQ(run("--help"), 0);
}

TEST_F(Cli, UnreachableBridgeIsBackendError) {
    EXPECT_EQ(run("composite " + scene() + " --steps 5 --backend bridge --bridge-addr 127.0.0.1:1 -o " +
                  path("o.png")),
              3)
        << err_;
    EXPECT_FALSE(fs::exists(path("o.png")));
}

TEST_F(Cli, ImmersionSettingIsEchoedInSidecar) {
    ASSERT_EQ(run("composite " + scene() +
                  " --t-in 0.5 --n-in 2 --r 0.2 --t-out 1 --n-out 1 --steps 50 --sampler ddim -o " + path("im.png")),
              0)
        << err_;
    const std::string side = slurp(path("im.cfg"));
    for (const char* line : {"t_in = 0.5\n", "n_in = 2\n", "r = 0.2\n", "t_out = 1\n", "n_out = 1\n", "steps = 50\n",
                             "sampler = ddim\n", "output.evaluations = 80\n"}) {
        EXPECT_NE(side.find(line), std::string::npos) << line << " missing from\n" << side;
    }
}

TEST_F(Cli, SidecarReplayReproducesBytes) {
    ASSERT_EQ(run("composite " + scene() + " --steps 15 --r 0.3 --u 2 --seed 9 -o " + path("a.png")), 0) << err_;
    ASSERT_EQ(run("composite --config " + path("a.cfg") + " -o " + path("b.png")), 0) << err_;
    EXPECT_EQ(slurp(path("a.png")), slurp(path("b.png")));
    ASSERT_EQ(run("composite --config " + path("a.cfg") + " --seed 10 -o " + path("c.png")), 0) << err_;
    EXPECT_NE(slurp(path("a.png")), slurp(path("c.png")));
}

TEST_F(Cli, TamperedScheduleDigestIsRejected) {
    ASSERT_EQ(run("composite " + scene() + " --steps 10 -o " + path("a.png")), 0) << err_;
    std::string side = slurp(path("a.cfg"));
    const auto at = side.find("schedule.digest = ");
    ASSERT_NE(at, std::string::npos);
    side[at + 18] = side[at + 18] == '0' ? '1' : '0';
    std::ofstream(path("t.cfg")) << side;
    EXPECT_EQ(run("composite --config " + path("t.cfg") + " -o " + path("b.png")), 2);
}

TEST_F(Cli, SingleCellSweepMatchesComposite) {
    ASSERT_EQ(run("composite " + scene() + " --steps 12 --t-in 0.5 -o " + path("one.png")), 0) << err_;
    ASSERT_EQ(run("sweep " + scene() + " --steps 12 --sweep-t-in 0.5 -o " + path("grid.png")), 0) << err_;
    EXPECT_EQ(slurp(path("one.png")), slurp(path("grid.cell0.png")));
    const auto report = json_lines(out_);
    ASSERT_EQ(report.size(), 1u);
    EXPECT_EQ(report[0]["cell"], 0);
}

TEST_F(Cli, SweepReportsCellsInOrder) {
    ASSERT_EQ(run("sweep " + scene() + " --steps 8 --sweep-t-in 0,0.5,1 --sweep-r 0,0.5 --workers 3 -o " +
                  path("g.png")),
              0)
        << err_;
    const auto report = json_lines(out_);
    ASSERT_EQ(report.size(), 6u);
    for (int k = 0; k < 6; ++k) {
        EXPECT_EQ(report[k]["cell"], k);
        EXPECT_TRUE(fs::exists(path("g.cell" + std::to_string(k) + ".png")));
    }
    EXPECT_DOUBLE_EQ(report[5]["t_in"].get<double>(), 1.0);
    EXPECT_DOUBLE_EQ(report[5]["r"].get<double>(), 0.5);
    EXPECT_TRUE(fs::exists(path("g.png")));
}

TEST_F(Cli, DiagnoseEmitsJsonLines) {
    ASSERT_EQ(run("diagnose " + scene() + " --steps 10 --n-in 4 --p-blend 6"), 0) << err_;
    const auto lines = json_lines(out_);
    ASSERT_EQ(lines.size(), 4u);
    for (const auto& j : lines) {
        EXPECT_TRUE(j["boundary_energy"].is_number());
        EXPECT_GT(j["boundary_energy"].get<double>(), 0.0);
    }
    EXPECT_EQ(lines[0]["p_blend"], 0);
    EXPECT_EQ(lines[2]["p_blend"], 6);
}

TEST_F(Cli, TraceLogGoesToStderr) {
    ASSERT_EQ(run("composite " + scene() + " --steps 6 --r 0.5 --u 2 -o " + path("t.png"), "XDC_LOG=trace"), 0);
    const auto records = json_lines(err_);
    int steps = 0;
    int renoise = 0;
    for (const auto& r : records) {
        if (r["event"] != "step") continue;
        ++steps;
        renoise += r["direction"] == "renoise";
        EXPECT_TRUE(r.contains("guided_pixels"));
        EXPECT_TRUE(r.contains("boundary_energy"));
    }
    EXPECT_EQ(steps, 6 + 2 * 3);
    EXPECT_EQ(renoise, 3);
    EXPECT_TRUE(out_.empty());
}

TEST_F(Cli, ToySampleReportsFrequencies) {
    ASSERT_EQ(run("toy-sample --count 8 --steps 50 --workers 4"), 0) << err_;
    const auto lines = json_lines(out_);
    ASSERT_EQ(lines.size(), 1u);
    EXPECT_EQ(lines[0]["count"], 8);
    const auto freq = lines[0]["frequencies"];
    ASSERT_EQ(freq.size(), 2u);
    EXPECT_DOUBLE_EQ(freq[0].get<double>() + freq[1].get<double>(), 1.0);
}
