#include <gtest/gtest.h>

#include "xdc/app/commands.hpp"
#include "xdc/app/run_config.hpp"
#include "xdc/app/tiling.hpp"
#include "xdc/app/trace.hpp"
#include "xdc/error.hpp"

using namespace xdc;
using namespace xdc::app;

TEST(RunConfig, DefaultsFollowTheEngine) {
    const RunConfig cfg;
    EXPECT_EQ(cfg.guidance.steps, 250);
    EXPECT_EQ(cfg.backend, "oracle");
    EXPECT_FALSE(cfg.guidance.p_blend.has_value());
}

TEST(RunConfig, SetParsesEveryKind) {
    RunConfig cfg;
    cfg.set("position", "12,-3");
    cfg.set("t_in", "0.25");
    cfg.set("n_in", "8");
    cfg.set("p_blend", "auto");
    cfg.set("blend_space", "x0");
    cfg.set("sampler", "ddim");
    cfg.set("seed", "18446744073709551615");
    cfg.set("oracle_mean", "a.png,b.png");
    cfg.set("sweep.t_in", "0.1,0.2,0.3");
    cfg.set("sweep.n_in", "2,4");
    EXPECT_EQ(cfg.position_row, 12);
    EXPECT_EQ(cfg.position_col, -3);
    EXPECT_DOUBLE_EQ(cfg.guidance.t_in, 0.25);
    EXPECT_EQ(cfg.guidance.n_in, 8);
    EXPECT_FALSE(cfg.guidance.p_blend.has_value());
    EXPECT_EQ(cfg.guidance.blend_space, BlendSpace::predicted);
    EXPECT_EQ(cfg.guidance.sampler, SamplerKind::ddim);
    EXPECT_EQ(cfg.guidance.seed, 18446744073709551615ULL);
    EXPECT_EQ(cfg.oracle_means.size(), 2u);
    EXPECT_EQ(cfg.sweep_t_in, (std::vector<double>{0.1, 0.2, 0.3}));
    EXPECT_EQ(cfg.sweep_n_in, (std::vector<int>{2, 4}));
}

TEST(RunConfig, RejectsUnknownKeysAndBadValues) {
    RunConfig cfg;
    EXPECT_THROW(cfg.set("t_inn", "0.2"), ConfigError);
    EXPECT_THROW(cfg.set("t_in", "fast"), ConfigError);
    EXPECT_THROW(cfg.set("t_in", "0.2x"), ConfigError);
    EXPECT_THROW(cfg.set("n_in", "2.5"), ConfigError);
    EXPECT_THROW(cfg.set("position", "3"), ConfigError);
    EXPECT_THROW(cfg.set("blend_space", "latent"), ConfigError);
    EXPECT_THROW(cfg.set("seed", "-1"), ConfigError);
    EXPECT_THROW(RunConfig::parse("t_in 0.2\n"), ConfigError);
}

TEST(RunConfig, ValidateCatchesRanges) {
    RunConfig cfg;
    cfg.set("t_in", "1.5");
    EXPECT_THROW(cfg.validate(), ConfigError);
    RunConfig bridge;
    bridge.set("backend", "bridge");
    EXPECT_THROW(bridge.validate(), ConfigError);  // needs an address
}

TEST(RunConfig, SerializeRoundTrips) {
    RunConfig cfg;
    cfg.set("reference", "/tmp/ref.png");
    cfg.set("mask", "/tmp/mask.png");
    cfg.set("t_in", "0.2");
    cfg.set("r", "0.7");
    cfg.set("u", "3");
    cfg.set("p_blend", "12");
    cfg.set("guidance_scale", "3.25");
    cfg.set("prompt", "a red boat");
    cfg.set("sweep.r", "0,0.5");
    const std::string text = cfg.serialize();
    EXPECT_NE(text.find("t_in = 0.2\n"), std::string::npos) << text;
    const RunConfig back = RunConfig::parse(text);
    EXPECT_EQ(back.serialize(), text);
    EXPECT_EQ(back.guidance.p_blend, 12);
    EXPECT_EQ(back.prompt, "a red boat");
    EXPECT_DOUBLE_EQ(back.guidance.r, 0.7);
}

TEST(RunConfig, ParseSkipsCommentsAndRecordedOutputs) {
    const RunConfig cfg = RunConfig::parse(
        "# written by xdc\n\nxdc.version = 0.1.0\nsteps = 50\nschedule.kind = linear-sigma\n"
        "schedule.digest = 00000000deadbeef\noutput.evaluations = 50\n");
    EXPECT_EQ(cfg.guidance.steps, 50);
    EXPECT_EQ(cfg.recorded_schedule_digest, "00000000deadbeef");
}

TEST(RunConfig, LoadMissingFileIsIoError) {
    EXPECT_THROW(RunConfig::load("/nonexistent/run.cfg"), IoError);
}

TEST(RunConfig, SidecarPath) {
    EXPECT_EQ(sidecar_path("out/result.png"), std::filesystem::path("out/result.cfg"));
    EXPECT_EQ(sidecar_path("plain"), std::filesystem::path("plain.cfg"));
}

TEST(Sweep, SingleAxisIsOneRow) {
    RunConfig cfg;
    cfg.set("sweep.t_in", "0,0.2,0.5,1");
    const SweepPlan plan = plan_sweep(cfg);
    ASSERT_EQ(plan.cells.size(), 4u);
    EXPECT_EQ(plan.layout.rows, 1);
    EXPECT_EQ(plan.layout.cols, 4);
    EXPECT_EQ(plan.layout.col_labels, (std::vector<std::string>{"t_in=0", "t_in=0.2", "t_in=0.5", "t_in=1"}));
    for (std::size_t k = 0; k < 4; ++k) EXPECT_EQ(plan.cells[k].index, k);
    EXPECT_DOUBLE_EQ(plan.cells[3].t_in, 1.0);
}

TEST(Sweep, TwoAxesAreDeterministicRowMajor) {
    RunConfig cfg;
    cfg.set("sweep.t_in", "0.2,0.5");
    cfg.set("sweep.r", "0,0.25,0.5");
    cfg.set("n_in", "4");
    const SweepPlan plan = plan_sweep(cfg);
    ASSERT_EQ(plan.cells.size(), 6u);
    EXPECT_EQ(plan.layout.rows, 2);
    EXPECT_EQ(plan.layout.cols, 3);
    EXPECT_EQ(plan.layout.row_labels, (std::vector<std::string>{"t_in=0.2", "t_in=0.5"}));
    EXPECT_EQ(plan.layout.col_labels, (std::vector<std::string>{"r=0", "r=0.25", "r=0.5"}));
    const double t_in[] = {0.2, 0.2, 0.2, 0.5, 0.5, 0.5};
    const double r[] = {0, 0.25, 0.5, 0, 0.25, 0.5};
    for (std::size_t k = 0; k < 6; ++k) {
        EXPECT_DOUBLE_EQ(plan.cells[k].t_in, t_in[k]);
        EXPECT_DOUBLE_EQ(plan.cells[k].r, r[k]);
        EXPECT_EQ(plan.cells[k].n_in, 4);
    }
}

TEST(Sweep, NoAxisIsOneUnlabelledCell) {
    RunConfig cfg;
    cfg.set("sweep.n_in", "8");
    const SweepPlan plan = plan_sweep(cfg);
    ASSERT_EQ(plan.cells.size(), 1u);
    EXPECT_EQ(plan.cells[0].n_in, 8);
    EXPECT_TRUE(plan.layout.col_labels.empty());
}

TEST(Sweep, CellPaths) {
    EXPECT_EQ(cell_path("out/grid.png", 3), std::filesystem::path("out/grid.cell3.png"));
}

TEST(Tiling, GridDimensions) {
    TileLayout layout{2, 3, {"a", "bb"}, {"x", "y", "z"}};
    std::vector<std::optional<ImageGrid>> cells(6, ImageGrid({4, 5, 3}, 0.0));
    cells[4].reset();
    const ImageGrid grid = tile_grid(cells, layout, {4, 5, 3});
    const int left = text_width("bb", 2) + 6;
    const int top = text_height(2) + 6;
    EXPECT_EQ(grid.height(), top + 2 * 4 + 3 * 2);
    EXPECT_EQ(grid.width(), left + 3 * 5 + 4 * 2);
    EXPECT_EQ(grid.channels(), 3);
    EXPECT_THROW((void)tile_grid(cells, TileLayout{1, 1, {}, {}}, {4, 5, 3}), ShapeError);
}

TEST(Tiling, UnlabelledHasOnlyGaps) {
    std::vector<std::optional<ImageGrid>> cells(1, ImageGrid({3, 3, 1}, 0.25));
    const ImageGrid grid = tile_grid(cells, TileLayout{}, {3, 3, 1});
    EXPECT_EQ(grid.height(), 7);
    EXPECT_EQ(grid.width(), 7);
    EXPECT_EQ(grid.at(2, 2, 0), 0.25);
    EXPECT_EQ(grid.at(0, 0, 0), 1.0);
}

TEST(ExitCodes, MapByErrorFamily) {
    EXPECT_EQ(exit_code_for(ConfigError("x")), kExitInput);
    EXPECT_EQ(exit_code_for(MaskError("x")), kExitInput);
    EXPECT_EQ(exit_code_for(IoError("x")), kExitInput);
    EXPECT_EQ(exit_code_for(DiagnosticError("x")), kExitInput);
    EXPECT_EQ(exit_code_for(TransportError("x")), kExitBackend);
    EXPECT_EQ(exit_code_for(ProtocolError("x")), kExitBackend);
    EXPECT_EQ(exit_code_for(RemoteError("x")), kExitBackend);
    EXPECT_EQ(exit_code_for(std::runtime_error("x")), kExitInternal);
}

TEST(Trace, LevelsParse) {
    EXPECT_EQ(parse_log_level(""), LogLevel::off);
    EXPECT_EQ(parse_log_level("0"), LogLevel::off);
    EXPECT_EQ(parse_log_level("info"), LogLevel::info);
    EXPECT_EQ(parse_log_level("2"), LogLevel::trace);
    EXPECT_EQ(parse_log_level("trace"), LogLevel::trace);
}

TEST(Trace, EmitsJsonLinesAtOrBelowLevel) {
    std::ostringstream sink;
    TraceLog log(LogLevel::info, sink);
    log.emit(LogLevel::info, {{"event", "run"}});
    log.emit(LogLevel::trace, {{"event", "step"}});
    EXPECT_EQ(sink.str(), "{\"event\":\"run\"}\n");
    EXPECT_FALSE(log.enabled(LogLevel::trace));
}

TEST(ToyMixture, CheckerboardPair) {
    const GaussianMixture m = toy_mixture(0.1);
    ASSERT_EQ(m.components().size(), 2u);
    EXPECT_EQ(m.components()[0].mean.at(0, 0, 0), 0.5);
    EXPECT_EQ(m.components()[0].mean.at(0, 1, 0), -0.5);
    EXPECT_EQ(m.components()[1].mean.at(0, 0, 0), -0.5);
    EXPECT_EQ(m.shape(), (GridShape{16, 16, 1}));
}
