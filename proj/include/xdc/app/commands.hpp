#pragma once

#include <cstddef>
#include <exception>
#include <filesystem>
#include <ostream>
#include <vector>

#include "xdc/app/run_config.hpp"
#include "xdc/app/tiling.hpp"
#include "xdc/app/trace.hpp"
#include "xdc/image.hpp"
#include "xdc/oracle.hpp"

namespace xdc::app {

// Stable process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitBackend = 3;
inline constexpr int kExitInternal = 4;

[[nodiscard]] int exit_code_for(const std::exception& e);

/// Reference image and binary mask, after pasting the object when one is given.
struct Scene {
    ImageGrid reference;
    Mask mask;
};

[[nodiscard]] Scene load_scene(const RunConfig& cfg);

/// The oracle's data distribution for this run (see RunConfig::oracle_means).
[[nodiscard]] GaussianMixture oracle_mixture(const RunConfig& cfg, const ImageGrid& reference);

/// Two sign-flipped +-0.5 checkerboards on 16x16x1, equal weights: the toy distribution.
[[nodiscard]] GaussianMixture toy_mixture(double stddev);

struct RunOutput {
    ImageGrid image;
    int evaluations = 0;
    std::string schedule_block;
};

/// One composite with the configured backend. `cell` tags trace records (-1 for none).
[[nodiscard]] RunOutput run_once(const RunConfig& cfg, const Scene& scene, TraceLog& log, int cell = -1);

/// Writes the image and its `.cfg` sidecar (config, seed, schedule digest, output digest).
void write_result(const RunConfig& cfg, const std::filesystem::path& output, const RunOutput& result);

struct SweepCell {
    std::size_t index;
    double t_in;
    int n_in;
    double r;
};

struct SweepPlan {
    std::vector<SweepCell> cells;  // row-major tile order
    TileLayout layout;
};

/// Cross product in (t_in, n_in, r) order. Columns follow the last axis with more
/// than one value; rows enumerate the remaining axes.
[[nodiscard]] SweepPlan plan_sweep(const RunConfig& cfg);
[[nodiscard]] std::filesystem::path cell_path(const std::filesystem::path& output, std::size_t index);

void cmd_composite(const RunConfig& cfg, TraceLog& log);
/// Returns the exit code: 0 when every cell succeeded, else the first failing cell's code.
[[nodiscard]] int cmd_sweep(const RunConfig& cfg, TraceLog& log, std::ostream& report);
void cmd_toy_sample(const RunConfig& cfg, TraceLog& log, std::ostream& report);
void cmd_diagnose(const RunConfig& cfg, TraceLog& log, std::ostream& report);

}  // namespace xdc::app
