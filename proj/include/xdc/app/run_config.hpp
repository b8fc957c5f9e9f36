#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xdc/sampler.hpp"

namespace xdc::app {

/// Everything one CLI invocation needs. Serialises to a flat `key = value`
/// file whose keys mirror the flag names, so sidecars can be fed back in.
struct RunConfig {
    std::string reference;
    std::string object;
    std::string mask;
    std::string output;
    int position_row = 0;
    int position_col = 0;
    double scale = 1.0;

    GuidanceConfig guidance;

    std::string backend = "oracle";
    std::string bridge_addr;
    std::string prompt;

    // Oracle data distribution; empty means one component centred on low_pass(reference, 4).
    std::vector<std::string> oracle_means;
    double oracle_std = 0.1;

    std::vector<double> sweep_t_in;
    std::vector<int> sweep_n_in;
    std::vector<double> sweep_r;

    int workers = 1;
    int band = 2;
    int count = 16;

    // Recorded facts from a sidecar; checked, never fed into the run.
    std::optional<std::string> recorded_schedule_digest;

    /// Applies one setting; throws ConfigError for unknown keys or bad values.
    void set(std::string_view key, std::string_view value);
    void validate() const;

    [[nodiscard]] static RunConfig parse(std::string_view text);
    [[nodiscard]] static RunConfig load(const std::filesystem::path& path);
    /// Paths are written absolute so the record can be replayed from anywhere.
    [[nodiscard]] std::string serialize() const;
};

[[nodiscard]] std::filesystem::path sidecar_path(const std::filesystem::path& output);

}  // namespace xdc::app
