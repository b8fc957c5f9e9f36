#pragma once

#include <vector>

namespace xdc {

enum class Direction { denoise, renoise };

/// Denoise moves x_t to x_{t-1}; renoise moves x_{t-1} back to x_t.
struct ScheduleAction {
    int step;
    Direction direction;

    friend bool operator==(const ScheduleAction&, const ScheduleAction&) = default;
};

/// Backward-diffusion action list with resampling over the last ceil(R * T) steps.
///
/// Steps t <= ceil(R * T) are followed by U - 1 renoise/denoise repetitions
/// with jump length one; R = 0 or U = 1 gives the plain T, T-1, ..., 1 pass.
class ResampleSchedule {
public:
    /// Throws ConfigError unless T >= 1, R in [0, 1] and U >= 1.
    [[nodiscard]] static ResampleSchedule build(int steps, double relative_start, int repetitions);

    [[nodiscard]] const std::vector<ScheduleAction>& actions() const { return actions_; }
    [[nodiscard]] int steps() const { return steps_; }
    [[nodiscard]] double relative_start() const { return relative_start_; }
    [[nodiscard]] int repetitions() const { return repetitions_; }
    /// Highest step that is resampled (0 when none).
    [[nodiscard]] int resample_from() const { return resample_from_; }
    [[nodiscard]] int denoise_count() const;

private:
    ResampleSchedule(int steps, double relative_start, int repetitions, int resample_from,
                     std::vector<ScheduleAction> actions);

    int steps_;
    double relative_start_;
    int repetitions_;
    int resample_from_;
    std::vector<ScheduleAction> actions_;
};

/// ceil(R * T), tolerant of products such as 0.7 * 10 landing just above an integer.
[[nodiscard]] int resample_region(int steps, double relative_start);

}  // namespace xdc
