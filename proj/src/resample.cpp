#include "xdc/resample.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "xdc/error.hpp"

namespace xdc {

int resample_region(int steps, double relative_start) {
    const int region = static_cast<int>(std::ceil(relative_start * steps - 1e-9));
    return std::clamp(region, 0, steps);
}

ResampleSchedule::ResampleSchedule(int steps, double relative_start, int repetitions, int resample_from,
                                   std::vector<ScheduleAction> actions)
    : steps_(steps),
      relative_start_(relative_start),
      repetitions_(repetitions),
      resample_from_(resample_from),
      actions_(std::move(actions)) {}

ResampleSchedule ResampleSchedule::build(int steps, double relative_start, int repetitions) {
    if (steps < 1) throw ConfigError("resample schedule needs at least one step");
    if (!(relative_start >= 0.0 && relative_start <= 1.0)) {
        throw ConfigError("R must lie in [0, 1], got " + std::to_string(relative_start));
    }
    if (repetitions < 1) throw ConfigError("U must be at least 1, got " + std::to_string(repetitions));

    const int from = resample_region(steps, relative_start);
    std::vector<ScheduleAction> actions;
    actions.reserve(static_cast<std::size_t>(steps + 2 * (repetitions - 1) * from));
    for (int t = steps; t >= 1; --t) {
        actions.push_back({t, Direction::denoise});
        if (t > from) continue;
        for (int u = 1; u < repetitions; ++u) {
            actions.push_back({t, Direction::renoise});
            actions.push_back({t, Direction::denoise});
        }
    }
    return ResampleSchedule(steps, relative_start, repetitions, from, std::move(actions));
}

int ResampleSchedule::denoise_count() const {
    return static_cast<int>(std::count_if(actions_.begin(), actions_.end(),
                                          [](const ScheduleAction& a) { return a.direction == Direction::denoise; }));
}

}  // namespace xdc
