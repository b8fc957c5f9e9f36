#include "xdc/time_mask.hpp"

#include <algorithm>
#include <string>

#include "xdc/error.hpp"

namespace xdc {

TimeMask::TimeMask(int height, int width, int steps, std::vector<double> thresholds)
    : height_(height), width_(width), steps_(steps), thresholds_(std::move(thresholds)) {
    if (thresholds_.size() != static_cast<std::size_t>(height) * static_cast<std::size_t>(width)) {
        throw ShapeError("time mask threshold count does not match its size");
    }
}

Mask TimeMask::gate(double t) const {
    Mask out(height_, width_);
    auto values = out.values();
    for (std::size_t i = 0; i < thresholds_.size(); ++i) values[i] = t >= thresholds_[i] ? 1.0 : 0.0;
    return out;
}

std::size_t TimeMask::open_count(double t) const {
    return static_cast<std::size_t>(
        std::count_if(thresholds_.begin(), thresholds_.end(), [t](double m) { return t >= m; }));
}

bool TimeMask::any_open(double t) const {
    return std::any_of(thresholds_.begin(), thresholds_.end(), [t](double m) { return t >= m; });
}

TimeMask build_time_mask(const Mask& mask, double t_in, double t_out, int steps) {
    if (!(t_in >= 0.0 && t_in <= 1.0)) throw ConfigError("t_in must lie in [0, 1], got " + std::to_string(t_in));
    if (!(t_out >= 0.0 && t_out <= 1.0)) throw ConfigError("t_out must lie in [0, 1], got " + std::to_string(t_out));
    if (steps < 1) throw ConfigError("time mask needs at least one step");
    const double inside = (1.0 - t_in) * steps;
    const double outside = (1.0 - t_out) * steps;
    std::vector<double> thresholds(mask.size());
    const auto m = mask.values();
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        if (m[i] == 1.0) {
            thresholds[i] = inside;
        } else if (m[i] == 0.0) {
            thresholds[i] = outside;
        } else {
            thresholds[i] = inside * m[i] + outside * (1.0 - m[i]);
        }
    }
    return TimeMask(mask.height(), mask.width(), steps, std::move(thresholds));
}

}  // namespace xdc
