#pragma once

#include <cstddef>
#include <vector>

#include "xdc/image.hpp"

namespace xdc {

/// Per-pixel step thresholds M_T with the gate M_t(t) = [t >= M_T].
///
/// Thresholds are (1 - T_in) T inside the mask and (1 - T_out) T outside;
/// fractional mask values give the convex combination, so smoothed masks
/// stagger the stop step pixel by pixel.
class TimeMask {
public:
    TimeMask(int height, int width, int steps, std::vector<double> thresholds);

    [[nodiscard]] int height() const { return height_; }
    [[nodiscard]] int width() const { return width_; }
    [[nodiscard]] int steps() const { return steps_; }

    [[nodiscard]] double threshold(int y, int x) const {
        return thresholds_[static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
                           static_cast<std::size_t>(x)];
    }
    [[nodiscard]] const std::vector<double>& thresholds() const { return thresholds_; }

    [[nodiscard]] bool open(int y, int x, double t) const { return t >= threshold(y, x); }
    /// Binary gate M_t(t).
    [[nodiscard]] Mask gate(double t) const;
    [[nodiscard]] std::size_t open_count(double t) const;
    [[nodiscard]] bool any_open(double t) const;

private:
    int height_;
    int width_;
    int steps_;
    std::vector<double> thresholds_;
};

/// Throws ConfigError unless T_in, T_out lie in [0, 1] and T >= 1.
[[nodiscard]] TimeMask build_time_mask(const Mask& mask, double t_in, double t_out, int steps);

}  // namespace xdc
