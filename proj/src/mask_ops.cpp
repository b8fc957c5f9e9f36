#include "xdc/mask_ops.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "xdc/error.hpp"

namespace xdc {

Mask dilate(const Mask& mask) {
    const int h = mask.height();
    const int w = mask.width();
    Mask out(h, w);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double v = mask.at(y, x);
            if (y > 0) v = std::max(v, mask.at(y - 1, x));
            if (y + 1 < h) v = std::max(v, mask.at(y + 1, x));
            if (x > 0) v = std::max(v, mask.at(y, x - 1));
            if (x + 1 < w) v = std::max(v, mask.at(y, x + 1));
            out.at(y, x) = v;
        }
    }
    return out;
}

Mask blur_outwards(const Mask& mask, int p_blend, const SmoothingFunction& smoothing) {
    if (!mask.is_binary()) throw MaskError("blur_outwards expects a binary mask");
    if (p_blend < 0) throw ConfigError("p_blend must be non-negative, got " + std::to_string(p_blend));
    if (p_blend == 0) return mask;
    if (smoothing(0.0) != 0.0 || smoothing(1.0) != 1.0) {
        throw ConfigError("smoothing function must satisfy s(0) = 0 and s(1) = 1");
    }

    std::vector<double> weights(static_cast<std::size_t>(p_blend));
    for (int p = 0; p < p_blend; ++p) {
        const double w = smoothing(static_cast<double>(p + 1) / p_blend) - smoothing(static_cast<double>(p) / p_blend);
        if (w < 0.0) throw ConfigError("smoothing function must be monotonically increasing");
        weights[static_cast<std::size_t>(p)] = w;
    }

    Mask blurred(mask.height(), mask.width());
    Mask shell = mask;
    for (int p = 0; p < p_blend; ++p) {
        const double w = weights[static_cast<std::size_t>(p)];
        auto acc = blurred.values();
        const auto cur = shell.values();
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w * cur[i];
        if (p + 1 < p_blend) shell = dilate(shell);
    }

    // The weights telescope to s(1) - s(0) = 1; pin the original support and clip rounding.
    auto acc = blurred.values();
    const auto base = mask.values();
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = base[i] == 1.0 ? 1.0 : std::clamp(acc[i], 0.0, 1.0);
    return blurred;
}

}  // namespace xdc
