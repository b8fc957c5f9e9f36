#include "xdc/paste.hpp"

#include <cmath>
#include <string>

#include "xdc/error.hpp"
#include "xdc/filter.hpp"

namespace xdc {

PasteResult paste(const RgbaObject& object, const ImageGrid& background, PixelOffset position, double scale) {
    require_same_plane(object.color.shape(), object.alpha, "paste object alpha");
    if (object.color.channels() != background.channels()) {
        throw ShapeError("paste: object has " + std::to_string(object.color.channels()) +
                         " channels, background has " + std::to_string(background.channels()));
    }
    if (!(scale > 0.0) || !std::isfinite(scale)) throw PlacementError("paste scale must be positive");

    const int h = static_cast<int>(std::lround(object.color.height() * scale));
    const int w = static_cast<int>(std::lround(object.color.width() * scale));
    if (h < 1 || w < 1 || position.row < 0 || position.col < 0 || position.row + h > background.height() ||
        position.col + w > background.width()) {
        throw PlacementError("object footprint " + std::to_string(h) + "x" + std::to_string(w) + " at (" +
                             std::to_string(position.row) + "," + std::to_string(position.col) +
                             ") does not fit background " + background.shape().to_string());
    }

    const bool resize = h != object.color.height() || w != object.color.width();
    const ImageGrid color = resize ? resize_bilinear(object.color, h, w) : object.color;
    ImageGrid alpha_grid({object.alpha.height(), object.alpha.width(), 1},
                         std::vector<double>(object.alpha.values().begin(), object.alpha.values().end()));
    if (resize) alpha_grid = resize_bilinear(alpha_grid, h, w);

    PasteResult result{background, Mask(background.height(), background.width())};
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double a = alpha_grid.at(y, x, 0);
            const int ty = position.row + y;
            const int tx = position.col + x;
            if (a > kAlphaThreshold) result.mask.at(ty, tx) = 1.0;
            if (a == 0.0) continue;
            for (int c = 0; c < color.channels(); ++c) {
                double& dst = result.reference.at(ty, tx, c);
                const double src = color.at(y, x, c);
                dst = a == 1.0 ? src : dst + a * (src - dst);
            }
        }
    }
    return result;
}

}  // namespace xdc
