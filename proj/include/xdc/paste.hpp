#pragma once

#include "xdc/image.hpp"

namespace xdc {

/// Object cut-out: colour plus per-pixel opacity.
struct RgbaObject {
    ImageGrid color;
    Mask alpha;
};

struct PixelOffset {
    int row = 0;
    int col = 0;
};

struct PasteResult {
    ImageGrid reference;
    Mask mask;
};

inline constexpr double kAlphaThreshold = 0.5;

/// Alpha-composites `object`, resized by `scale`, onto `background` with its top-left
/// corner at `position`. The mask is the footprint where the resized alpha exceeds 0.5.
/// Throws PlacementError when the scaled footprint leaves the canvas.
[[nodiscard]] PasteResult paste(const RgbaObject& object, const ImageGrid& background, PixelOffset position,
                                double scale = 1.0);

}  // namespace xdc
