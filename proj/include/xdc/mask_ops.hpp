#pragma once

#include <functional>

#include "xdc/image.hpp"

namespace xdc {

/// Monotone map [0, 1] -> [0, 1] with s(0) = 0 and s(1) = 1.
using SmoothingFunction = std::function<double(double)>;

inline double linear_smoothing(double x) { return x; }

/// One-pixel dilation: each pixel takes the max over itself and its 4-neighbours.
[[nodiscard]] Mask dilate(const Mask& mask);

/// Feathers a binary mask outwards only.
///
/// Accumulates (s((p+1)/p_blend) - s(p/p_blend)) * Dilate^p(M) for p = 0 .. p_blend-1,
/// so the original support stays exactly 1 and shell d receives 1 - s(d/p_blend).
/// p_blend = 0 returns the mask unchanged. Throws MaskError for non-binary input
/// and ConfigError for a negative p_blend or an invalid smoothing function.
[[nodiscard]] Mask blur_outwards(const Mask& mask, int p_blend, const SmoothingFunction& smoothing = linear_smoothing);

}  // namespace xdc
