#pragma once

#include "xdc/image.hpp"

namespace xdc {

/// Low-pass operator phi_N: N x N box-average downsample followed by a
/// half-pixel-centred, edge-clamped bilinear upsample back to the input size.
///
/// Axes not divisible by N are padded by edge-inclusive reflection before the
/// downsample and cropped after the upsample. N = 1 is the identity.
/// Throws InvalidFilterError unless 1 <= N <= max(H, W).
[[nodiscard]] ImageGrid low_pass(const ImageGrid& x, int factor);

/// Combined filter M_b * phi_in(x) + (1 - M_b) * phi_out(x), per channel.
[[nodiscard]] ImageGrid blend_filter(const ImageGrid& x, const Mask& blend, int factor_in, int factor_out);

/// Box-average downsample by an integer factor (with reflection padding).
[[nodiscard]] ImageGrid box_downsample(const ImageGrid& x, int factor);

/// Half-pixel-centred bilinear resize to an arbitrary size, edge-clamped.
[[nodiscard]] ImageGrid resize_bilinear(const ImageGrid& x, int height, int width);

/// Maps any integer index onto [0, n) by edge-inclusive mirroring.
[[nodiscard]] int reflect_index(int i, int n);

}  // namespace xdc
