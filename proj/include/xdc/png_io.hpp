#pragma once

#include <filesystem>

#include "xdc/image.hpp"
#include "xdc/paste.hpp"

namespace xdc::io {

// 8-bit samples map to [-1, 1] as v = p / 127.5 - 1; masks map 0..255 to 0..1.

[[nodiscard]] double byte_to_unit(unsigned char p);
[[nodiscard]] unsigned char unit_to_byte(double v);

/// Reads any PNG as a 3-channel RGB grid.
[[nodiscard]] ImageGrid read_rgb(const std::filesystem::path& path);
/// Reads any PNG as colour plus alpha (opaque when the file has none).
[[nodiscard]] RgbaObject read_rgba(const std::filesystem::path& path);
/// Reads any PNG as a grayscale mask in [0, 1].
[[nodiscard]] Mask read_mask(const std::filesystem::path& path);

/// Writes 1-channel grids as grayscale, 3-channel as RGB, 4-channel as RGBA.
void write_image(const std::filesystem::path& path, const ImageGrid& image);
void write_mask(const std::filesystem::path& path, const Mask& mask);

}  // namespace xdc::io
