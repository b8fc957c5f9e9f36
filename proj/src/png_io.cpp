#include "xdc/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <vector>

#include "xdc/error.hpp"

namespace xdc::io {

namespace {

struct Raw {
    int height;
    int width;
    int channels;
    std::vector<unsigned char> bytes;
};

Raw read_raw(const std::filesystem::path& path, png_uint_32 format, int channels) {
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&image, path.c_str())) {
        throw IoError("cannot read " + path.string() + ": " + image.message);
    }
    image.format = format;
    Raw raw{static_cast<int>(image.height), static_cast<int>(image.width), channels, {}};
    raw.bytes.resize(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, raw.bytes.data(), 0, nullptr)) {
        std::string message = image.message;
        png_image_free(&image);
        throw IoError("cannot decode " + path.string() + ": " + message);
    }
    return raw;
}

ImageGrid to_grid(const Raw& raw, int channels) {
    ImageGrid grid({raw.height, raw.width, channels});
    for (int y = 0; y < raw.height; ++y) {
        for (int x = 0; x < raw.width; ++x) {
            const std::size_t base = (static_cast<std::size_t>(y) * raw.width + x) * raw.channels;
            for (int c = 0; c < channels; ++c) grid.at(y, x, c) = byte_to_unit(raw.bytes[base + c]);
        }
    }
    return grid;
}

void write_raw(const std::filesystem::path& path, int height, int width, png_uint_32 format,
               const std::vector<unsigned char>& bytes) {
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(width);
    image.height = static_cast<png_uint_32>(height);
    image.format = format;
    if (!png_image_write_to_file(&image, path.c_str(), 0, bytes.data(), 0, nullptr)) {
        throw IoError("cannot write " + path.string() + ": " + image.message);
    }
}

}  // namespace

double byte_to_unit(unsigned char p) { return static_cast<double>(p) / 127.5 - 1.0; }

unsigned char unit_to_byte(double v) {
    const double scaled = std::round((std::clamp(v, -1.0, 1.0) + 1.0) * 127.5);
    return static_cast<unsigned char>(std::clamp(scaled, 0.0, 255.0));
}

ImageGrid read_rgb(const std::filesystem::path& path) { return to_grid(read_raw(path, PNG_FORMAT_RGB, 3), 3); }

RgbaObject read_rgba(const std::filesystem::path& path) {
    const Raw raw = read_raw(path, PNG_FORMAT_RGBA, 4);
    Mask alpha(raw.height, raw.width);
    for (int y = 0; y < raw.height; ++y) {
        for (int x = 0; x < raw.width; ++x) {
            alpha.at(y, x) = raw.bytes[(static_cast<std::size_t>(y) * raw.width + x) * 4 + 3] / 255.0;
        }
    }
    return {to_grid(raw, 3), std::move(alpha)};
}

Mask read_mask(const std::filesystem::path& path) {
    const Raw raw = read_raw(path, PNG_FORMAT_GRAY, 1);
    Mask mask(raw.height, raw.width);
    for (std::size_t i = 0; i < raw.bytes.size(); ++i) mask.values()[i] = raw.bytes[i] / 255.0;
    return mask;
}

void write_image(const std::filesystem::path& path, const ImageGrid& image) {
    png_uint_32 format = 0;
    switch (image.channels()) {
        case 1: format = PNG_FORMAT_GRAY; break;
        case 3: format = PNG_FORMAT_RGB; break;
        case 4: format = PNG_FORMAT_RGBA; break;
        default:
            throw IoError("cannot write a " + std::to_string(image.channels()) + "-channel grid as PNG");
    }
    const int c_count = image.channels();
    std::vector<unsigned char> bytes(image.size());
    for (int y = 0; y < image.height(); ++y) {
        for (int x = 0; x < image.width(); ++x) {
            for (int c = 0; c < c_count; ++c) {
                bytes[(static_cast<std::size_t>(y) * image.width() + x) * c_count + c] =
                    unit_to_byte(image.at(y, x, c));
            }
        }
    }
    write_raw(path, image.height(), image.width(), format, bytes);
}

void write_mask(const std::filesystem::path& path, const Mask& mask) {
    std::vector<unsigned char> bytes(mask.size());
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        bytes[i] = static_cast<unsigned char>(std::lround(std::clamp(mask.values()[i], 0.0, 1.0) * 255.0));
    }
    write_raw(path, mask.height(), mask.width(), PNG_FORMAT_GRAY, bytes);
}

}  // namespace xdc::io
