#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace xdc {

struct GridShape {
    int height = 0;
    int width = 0;
    int channels = 0;

    [[nodiscard]] std::size_t plane_size() const {
        return static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
    }
    [[nodiscard]] std::size_t size() const { return plane_size() * static_cast<std::size_t>(channels); }
    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const GridShape&, const GridShape&) = default;
};

/// H x W x C grid of reals, stored planar: one row-major plane per channel.
///
/// Carries noisy states x_t, clean predictions, and reference images alike.
/// Pixel-space grids live in [-1, 1]; latent grids are unconstrained.
class ImageGrid {
public:
    explicit ImageGrid(GridShape shape, double fill = 0.0);
    ImageGrid(GridShape shape, std::vector<double> data);

    [[nodiscard]] const GridShape& shape() const { return shape_; }
    [[nodiscard]] int height() const { return shape_.height; }
    [[nodiscard]] int width() const { return shape_.width; }
    [[nodiscard]] int channels() const { return shape_.channels; }
    [[nodiscard]] std::size_t size() const { return data_.size(); }

    double& at(int y, int x, int c) { return data_[index(y, x, c)]; }
    [[nodiscard]] double at(int y, int x, int c) const { return data_[index(y, x, c)]; }

    [[nodiscard]] std::span<double> values() { return data_; }
    [[nodiscard]] std::span<const double> values() const { return data_; }

    [[nodiscard]] std::span<double> channel(int c);
    [[nodiscard]] std::span<const double> channel(int c) const;

    [[nodiscard]] bool all_finite() const;

    ImageGrid& operator+=(const ImageGrid& other);
    ImageGrid& operator-=(const ImageGrid& other);
    ImageGrid& operator*=(double s);

    friend bool operator==(const ImageGrid&, const ImageGrid&) = default;

private:
    [[nodiscard]] std::size_t index(int y, int x, int c) const {
        return static_cast<std::size_t>(c) * shape_.plane_size() +
               static_cast<std::size_t>(y) * static_cast<std::size_t>(shape_.width) +
               static_cast<std::size_t>(x);
    }

    GridShape shape_;
    std::vector<double> data_;
};

ImageGrid operator+(ImageGrid a, const ImageGrid& b);
ImageGrid operator-(ImageGrid a, const ImageGrid& b);
ImageGrid operator*(ImageGrid a, double s);
ImageGrid operator*(double s, ImageGrid a);

/// H x W weights in [0, 1] gating a grid of the same spatial size.
class Mask {
public:
    Mask(int height, int width, double fill = 0.0);
    Mask(int height, int width, std::vector<double> data);

    [[nodiscard]] int height() const { return height_; }
    [[nodiscard]] int width() const { return width_; }
    [[nodiscard]] std::size_t size() const { return data_.size(); }

    double& at(int y, int x) { return data_[index(y, x)]; }
    [[nodiscard]] double at(int y, int x) const { return data_[index(y, x)]; }

    [[nodiscard]] std::span<double> values() { return data_; }
    [[nodiscard]] std::span<const double> values() const { return data_; }

    [[nodiscard]] bool is_binary() const;
    [[nodiscard]] std::size_t count_nonzero() const;
    [[nodiscard]] bool matches(const GridShape& shape) const {
        return shape.height == height_ && shape.width == width_;
    }

    /// Values above threshold become 1, the rest 0.
    [[nodiscard]] Mask binarized(double threshold = 0.5) const;

    friend bool operator==(const Mask&, const Mask&) = default;

private:
    [[nodiscard]] std::size_t index(int y, int x) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    int height_;
    int width_;
    std::vector<double> data_;
};

// Throws ShapeError unless the mask covers the grid's spatial extent.
void require_same_plane(const GridShape& shape, const Mask& mask, const char* what);
void require_same_shape(const GridShape& a, const GridShape& b, const char* what);

}  // namespace xdc
