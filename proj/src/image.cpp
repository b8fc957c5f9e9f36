#include "xdc/image.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "xdc/error.hpp"

namespace xdc {

std::string GridShape::to_string() const {
    std::ostringstream os;
    os << height << "x" << width << "x" << channels;
    return os.str();
}

namespace {

void validate_shape(const GridShape& shape) {
    if (shape.height < 1 || shape.width < 1 || shape.channels < 1) {
        throw ShapeError("grid dimensions must be positive, got " + shape.to_string());
    }
}

}  // namespace

ImageGrid::ImageGrid(GridShape shape, double fill) : shape_(shape) {
    validate_shape(shape_);
    data_.assign(shape_.size(), fill);
}

ImageGrid::ImageGrid(GridShape shape, std::vector<double> data) : shape_(shape), data_(std::move(data)) {
    validate_shape(shape_);
    if (data_.size() != shape_.size()) {
        throw ShapeError("grid " + shape_.to_string() + " needs " + std::to_string(shape_.size()) +
                         " values, got " + std::to_string(data_.size()));
    }
}

std::span<double> ImageGrid::channel(int c) {
    return std::span<double>(data_).subspan(static_cast<std::size_t>(c) * shape_.plane_size(), shape_.plane_size());
}

std::span<const double> ImageGrid::channel(int c) const {
    return std::span<const double>(data_).subspan(static_cast<std::size_t>(c) * shape_.plane_size(),
                                                  shape_.plane_size());
}

bool ImageGrid::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

ImageGrid& ImageGrid::operator+=(const ImageGrid& other) {
    require_same_shape(shape_, other.shape_, "grid addition");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

ImageGrid& ImageGrid::operator-=(const ImageGrid& other) {
    require_same_shape(shape_, other.shape_, "grid subtraction");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

ImageGrid& ImageGrid::operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
}

ImageGrid operator+(ImageGrid a, const ImageGrid& b) { return a += b; }
ImageGrid operator-(ImageGrid a, const ImageGrid& b) { return a -= b; }
ImageGrid operator*(ImageGrid a, double s) { return a *= s; }
ImageGrid operator*(double s, ImageGrid a) { return a *= s; }

Mask::Mask(int height, int width, double fill) : height_(height), width_(width) {
    if (height < 1 || width < 1) throw ShapeError("mask dimensions must be positive");
    data_.assign(static_cast<std::size_t>(height) * static_cast<std::size_t>(width), fill);
}

Mask::Mask(int height, int width, std::vector<double> data)
    : height_(height), width_(width), data_(std::move(data)) {
    if (height < 1 || width < 1) throw ShapeError("mask dimensions must be positive");
    if (data_.size() != static_cast<std::size_t>(height) * static_cast<std::size_t>(width)) {
        throw ShapeError("mask data length does not match " + std::to_string(height) + "x" + std::to_string(width));
    }
    for (double v : data_) {
        if (!(v >= 0.0 && v <= 1.0)) throw MaskError("mask values must lie in [0, 1]");
    }
}

bool Mask::is_binary() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return v == 0.0 || v == 1.0; });
}

std::size_t Mask::count_nonzero() const {
    return static_cast<std::size_t>(std::count_if(data_.begin(), data_.end(), [](double v) { return v != 0.0; }));
}

Mask Mask::binarized(double threshold) const {
    Mask out(height_, width_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] > threshold ? 1.0 : 0.0;
    return out;
}

void require_same_plane(const GridShape& shape, const Mask& mask, const char* what) {
    if (!mask.matches(shape)) {
        throw ShapeError(std::string(what) + ": mask is " + std::to_string(mask.height()) + "x" +
                         std::to_string(mask.width()) + " but grid is " + shape.to_string());
    }
}

void require_same_shape(const GridShape& a, const GridShape& b, const char* what) {
    if (!(a == b)) throw ShapeError(std::string(what) + ": shape " + a.to_string() + " vs " + b.to_string());
}

}  // namespace xdc
