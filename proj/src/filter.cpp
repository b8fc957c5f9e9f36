#include "xdc/filter.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "xdc/error.hpp"

namespace xdc {

int reflect_index(int i, int n) {
    if (n == 1) return 0;
    const int period = 2 * n;
    int m = i % period;
    if (m < 0) m += period;
    return m < n ? m : period - 1 - m;
}

namespace {

int round_up(int v, int factor) { return (v + factor - 1) / factor * factor; }

void validate_factor(const GridShape& shape, int factor) {
    if (factor < 1 || factor > std::max(shape.height, shape.width)) {
        throw InvalidFilterError("filter factor " + std::to_string(factor) + " invalid for grid " +
                                 shape.to_string());
    }
}

struct Tap {
    int lo;
    int hi;
    double frac;
};

// Source taps for half-pixel-centred resampling of n_src samples onto n_dst.
std::vector<Tap> bilinear_taps(int n_src, int n_dst) {
    std::vector<Tap> taps(static_cast<std::size_t>(n_dst));
    const double ratio = static_cast<double>(n_src) / static_cast<double>(n_dst);
    for (int i = 0; i < n_dst; ++i) {
        double s = (i + 0.5) * ratio - 0.5;
        s = std::clamp(s, 0.0, static_cast<double>(n_src - 1));
        const int lo = static_cast<int>(std::floor(s));
        const int hi = std::min(lo + 1, n_src - 1);
        taps[static_cast<std::size_t>(i)] = {lo, hi, s - lo};
    }
    return taps;
}

// a + f * (b - a) keeps constants and f = 0 exact.
inline double lerp_exact(double a, double b, double f) { return f == 0.0 ? a : a + f * (b - a); }

}  // namespace

ImageGrid box_downsample(const ImageGrid& x, int factor) {
    validate_factor(x.shape(), factor);
    const int h = x.height();
    const int w = x.width();
    const int out_h = round_up(h, factor) / factor;
    const int out_w = round_up(w, factor) / factor;
    ImageGrid out({out_h, out_w, x.channels()});
    const double cell = static_cast<double>(factor) * static_cast<double>(factor);
    for (int c = 0; c < x.channels(); ++c) {
        for (int by = 0; by < out_h; ++by) {
            for (int bx = 0; bx < out_w; ++bx) {
                // Accumulate deviations from the first sample so a constant block averages exactly.
                const double anchor = x.at(reflect_index(by * factor, h), reflect_index(bx * factor, w), c);
                double acc = 0.0;
                for (int dy = 0; dy < factor; ++dy) {
                    const int sy = reflect_index(by * factor + dy, h);
                    for (int dx = 0; dx < factor; ++dx) {
                        acc += x.at(sy, reflect_index(bx * factor + dx, w), c) - anchor;
                    }
                }
                out.at(by, bx, c) = anchor + acc / cell;
            }
        }
    }
    return out;
}

ImageGrid resize_bilinear(const ImageGrid& x, int height, int width) {
    if (height < 1 || width < 1) throw ShapeError("resize target must be positive");
    const auto row_taps = bilinear_taps(x.height(), height);
    const auto col_taps = bilinear_taps(x.width(), width);
    ImageGrid out({height, width, x.channels()});
    for (int c = 0; c < x.channels(); ++c) {
        for (int y = 0; y < height; ++y) {
            const Tap& ty = row_taps[static_cast<std::size_t>(y)];
            for (int xo = 0; xo < width; ++xo) {
                const Tap& tx = col_taps[static_cast<std::size_t>(xo)];
                const double top = lerp_exact(x.at(ty.lo, tx.lo, c), x.at(ty.lo, tx.hi, c), tx.frac);
                const double bottom = lerp_exact(x.at(ty.hi, tx.lo, c), x.at(ty.hi, tx.hi, c), tx.frac);
                out.at(y, xo, c) = lerp_exact(top, bottom, ty.frac);
            }
        }
    }
    return out;
}

ImageGrid low_pass(const ImageGrid& x, int factor) {
    validate_factor(x.shape(), factor);
    if (factor == 1) return x;
    const ImageGrid coarse = box_downsample(x, factor);
    const ImageGrid padded = resize_bilinear(coarse, coarse.height() * factor, coarse.width() * factor);
    if (padded.height() == x.height() && padded.width() == x.width()) return padded;
    ImageGrid out(x.shape());
    for (int c = 0; c < x.channels(); ++c) {
        for (int y = 0; y < x.height(); ++y) {
            for (int xo = 0; xo < x.width(); ++xo) out.at(y, xo, c) = padded.at(y, xo, c);
        }
    }
    return out;
}

ImageGrid blend_filter(const ImageGrid& x, const Mask& blend, int factor_in, int factor_out) {
    require_same_plane(x.shape(), blend, "blend_filter");
    ImageGrid inner = low_pass(x, factor_in);
    if (factor_in == factor_out) return inner;
    const ImageGrid outer = low_pass(x, factor_out);
    const auto weights = blend.values();
    const std::size_t plane = x.shape().plane_size();
    for (int c = 0; c < x.channels(); ++c) {
        auto in = inner.channel(c);
        const auto out = outer.channel(c);
        for (std::size_t i = 0; i < plane; ++i) {
            const double m = weights[i];
            if (m == 1.0) continue;
            in[i] = m == 0.0 ? out[i] : out[i] + m * (in[i] - out[i]);
        }
    }
    return inner;
}

}  // namespace xdc
