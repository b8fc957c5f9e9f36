#pragma once

// Independent low-pass reference: builds the separable down/up operators as
// dense matrices and applies them as matrix products, sharing no code with the
// library's resampler.

#include <cmath>
#include <vector>

#include "xdc/image.hpp"

namespace xdc::testing {

using Matrix = std::vector<std::vector<double>>;

// Mirror index with the edge sample repeated: ... b a | a b c | c b ...
inline int mirror(int i, int n) {
    while (i < 0 || i >= n) {
        if (i < 0) i = -i - 1;
        if (i >= n) i = 2 * n - i - 1;
    }
    return i;
}

// (n_pad / N) x n matrix: average N consecutive samples of the reflected signal.
inline Matrix down_matrix(int n, int factor) {
    const int padded = (n + factor - 1) / factor * factor;
    Matrix m(static_cast<std::size_t>(padded / factor), std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (int k = 0; k < padded / factor; ++k) {
        for (int j = 0; j < factor; ++j) m[k][mirror(k * factor + j, n)] += 1.0 / factor;
    }
    return m;
}

// n x (n_pad / N) matrix: half-pixel-centred linear interpolation with clamping, then crop.
inline Matrix up_matrix(int n, int factor) {
    const int coarse = (n + factor - 1) / factor;
    Matrix m(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(coarse), 0.0));
    for (int i = 0; i < n; ++i) {
        const double s = std::fmin(std::fmax((i + 0.5) / factor - 0.5, 0.0), coarse - 1.0);
        const int lo = static_cast<int>(std::floor(s));
        const int hi = lo + 1 < coarse ? lo + 1 : coarse - 1;
        m[i][lo] += 1.0 - (s - lo);
        m[i][hi] += s - lo;
    }
    return m;
}

inline Matrix multiply(const Matrix& a, const Matrix& b) {
    Matrix out(a.size(), std::vector<double>(b.front().size(), 0.0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t k = 0; k < b.size(); ++k) {
            for (std::size_t j = 0; j < b.front().size(); ++j) out[i][j] += a[i][k] * b[k][j];
        }
    }
    return out;
}

inline ImageGrid reference_low_pass(const ImageGrid& x, int factor) {
    const Matrix rows = multiply(up_matrix(x.height(), factor), down_matrix(x.height(), factor));
    const Matrix cols = multiply(up_matrix(x.width(), factor), down_matrix(x.width(), factor));
    ImageGrid out(x.shape());
    for (int c = 0; c < x.channels(); ++c) {
        for (int y = 0; y < x.height(); ++y) {
            for (int xo = 0; xo < x.width(); ++xo) {
                double acc = 0.0;
                for (int sy = 0; sy < x.height(); ++sy) {
                    if (rows[y][sy] == 0.0) continue;
                    for (int sx = 0; sx < x.width(); ++sx) acc += rows[y][sy] * cols[xo][sx] * x.at(sy, sx, c);
                }
                out.at(y, xo, c) = acc;
            }
        }
    }
    return out;
}

}  // namespace xdc::testing
