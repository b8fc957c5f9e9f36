#include "xdc/app/tiling.hpp"

#include <algorithm>
#include <array>
#include <cstdint>

#include "xdc/error.hpp"

namespace xdc::app {

namespace {

constexpr int kGlyphWidth = 3;
constexpr int kGlyphHeight = 5;
constexpr int kGap = 2;
constexpr int kPad = 3;
constexpr int kFontScale = 2;
constexpr double kPaper = 1.0;
constexpr double kInk = -1.0;

// Rows top to bottom, three bits each, most significant bit leftmost.
std::array<std::uint8_t, kGlyphHeight> glyph(char c) {
    switch (c) {
        case '0': return {7, 5, 5, 5, 7};
        case '1': return {2, 6, 2, 2, 7};
        case '2': return {7, 1, 7, 4, 7};
        case '3': return {7, 1, 7, 1, 7};
        case '4': return {5, 5, 7, 1, 1};
        case '5': return {7, 4, 7, 1, 7};
        case '6': return {7, 4, 7, 5, 7};
        case '7': return {7, 1, 1, 1, 1};
        case '8': return {7, 5, 7, 5, 7};
        case '9': return {7, 5, 7, 1, 7};
        case '.': return {0, 0, 0, 0, 2};
        case '=': return {0, 7, 0, 7, 0};
        case '_': return {0, 0, 0, 0, 7};
        case '-': return {0, 0, 7, 0, 0};
        case 't': return {2, 7, 2, 2, 3};
        case 'i': return {2, 0, 2, 2, 2};
        case 'n': return {0, 6, 5, 5, 5};
        case 'r': return {0, 5, 6, 4, 4};
        case 'E': return {7, 4, 7, 4, 7};
        case 'R': return {6, 5, 6, 5, 5};
        default: return {0, 0, 0, 0, 0};
    }
}

void fill(ImageGrid& g, int y0, int x0, int h, int w, double v) {
    for (int c = 0; c < g.channels(); ++c) {
        for (int y = std::max(0, y0); y < std::min(g.height(), y0 + h); ++y) {
            for (int x = std::max(0, x0); x < std::min(g.width(), x0 + w); ++x) g.at(y, x, c) = v;
        }
    }
}

}  // namespace

int text_width(std::string_view text, int scale) {
    if (text.empty()) return 0;
    return static_cast<int>(text.size()) * (kGlyphWidth + 1) * scale - scale;
}

int text_height(int scale) { return kGlyphHeight * scale; }

void draw_text(ImageGrid& canvas, int y, int x, std::string_view text, int scale, double ink) {
    for (char ch : text) {
        const auto rows = glyph(ch);
        for (int gy = 0; gy < kGlyphHeight; ++gy) {
            for (int gx = 0; gx < kGlyphWidth; ++gx) {
                if (rows[static_cast<std::size_t>(gy)] & (4 >> gx)) fill(canvas, y + gy * scale, x + gx * scale, scale, scale, ink);
            }
        }
        x += (kGlyphWidth + 1) * scale;
    }
}

ImageGrid tile_grid(const std::vector<std::optional<ImageGrid>>& cells, const TileLayout& layout,
                    const GridShape& cell_shape) {
    if (layout.rows < 1 || layout.cols < 1 || cells.size() != static_cast<std::size_t>(layout.rows * layout.cols)) {
        throw ShapeError("tile layout does not match the number of cells");
    }
    int left = 0;
    for (const auto& label : layout.row_labels) left = std::max(left, text_width(label, kFontScale));
    if (left > 0) left += 2 * kPad;
    bool any_col_label = false;
    for (const auto& label : layout.col_labels) any_col_label = any_col_label || !label.empty();
    const int top = any_col_label ? text_height(kFontScale) + 2 * kPad : 0;

    const int height = top + layout.rows * cell_shape.height + (layout.rows + 1) * kGap;
    const int width = left + layout.cols * cell_shape.width + (layout.cols + 1) * kGap;
    ImageGrid canvas({height, width, cell_shape.channels}, kPaper);

    auto cell_y = [&](int r) { return top + kGap + r * (cell_shape.height + kGap); };
    auto cell_x = [&](int c) { return left + kGap + c * (cell_shape.width + kGap); };

    for (int c = 0; c < layout.cols && c < static_cast<int>(layout.col_labels.size()); ++c) {
        draw_text(canvas, kPad, cell_x(c), layout.col_labels[static_cast<std::size_t>(c)], kFontScale, kInk);
    }
    for (int r = 0; r < layout.rows && r < static_cast<int>(layout.row_labels.size()); ++r) {
        draw_text(canvas, cell_y(r), kPad, layout.row_labels[static_cast<std::size_t>(r)], kFontScale, kInk);
    }
    for (int r = 0; r < layout.rows; ++r) {
        for (int c = 0; c < layout.cols; ++c) {
            const auto& cell = cells[static_cast<std::size_t>(r * layout.cols + c)];
            const int y0 = cell_y(r);
            const int x0 = cell_x(c);
            if (!cell) {
                fill(canvas, y0, x0, cell_shape.height, cell_shape.width, 0.0);
                draw_text(canvas, y0 + kPad, x0 + kPad, "ERR", kFontScale, kInk);
                continue;
            }
            require_same_shape(cell->shape(), cell_shape, "sweep cell");
            for (int ch = 0; ch < cell_shape.channels; ++ch) {
                for (int y = 0; y < cell_shape.height; ++y) {
                    for (int x = 0; x < cell_shape.width; ++x) canvas.at(y0 + y, x0 + x, ch) = cell->at(y, x, ch);
                }
            }
        }
    }
    return canvas;
}

}  // namespace xdc::app
