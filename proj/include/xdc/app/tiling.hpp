#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xdc/image.hpp"

namespace xdc::app {

/// Draws `text` with a 3x5 bitmap font, each font pixel `scale` x `scale`,
/// top-left at (y, x). Characters outside the font advance without ink.
void draw_text(ImageGrid& canvas, int y, int x, std::string_view text, int scale, double ink);
[[nodiscard]] int text_width(std::string_view text, int scale);
[[nodiscard]] int text_height(int scale);

struct TileLayout {
    int rows = 1;
    int cols = 1;
    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;
};

/// Tiles row-major cells into one image with labelled margins on the top and
/// left. Missing cells (failed runs) are drawn grey and marked ERR.
[[nodiscard]] ImageGrid tile_grid(const std::vector<std::optional<ImageGrid>>& cells, const TileLayout& layout,
                                  const GridShape& cell_shape);

}  // namespace xdc::app
