#include "xdc/rng.hpp"

namespace xdc {

namespace {

std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint32_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffU), static_cast<std::uint32_t>(seed >> 32),
                      stream};
    return std::mt19937_64(seq);
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint32_t stream) : engine_(seeded_engine(seed, stream)) {}

void Rng::fill_normal(ImageGrid& grid) {
    for (double& v : grid.values()) v = normal();
}

ImageGrid Rng::normal_grid(const GridShape& shape) {
    ImageGrid grid(shape);
    fill_normal(grid);
    return grid;
}

}  // namespace xdc
