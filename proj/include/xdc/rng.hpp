#pragma once

#include <cstdint>
#include <random>

#include "xdc/image.hpp"

namespace xdc {

/// Seeded standard-normal stream. A (seed, stream) pair always yields the
/// same sequence; different stream ids give independent sequences.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint32_t stream = 0);

    double normal() { return normal_(engine_); }
    double uniform() { return uniform_(engine_); }
    void fill_normal(ImageGrid& grid);
    [[nodiscard]] ImageGrid normal_grid(const GridShape& shape);

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

// Stream ids used by a composite run.
inline constexpr std::uint32_t kSamplingStream = 0;
inline constexpr std::uint32_t kReferenceStream = 1;

}  // namespace xdc
