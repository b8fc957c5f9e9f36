#include <gtest/gtest.h>

#include <cmath>

#include "support/grids.hpp"
#include "xdc/error.hpp"
#include "xdc/mask_ops.hpp"

namespace xdc {
namespace {

// Shell index of every pixel: 0 on the mask, d if first reached by the d-th
// dilation, -1 if never reached within `limit` dilations. Breadth-first, so it
// shares nothing with dilate().
std::vector<int> shell_distance(const Mask& m, int limit) {
    const int h = m.height();
    const int w = m.width();
    std::vector<int> dist(m.size(), -1);
    std::vector<std::pair<int, int>> frontier;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (m.at(y, x) == 1.0) {
                dist[static_cast<std::size_t>(y * w + x)] = 0;
                frontier.emplace_back(y, x);
            }
        }
    }
    for (int d = 1; d <= limit && !frontier.empty(); ++d) {
        std::vector<std::pair<int, int>> next;
        for (auto [y, x] : frontier) {
            const int dy[] = {-1, 1, 0, 0};
            const int dx[] = {0, 0, -1, 1};
            for (int k = 0; k < 4; ++k) {
                const int ny = y + dy[k];
                const int nx = x + dx[k];
                if (ny < 0 || nx < 0 || ny >= h || nx >= w) continue;
                auto& slot = dist[static_cast<std::size_t>(ny * w + nx)];
                if (slot < 0) {
                    slot = d;
                    next.emplace_back(ny, nx);
                }
            }
        }
        frontier = std::move(next);
    }
    return dist;
}

TEST(Dilate, CenterPixelBecomesPlus) {
    Mask m(3, 3);
    m.at(1, 1) = 1.0;
    const Mask d = dilate(m);
    EXPECT_EQ(d, Mask(3, 3, std::vector<double>{0, 1, 0, 1, 1, 1, 0, 1, 0}));
    EXPECT_EQ(dilate(Mask(4, 4)), Mask(4, 4));
}

TEST(Dilate, DiagonalPixelsByEnumeration) {
    // Two diagonal pixels are separate 4-connected components. One dilation
    // grows each into a plus; the plusses share (1,2) and (2,1), so the union
    // is 8 pixels and the diagonal corners (0,0), (3,3), (0,2), (2,0) stay empty.
    Mask m(4, 4);
    m.at(1, 1) = 1.0;
    m.at(2, 2) = 1.0;
    EXPECT_EQ(shell_distance(m, 0)[1 * 4 + 2], -1);
    const Mask d = dilate(m);
    const Mask expect(4, 4, std::vector<double>{0, 1, 0, 0,
                                                1, 1, 1, 0,
                                                0, 1, 1, 1,
                                                0, 0, 1, 0});
    EXPECT_EQ(d, expect);
    EXPECT_EQ(d.count_nonzero(), 8U);
}

TEST(BlurOutwards, HandTracedRow) {
    const Mask m(1, 5, std::vector<double>{0, 0, 1, 0, 0});
    EXPECT_EQ(blur_outwards(m, 2), Mask(1, 5, std::vector<double>{0, 0.5, 1, 0.5, 0}));
}

TEST(BlurOutwards, TrivialCases) {
    const Mask m = testing::random_binary_mask(7, 9, 3);
    EXPECT_EQ(blur_outwards(m, 0), m);
    const Mask ones(5, 5, 1.0);
    EXPECT_EQ(blur_outwards(ones, 6), ones);
    EXPECT_EQ(blur_outwards(ones, 3, [](double x) { return x * x; }), ones);
}

TEST(BlurOutwards, Errors) {
    EXPECT_THROW((void)blur_outwards(Mask(2, 2, 0.5), 2), MaskError);
    EXPECT_THROW((void)blur_outwards(Mask(2, 2), -1), ConfigError);
    EXPECT_THROW((void)blur_outwards(Mask(2, 2), 2, [](double x) { return 0.5 * x; }), ConfigError);
    EXPECT_THROW((void)blur_outwards(Mask(2, 2), 2, [](double x) { return 1.0 - x; }), ConfigError);
}

class BlurOutwardsProperties : public ::testing::TestWithParam<int> {};

TEST_P(BlurOutwardsProperties, HoldOnRandomMasks) {
    const int p_blend = GetParam();
    for (unsigned seed = 0; seed < 100; ++seed) {
        const int h = 12 + static_cast<int>(seed % 13);
        const int w = 10 + static_cast<int>(seed % 17);
        const Mask m = testing::random_binary_mask(h, w, 1000 + seed, 0.02 + 0.003 * (seed % 20));
        const Mask out = blur_outwards(m, p_blend);
        const std::vector<int> dist = shell_distance(m, p_blend + 1);
        for (std::size_t i = 0; i < m.size(); ++i) {
            const double v = out.values()[i];
            const int d = dist[i];
            if (d == 0) {
                ASSERT_EQ(v, 1.0) << "interior seed=" << seed;
            } else if (d < 0 || d > p_blend) {
                ASSERT_EQ(v, 0.0) << "support seed=" << seed;
            } else {
                // Linear smoothing: shell d carries 1 - d / p_blend.
                ASSERT_NEAR(v, 1.0 - static_cast<double>(d) / p_blend, 1e-12) << "shell seed=" << seed;
            }
        }
        // Monotone decay: a pixel never exceeds its closer 4-neighbours.
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x + 1 < w; ++x) {
                const auto a = static_cast<std::size_t>(y * w + x);
                const auto b = a + 1;
                if (dist[a] >= 0 && dist[b] >= 0 && dist[a] < dist[b]) {
                    ASSERT_GE(out.values()[a], out.values()[b]);
                }
                if (dist[a] >= 0 && dist[b] >= 0 && dist[b] < dist[a]) {
                    ASSERT_GE(out.values()[b], out.values()[a]);
                }
            }
        }
    }
}

INSTANTIATE_TEST_SUITE_P(PBlend, BlurOutwardsProperties, ::testing::Values(1, 5, 15));

TEST(BlurOutwards, NonlinearSmoothingShells) {
    const Mask m(1, 9, std::vector<double>{0, 0, 0, 0, 1, 0, 0, 0, 0});
    const Mask out = blur_outwards(m, 4, [](double x) { return x * x; });
    for (int d = 1; d <= 3; ++d) {
        const double expect = 1.0 - std::pow(d / 4.0, 2);
        EXPECT_NEAR(out.at(0, 4 + d), expect, 1e-12);
        EXPECT_NEAR(out.at(0, 4 - d), expect, 1e-12);
    }
    EXPECT_EQ(out.at(0, 0), 0.0);
}

}  // namespace
}  // namespace xdc
