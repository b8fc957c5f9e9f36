#include <gtest/gtest.h>

#include <cmath>

#include "support/grids.hpp"
#include "xdc/error.hpp"
#include "xdc/rng.hpp"
#include "xdc/schedule.hpp"

namespace xdc {
namespace {

// Computed offline with a 50-digit mpmath cumulative product of (1 - sigma_t)
// over the pinned linear ramp, sharing nothing with this library.
constexpr double kAlphaBar50 = 7.7447656992267373096e-6;
constexpr double kAlphaBar250 = 0.000032644091354907278546;
constexpr double kAlphaBar1000 = 0.000040358297653756833148;

TEST(NoiseSchedule, RejectsNonPositiveSteps) {
    EXPECT_THROW((void)NoiseSchedule::linear(0), ScheduleError);
    EXPECT_THROW((void)NoiseSchedule::linear(-3), ScheduleError);
}

TEST(NoiseSchedule, SingleStep) {
    const NoiseSchedule s = NoiseSchedule::linear(1);
    EXPECT_EQ(s.steps(), 1);
    EXPECT_EQ(s.alpha_bar(1), s.alpha(1));
    EXPECT_DOUBLE_EQ(s.alpha_bar(1), 0.9);
}

TEST(NoiseSchedule, InvariantsHoldForManyLengths) {
    for (int steps : {1, 2, 5, 10, 20, 21, 50, 100, 250, 1000}) {
        const NoiseSchedule s = NoiseSchedule::linear(steps);
        ASSERT_EQ(s.sigmas().size(), static_cast<std::size_t>(steps) + 1);
        ASSERT_EQ(s.alpha_bars().size(), static_cast<std::size_t>(steps) + 1);
        EXPECT_EQ(s.alpha_bar(0), 1.0);
        for (int t = 1; t <= steps; ++t) {
            EXPECT_GT(s.alpha(t), 0.0);
            EXPECT_LT(s.alpha(t), 1.0);
            EXPECT_LT(s.alpha_bar(t), s.alpha_bar(t - 1)) << "T=" << steps << " t=" << t;
        }
        if (steps > 1) EXPECT_LT(s.alpha_bar(steps), s.alpha_bar(1));
    }
}

TEST(NoiseSchedule, FrozenTerminalAlphaBar) {
    EXPECT_NEAR(NoiseSchedule::linear(50).alpha_bar(50) / kAlphaBar50, 1.0, 1e-10);
    EXPECT_NEAR(NoiseSchedule::linear(250).alpha_bar(250) / kAlphaBar250, 1.0, 1e-10);
    EXPECT_NEAR(NoiseSchedule::linear(1000).alpha_bar(1000) / kAlphaBar1000, 1.0, 1e-10);
}

TEST(NoiseSchedule, FromSigmasValidates) {
    const std::vector<double> bad{0.1, 1.0};
    EXPECT_THROW((void)NoiseSchedule::from_sigmas(bad), ScheduleError);
    const std::vector<double> ok{0.1, 0.0, 0.2};
    const NoiseSchedule s = NoiseSchedule::from_sigmas(ok);
    EXPECT_EQ(s.alpha_bar(2), s.alpha_bar(1));
}

TEST(NoiseSchedule, ConfigBlockAndDigestAreStable) {
    const NoiseSchedule a = NoiseSchedule::linear(50);
    const NoiseSchedule b = NoiseSchedule::linear(50);
    EXPECT_EQ(a.to_config_block(), b.to_config_block());
    EXPECT_EQ(a.digest(), b.digest());
    EXPECT_NE(a.digest(), NoiseSchedule::linear(51).digest());
    EXPECT_NE(a.to_config_block().find("schedule.steps = 50"), std::string::npos);
}

TEST(ForwardNoise, Endpoints) {
    const NoiseSchedule s = NoiseSchedule::linear(50);
    const ImageGrid x0 = testing::random_grid({4, 4, 3}, 1);
    const ImageGrid eps = testing::random_grid({4, 4, 3}, 2);
    EXPECT_EQ(forward_noise(x0, 0, eps, s), x0);
    const ImageGrid zero({4, 4, 3});
    const ImageGrid scaled = forward_noise(x0, 17, zero, s);
    for (std::size_t i = 0; i < x0.size(); ++i) {
        EXPECT_DOUBLE_EQ(scaled.values()[i], std::sqrt(s.alpha_bar(17)) * x0.values()[i]);
    }
    EXPECT_THROW((void)forward_noise(x0, 51, eps, s), StepError);
    EXPECT_THROW((void)forward_noise(x0, -1, eps, s), StepError);
    EXPECT_THROW((void)forward_noise(x0, 3, ImageGrid({4, 4, 1}), s), ShapeError);
}

TEST(ForwardNoise, MonteCarloVariance) {
    const NoiseSchedule s = NoiseSchedule::linear(250);
    Rng rng(2024);
    const ImageGrid zero({1, 1, 1});
    for (int t : {1, 10, 125, 250}) {
        double sum = 0.0;
        double sum_sq = 0.0;
        const int draws = 10000;
        for (int i = 0; i < draws; ++i) {
            const double v = forward_noise(zero, t, rng.normal_grid(zero.shape()), s).values()[0];
            sum += v;
            sum_sq += v * v;
        }
        const double mean = sum / draws;
        const double var = sum_sq / draws - mean * mean;
        const double expected = 1.0 - s.alpha_bar(t);
        EXPECT_NEAR(var / expected, 1.0, 0.05) << "t=" << t;
    }
}

TEST(PredictX0, InvertsForwardNoiseAtEveryStep) {
    for (int steps : {50, 250}) {
        const NoiseSchedule s = NoiseSchedule::linear(steps);
        const ImageGrid x0 = testing::random_grid({6, 5, 3}, 11);
        const ImageGrid eps = testing::random_grid({6, 5, 3}, 12, -3.0, 3.0);
        for (int t = 1; t <= steps; ++t) {
            const ImageGrid back = predict_x0(forward_noise(x0, t, eps, s), eps, t, s);
            ASSERT_LT(testing::max_abs_diff(back, x0), 1e-6) << "T=" << steps << " t=" << t;
        }
    }
}

TEST(PredictX0, ZeroNoiseAndRange) {
    const NoiseSchedule s = NoiseSchedule::linear(20);
    const ImageGrid x = testing::random_grid({3, 3, 1}, 4);
    const ImageGrid out = predict_x0(x, ImageGrid(x.shape()), 9, s);
    for (std::size_t i = 0; i < x.size(); ++i) EXPECT_DOUBLE_EQ(out.values()[i], x.values()[i] / std::sqrt(s.alpha_bar(9)));
    EXPECT_THROW((void)predict_x0(x, x, 0, s), StepError);
    EXPECT_THROW((void)predict_x0(x, x, 21, s), StepError);
}

TEST(PredictX0, MatchesDirectFormula) {
    const int steps = 250;
    const NoiseSchedule s = NoiseSchedule::linear(steps);
    const ImageGrid x = testing::random_grid({5, 5, 2}, 21, -2.0, 2.0);
    const ImageGrid e = testing::random_grid({5, 5, 2}, 22, -2.0, 2.0);
    const int t = steps / 2;
    // Schedule rebuilt from scratch: ramp, clamp, running product.
    double ab = 1.0;
    for (int k = 1; k <= t; ++k) {
        const double lo = 1e-4 * 1000.0 / steps;
        const double hi = 0.02 * 1000.0 / steps;
        ab *= 1.0 - (lo + (hi - lo) * (k - 1) / (steps - 1));
    }
    const ImageGrid out = predict_x0(x, e, t, s);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double expect = (x.values()[i] - std::sqrt(1.0 - ab) * e.values()[i]) / std::sqrt(ab);
        EXPECT_NEAR(out.values()[i], expect, 1e-9);
    }
}

TEST(EpsFromX0, ConsistentWithForwardNoise) {
    const NoiseSchedule s = NoiseSchedule::linear(50);
    const ImageGrid x0 = testing::random_grid({4, 4, 1}, 31);
    const ImageGrid eps = testing::random_grid({4, 4, 1}, 32);
    for (int t : {1, 25, 50}) {
        EXPECT_LT(testing::max_abs_diff(eps_from_x0(forward_noise(x0, t, eps, s), x0, t, s), eps), 1e-9);
    }
}

TEST(Renoise, OneStepKernel) {
    const NoiseSchedule s = NoiseSchedule::linear(50);
    const ImageGrid x = testing::random_grid({2, 2, 1}, 41);
    const ImageGrid z = testing::random_grid({2, 2, 1}, 42);
    const ImageGrid out = renoise(x, 7, z, s);
    for (std::size_t i = 0; i < x.size(); ++i) {
        EXPECT_DOUBLE_EQ(out.values()[i], std::sqrt(s.alpha(7)) * x.values()[i] + std::sqrt(s.sigma(7)) * z.values()[i]);
    }
}

}  // namespace
}  // namespace xdc
