#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "xdc/image.hpp"

namespace xdc {

/// Per-step noise levels sigma_t, alpha_t = 1 - sigma_t and alpha_bar_t = prod_{s<=t} alpha_s.
/// Arrays have T + 1 entries; index 0 is clean data (sigma_0 = 0, alpha_bar_0 = 1).
class NoiseSchedule {
public:
    /// Linear sigma ramp from 1e-4 * (1000 / T) to 0.02 * (1000 / T), clamped to 0.999.
    [[nodiscard]] static NoiseSchedule linear(int steps);

    /// Explicit sigma_1..sigma_T, each in [0, 1). Zero entries give flat alpha_bar segments.
    [[nodiscard]] static NoiseSchedule from_sigmas(std::span<const double> sigmas);

    [[nodiscard]] int steps() const { return static_cast<int>(sigma_.size()) - 1; }
    [[nodiscard]] double sigma(int t) const { return sigma_.at(static_cast<std::size_t>(t)); }
    [[nodiscard]] double alpha(int t) const { return alpha_.at(static_cast<std::size_t>(t)); }
    [[nodiscard]] double alpha_bar(int t) const { return alpha_bar_.at(static_cast<std::size_t>(t)); }

    [[nodiscard]] std::span<const double> sigmas() const { return sigma_; }
    [[nodiscard]] std::span<const double> alphas() const { return alpha_; }
    [[nodiscard]] std::span<const double> alpha_bars() const { return alpha_bar_; }

    /// `key = value` lines; doubles printed with round-trip precision.
    [[nodiscard]] std::string to_config_block() const;
    /// FNV-1a over the raw bytes of the three arrays.
    [[nodiscard]] std::uint64_t digest() const;

private:
    explicit NoiseSchedule(std::vector<double> sigma);

    std::vector<double> sigma_;
    std::vector<double> alpha_;
    std::vector<double> alpha_bar_;
};

/// x_t = sqrt(alpha_bar_t) x0 + sqrt(1 - alpha_bar_t) eps, for 0 <= t <= T.
[[nodiscard]] ImageGrid forward_noise(const ImageGrid& x0, int t, const ImageGrid& eps, const NoiseSchedule& sched);

/// x0_hat = x_t / sqrt(alpha_bar_t) - sqrt(1 - alpha_bar_t) eps_hat / sqrt(alpha_bar_t), for 1 <= t <= T.
[[nodiscard]] ImageGrid predict_x0(const ImageGrid& x_t, const ImageGrid& eps_hat, int t, const NoiseSchedule& sched);

/// Noise consistent with (x_t, x0): (x_t - sqrt(alpha_bar_t) x0) / sqrt(1 - alpha_bar_t).
[[nodiscard]] ImageGrid eps_from_x0(const ImageGrid& x_t, const ImageGrid& x0, int t, const NoiseSchedule& sched);

/// One forward transition q(x_t | x_{t-1}) = N(sqrt(1 - sigma_t) x_{t-1}, sigma_t I) driven by z.
[[nodiscard]] ImageGrid renoise(const ImageGrid& x_prev, int t, const ImageGrid& z, const NoiseSchedule& sched);

// FNV-1a, used for reproducibility digests.
[[nodiscard]] std::uint64_t fnv1a(std::span<const unsigned char> bytes, std::uint64_t seed = 1469598103934665603ULL);

}  // namespace xdc
