#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "xdc/denoiser.hpp"
#include "xdc/image.hpp"
#include "xdc/resample.hpp"
#include "xdc/rng.hpp"
#include "xdc/schedule.hpp"
#include "xdc/time_mask.hpp"

namespace xdc {

/// Where the masked low-pass blend is applied: the noisy state x_t, or the
/// model's clean prediction x0_hat (so the filter never touches the noise).
enum class BlendSpace { noisy, predicted };
enum class SamplerKind { ddpm, ddim };

[[nodiscard]] std::string to_string(BlendSpace space);   // "xt" | "x0"
[[nodiscard]] std::string to_string(SamplerKind kind);   // "ddpm" | "ddim"
[[nodiscard]] BlendSpace parse_blend_space(const std::string& text);
[[nodiscard]] SamplerKind parse_sampler_kind(const std::string& text);

struct GuidanceConfig {
    // Fraction of the backward steps guided inside / outside the mask.
    double t_in = 0.5;
    double t_out = 1.0;
    // Low-pass factors inside / outside the mask.
    int n_in = 2;
    int n_out = 1;
    // Relative step below which resampling runs, and repetitions per step.
    double r = 0.0;
    int u = 4;
    // Mask feathering in pixels; unset means 4 * max(n_in, n_out).
    std::optional<int> p_blend;
    BlendSpace blend_space = BlendSpace::noisy;
    SamplerKind sampler = SamplerKind::ddpm;
    int steps = 250;
    std::uint64_t seed = 0;
    double guidance_scale = 7.5;

    /// Throws ConfigError on any out-of-range field.
    void validate() const;
    [[nodiscard]] int effective_p_blend() const;
};

/// Blend mask M_b and time mask M_T, both built from the (optionally feathered) input mask.
struct GuidanceMasks {
    Mask blend;
    TimeMask time;
};

[[nodiscard]] GuidanceMasks build_guidance_masks(const Mask& mask, const GuidanceConfig& cfg);

/// Ancestral step: (1/sqrt(alpha_t)) (x_t - (1 - alpha_t)/sqrt(1 - ab_t) eps) + sqrt(sigma_t) z,
/// with z drawn from `rng` for t > 1 and no noise at t = 1.
[[nodiscard]] ImageGrid ddpm_step(const ImageGrid& x_t, const ImageGrid& eps_hat, int t, const NoiseSchedule& sched,
                                  Rng& rng);

/// Deterministic (eta = 0) step: sqrt(ab_{t-1}) x0_hat + sqrt(1 - ab_{t-1}) eps_hat.
[[nodiscard]] ImageGrid ddim_step(const ImageGrid& x_t, const ImageGrid& eps_hat, int t, const NoiseSchedule& sched);

/// The same step from an already formed clean prediction.
[[nodiscard]] ImageGrid ddim_step_from_prediction(const ImageGrid& x0_hat, const ImageGrid& eps_hat, int t,
                                                  const NoiseSchedule& sched);

/// Masked refinement of a proposal x'_{t-1}:
///   x_{t-1} = x' + M_t (phi(y_{t-1}; M_b) - phi(x'; M_b)),
/// with y_{t-1} freshly noised from `reference` using `reference_rng`. The gate is
/// evaluated at t - 1, the index of the state being produced.
[[nodiscard]] ImageGrid guidance_update_xt(const ImageGrid& proposal, const ImageGrid& reference, int t,
                                           const GuidanceConfig& cfg, const GuidanceMasks& masks,
                                           const NoiseSchedule& sched, Rng& reference_rng);

/// Prediction-space variant: blends x0_hat toward the clean reference, re-derives
/// the noise so that (x0', eps') is consistent with x_t, and takes the configured
/// step. Pixels whose gate is closed keep the model's x0_hat and eps_hat untouched.
[[nodiscard]] ImageGrid guidance_update_x0(const ImageGrid& x_t, const ImageGrid& eps_hat,
                                           const ImageGrid& reference, int t, const GuidanceConfig& cfg,
                                           const GuidanceMasks& masks, const NoiseSchedule& sched,
                                           Rng& sampling_rng);

struct StepRecord {
    ScheduleAction action;
    // Pixels whose guidance gate was open for this action (0 for renoise).
    std::size_t guided_pixels = 0;
    // Denoiser evaluations so far, including this action.
    int evaluations = 0;
};

using StepObserver = std::function<void(const StepRecord&, const ImageGrid& state)>;

struct CompositeResult {
    ImageGrid image;
    int evaluations = 0;
};

/// Full guided backward pass from x_T ~ N(0, I) to x_0.
///
/// For every schedule action: denoise with the backend (CFG when a condition is
/// given), apply the configured guidance update, or renoise via q(x_t | x_{t-1}).
/// Backend errors are rethrown with the failing step attached.
[[nodiscard]] CompositeResult run_composite(const ImageGrid& reference, const Mask& mask, const GuidanceConfig& cfg,
                                            Denoiser& backend, const std::optional<std::string>& condition = {},
                                            const StepObserver& observer = {});

}  // namespace xdc
