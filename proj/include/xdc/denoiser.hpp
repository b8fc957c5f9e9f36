#pragma once

#include <optional>
#include <string>

#include "xdc/image.hpp"

namespace xdc {

/// One noise-prediction query eps_theta(x_t, t, condition).
struct DenoiserRequest {
    ImageGrid x_t;
    int step = 1;
    // Opaque to the engine; interpreted by the backend.
    std::optional<std::string> condition;
    double guidance_scale = 0.0;
};

/// Backends answer with the unconditional prediction and, when a condition
/// was supplied and understood, the conditional one as well.
struct NoisePrediction {
    ImageGrid unconditional;
    std::optional<ImageGrid> conditional;
};

class Denoiser {
public:
    virtual ~Denoiser() = default;

    [[nodiscard]] virtual GridShape grid_shape() const = 0;
    [[nodiscard]] virtual int step_count() const = 0;
    [[nodiscard]] virtual NoisePrediction predict(const DenoiserRequest& request) = 0;
};

/// Classifier-free guidance: eps_u + g (eps_c - eps_u).
[[nodiscard]] ImageGrid cfg_combine(const ImageGrid& eps_uncond, const ImageGrid& eps_cond, double scale);

/// The noise estimate the sampler consumes: CFG when a conditional branch exists.
[[nodiscard]] ImageGrid guided_noise(const NoisePrediction& prediction, double scale);

}  // namespace xdc
