#include "xdc/denoiser.hpp"

#include "xdc/error.hpp"

namespace xdc {

ImageGrid cfg_combine(const ImageGrid& eps_uncond, const ImageGrid& eps_cond, double scale) {
    require_same_shape(eps_uncond.shape(), eps_cond.shape(), "cfg_combine");
    // (1 - g) u + g c: same value as u + g (c - u), exact at g = 0 and g = 1.
    ImageGrid out(eps_uncond.shape());
    const auto u = eps_uncond.values();
    const auto c = eps_cond.values();
    auto o = out.values();
    const double keep = 1.0 - scale;
    for (std::size_t i = 0; i < o.size(); ++i) o[i] = keep * u[i] + scale * c[i];
    return out;
}

ImageGrid guided_noise(const NoisePrediction& prediction, double scale) {
    if (!prediction.conditional) return prediction.unconditional;
    return cfg_combine(prediction.unconditional, *prediction.conditional, scale);
}

}  // namespace xdc
