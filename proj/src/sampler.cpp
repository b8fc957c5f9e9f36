#include "xdc/sampler.hpp"

#include <algorithm>
#include <cmath>

#include "xdc/error.hpp"
#include "xdc/filter.hpp"
#include "xdc/mask_ops.hpp"

namespace xdc {

std::string to_string(BlendSpace space) { return space == BlendSpace::noisy ? "xt" : "x0"; }

std::string to_string(SamplerKind kind) { return kind == SamplerKind::ddpm ? "ddpm" : "ddim"; }

BlendSpace parse_blend_space(const std::string& text) {
    if (text == "xt") return BlendSpace::noisy;
    if (text == "x0") return BlendSpace::predicted;
    throw ConfigError("blend space must be 'xt' or 'x0', got '" + text + "'");
}

SamplerKind parse_sampler_kind(const std::string& text) {
    if (text == "ddpm") return SamplerKind::ddpm;
    if (text == "ddim") return SamplerKind::ddim;
    throw ConfigError("sampler must be 'ddpm' or 'ddim', got '" + text + "'");
}

void GuidanceConfig::validate() const {
    auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!unit(t_in)) throw ConfigError("t_in must lie in [0, 1]");
    if (!unit(t_out)) throw ConfigError("t_out must lie in [0, 1]");
    if (!unit(r)) throw ConfigError("r must lie in [0, 1]");
    if (n_in < 1 || n_out < 1) throw ConfigError("n_in and n_out must be positive");
    if (u < 1) throw ConfigError("u must be at least 1");
    if (p_blend && *p_blend < 0) throw ConfigError("p_blend must be non-negative");
    if (steps < 1) throw ConfigError("steps must be at least 1");
    if (!std::isfinite(guidance_scale) || guidance_scale < 0.0) throw ConfigError("guidance scale must be >= 0");
}

int GuidanceConfig::effective_p_blend() const { return p_blend.value_or(4 * std::max(n_in, n_out)); }

GuidanceMasks build_guidance_masks(const Mask& mask, const GuidanceConfig& cfg) {
    if (!mask.is_binary()) throw MaskError("guidance masks are built from a binary mask");
    const int p_blend = cfg.effective_p_blend();
    Mask blend = p_blend > 0 ? blur_outwards(mask, p_blend) : mask;
    TimeMask time = build_time_mask(blend, cfg.t_in, cfg.t_out, cfg.steps);
    return {std::move(blend), std::move(time)};
}

ImageGrid ddpm_step(const ImageGrid& x_t, const ImageGrid& eps_hat, int t, const NoiseSchedule& sched, Rng& rng) {
    require_same_shape(x_t.shape(), eps_hat.shape(), "ddpm_step");
    if (t < 1 || t > sched.steps()) throw StepError("ddpm step " + std::to_string(t) + " out of range");
    const double scale = 1.0 / std::sqrt(sched.alpha(t));
    const double eps_coef = sched.sigma(t) / std::sqrt(1.0 - sched.alpha_bar(t));
    ImageGrid out(x_t.shape());
    const auto xs = x_t.values();
    const auto es = eps_hat.values();
    auto os = out.values();
    for (std::size_t i = 0; i < os.size(); ++i) os[i] = scale * (xs[i] - eps_coef * es[i]);
    if (t > 1) {
        const double noise = std::sqrt(sched.sigma(t));
        for (double& v : os) v += noise * rng.normal();
    }
    return out;
}

ImageGrid ddim_step_from_prediction(const ImageGrid& x0_hat, const ImageGrid& eps_hat, int t,
                                   const NoiseSchedule& sched) {
    require_same_shape(x0_hat.shape(), eps_hat.shape(), "ddim_step");
    if (t < 1 || t > sched.steps()) throw StepError("ddim step " + std::to_string(t) + " out of range");
    const double ab_prev = sched.alpha_bar(t - 1);
    const double signal = std::sqrt(ab_prev);
    const double noise = std::sqrt(1.0 - ab_prev);
    ImageGrid out(x0_hat.shape());
    const auto xs = x0_hat.values();
    const auto es = eps_hat.values();
    auto os = out.values();
    for (std::size_t i = 0; i < os.size(); ++i) os[i] = signal * xs[i] + noise * es[i];
    return out;
}

ImageGrid ddim_step(const ImageGrid& x_t, const ImageGrid& eps_hat, int t, const NoiseSchedule& sched) {
    return ddim_step_from_prediction(predict_x0(x_t, eps_hat, t, sched), eps_hat, t, sched);
}

namespace {

void require_masks_fit(const GridShape& shape, const GuidanceMasks& masks) {
    require_same_plane(shape, masks.blend, "guidance blend mask");
    if (masks.time.height() != shape.height || masks.time.width() != shape.width) {
        throw ShapeError("guidance time mask does not match grid " + shape.to_string());
    }
}

// phi(target) + (source - phi(source)) on every pixel whose gate is open at `index`.
void refine_open_pixels(ImageGrid& source, const ImageGrid& filtered_target, const ImageGrid& filtered_source,
                        const TimeMask& time, int index) {
    const std::size_t plane = source.shape().plane_size();
    const auto& thresholds = time.thresholds();
    for (int c = 0; c < source.channels(); ++c) {
        auto s = source.channel(c);
        const auto a = filtered_target.channel(c);
        const auto b = filtered_source.channel(c);
        for (std::size_t i = 0; i < plane; ++i) {
            if (index >= thresholds[i]) s[i] = a[i] + (s[i] - b[i]);
        }
    }
}

}  // namespace

ImageGrid guidance_update_xt(const ImageGrid& proposal, const ImageGrid& reference, int t, const GuidanceConfig& cfg,
                             const GuidanceMasks& masks, const NoiseSchedule& sched, Rng& reference_rng) {
    require_same_shape(proposal.shape(), reference.shape(), "guidance_update_xt");
    require_masks_fit(proposal.shape(), masks);
    if (t < 1 || t > sched.steps()) throw StepError("guidance step " + std::to_string(t) + " out of range");
    const int index = t - 1;
    if (!masks.time.any_open(index)) return proposal;

    const ImageGrid eps = reference_rng.normal_grid(reference.shape());
    const ImageGrid noised_reference = forward_noise(reference, index, eps, sched);
    const ImageGrid target = blend_filter(noised_reference, masks.blend, cfg.n_in, cfg.n_out);
    const ImageGrid filtered = blend_filter(proposal, masks.blend, cfg.n_in, cfg.n_out);
    ImageGrid out = proposal;
    refine_open_pixels(out, target, filtered, masks.time, index);
    return out;
}

ImageGrid guidance_update_x0(const ImageGrid& x_t, const ImageGrid& eps_hat, const ImageGrid& reference, int t,
                             const GuidanceConfig& cfg, const GuidanceMasks& masks, const NoiseSchedule& sched,
                             Rng& sampling_rng) {
    require_same_shape(x_t.shape(), reference.shape(), "guidance_update_x0");
    require_masks_fit(x_t.shape(), masks);
    const int index = t - 1;
    ImageGrid x0_hat = predict_x0(x_t, eps_hat, t, sched);

    if (!masks.time.any_open(index)) {
        return cfg.sampler == SamplerKind::ddpm ? ddpm_step(x_t, eps_hat, t, sched, sampling_rng)
                                                : ddim_step_from_prediction(x0_hat, eps_hat, t, sched);
    }

    const ImageGrid target = blend_filter(reference, masks.blend, cfg.n_in, cfg.n_out);
    const ImageGrid filtered = blend_filter(x0_hat, masks.blend, cfg.n_in, cfg.n_out);
    refine_open_pixels(x0_hat, target, filtered, masks.time, index);

    // Re-derive the noise on guided pixels so the step sees a consistent (x0', eps') pair.
    const double ab = sched.alpha_bar(t);
    const double noise = std::sqrt(1.0 - ab);
    const double x_coef = 1.0 / noise;
    const double x0_coef = -std::sqrt(ab) / noise;
    ImageGrid eps = eps_hat;
    const std::size_t plane = x_t.shape().plane_size();
    const auto& thresholds = masks.time.thresholds();
    for (int c = 0; c < x_t.channels(); ++c) {
        auto e = eps.channel(c);
        const auto xs = x_t.channel(c);
        const auto x0s = x0_hat.channel(c);
        for (std::size_t i = 0; i < plane; ++i) {
            if (index >= thresholds[i]) e[i] = x_coef * xs[i] + x0_coef * x0s[i];
        }
    }
    return cfg.sampler == SamplerKind::ddpm ? ddpm_step(x_t, eps, t, sched, sampling_rng)
                                            : ddim_step_from_prediction(x0_hat, eps, t, sched);
}

namespace {

template <class F>
auto with_step_context(int t, F&& call) {
    const std::string where = "step " + std::to_string(t) + ": ";
    try {
        return call();
    } catch (const TransportError& e) {
        throw TransportError(where + e.what());
    } catch (const ProtocolError& e) {
        throw ProtocolError(where + e.what());
    } catch (const RemoteError& e) {
        throw RemoteError(where + e.what());
    }
}

}  // namespace

CompositeResult run_composite(const ImageGrid& reference, const Mask& mask, const GuidanceConfig& cfg,
                              Denoiser& backend, const std::optional<std::string>& condition,
                              const StepObserver& observer) {
    cfg.validate();
    require_same_shape(backend.grid_shape(), reference.shape(), "backend grid vs reference");
    require_same_plane(reference.shape(), mask, "composite mask");
    if (backend.step_count() != cfg.steps) {
        throw ConfigError("backend runs " + std::to_string(backend.step_count()) + " steps but config asks for " +
                          std::to_string(cfg.steps));
    }
    const int largest = std::max(reference.height(), reference.width());
    if (cfg.n_in > largest || cfg.n_out > largest) {
        throw InvalidFilterError("filter factors exceed grid " + reference.shape().to_string());
    }

    const NoiseSchedule sched = NoiseSchedule::linear(cfg.steps);
    const GuidanceMasks masks = build_guidance_masks(mask, cfg);
    const ResampleSchedule plan = ResampleSchedule::build(cfg.steps, cfg.r, cfg.u);
    Rng sampling_rng(cfg.seed, kSamplingStream);
    Rng reference_rng(cfg.seed, kReferenceStream);

    ImageGrid x = sampling_rng.normal_grid(reference.shape());
    int evaluations = 0;
    for (const ScheduleAction& action : plan.actions()) {
        const int t = action.step;
        StepRecord record{action, 0, evaluations};
        if (action.direction == Direction::denoise) {
            NoisePrediction prediction = with_step_context(
                t, [&] { return backend.predict(DenoiserRequest{x, t, condition, cfg.guidance_scale}); });
            record.evaluations = ++evaluations;
            const ImageGrid eps = guided_noise(prediction, cfg.guidance_scale);
            if (!(eps.shape() == x.shape())) {
                throw ProtocolError("step " + std::to_string(t) + ": backend returned grid " +
                                    eps.shape().to_string());
            }
            record.guided_pixels = masks.time.open_count(t - 1);
            if (cfg.blend_space == BlendSpace::noisy) {
                const ImageGrid proposal = cfg.sampler == SamplerKind::ddpm ? ddpm_step(x, eps, t, sched, sampling_rng)
                                                                            : ddim_step(x, eps, t, sched);
                x = guidance_update_xt(proposal, reference, t, cfg, masks, sched, reference_rng);
            } else {
                x = guidance_update_x0(x, eps, reference, t, cfg, masks, sched, sampling_rng);
            }
        } else {
            const ImageGrid z = sampling_rng.normal_grid(x.shape());
            x = renoise(x, t, z, sched);
        }
        if (!x.all_finite()) throw Error("non-finite state after step " + std::to_string(t));
        if (observer) observer(record, x);
    }
    return {std::move(x), evaluations};
}

}  // namespace xdc
