#include "xdc/diagnostics.hpp"

#include <algorithm>

#include "xdc/error.hpp"
#include "xdc/filter.hpp"
#include "xdc/mask_ops.hpp"

namespace xdc {

Mask boundary_shell(const Mask& mask, int band) {
    if (band < 1) throw DiagnosticError("boundary band must be at least 1 pixel");
    const Mask inside = mask.binarized(0.5);
    Mask outside(inside.height(), inside.width());
    for (std::size_t i = 0; i < inside.size(); ++i) outside.values()[i] = 1.0 - inside.values()[i];

    // Growing each region by `band` reaches the pixels of the other region within that distance.
    Mask grown_in = inside;
    Mask grown_out = outside;
    for (int i = 0; i < band; ++i) {
        grown_in = dilate(grown_in);
        grown_out = dilate(grown_out);
    }
    Mask shell(inside.height(), inside.width());
    for (std::size_t i = 0; i < shell.size(); ++i) {
        const bool near_inside = inside.values()[i] == 0.0 && grown_in.values()[i] == 1.0;
        const bool near_outside = inside.values()[i] == 1.0 && grown_out.values()[i] == 1.0;
        shell.values()[i] = near_inside || near_outside ? 1.0 : 0.0;
    }
    return shell;
}

double boundary_energy(const ImageGrid& x, const Mask& mask, int band) {
    require_same_plane(x.shape(), mask, "boundary_energy");
    const Mask shell = boundary_shell(mask, band);
    const std::size_t count = shell.count_nonzero();
    if (count == 0) throw DiagnosticError("mask has no boundary to measure");
    const ImageGrid smooth = low_pass(x, std::min(2, std::max(x.height(), x.width())));
    double total = 0.0;
    for (int c = 0; c < x.channels(); ++c) {
        const auto xs = x.channel(c);
        const auto ls = smooth.channel(c);
        for (std::size_t i = 0; i < shell.size(); ++i) {
            if (shell.values()[i] == 0.0) continue;
            const double d = xs[i] - ls[i];
            total += d * d;
        }
    }
    return total / (static_cast<double>(count) * x.channels());
}

std::vector<DiagnosticVariant> diagnose(const ImageGrid& reference, const Mask& mask, const GuidanceConfig& cfg,
                                        Denoiser& backend, const std::optional<std::string>& condition, int band) {
    int blended = cfg.effective_p_blend();
    if (blended == 0) blended = 4 * std::max(cfg.n_in, cfg.n_out);
    std::vector<DiagnosticVariant> report;
    for (const int p_blend : {0, blended}) {
        for (const BlendSpace space : {BlendSpace::noisy, BlendSpace::predicted}) {
            GuidanceConfig variant = cfg;
            variant.p_blend = p_blend;
            variant.blend_space = space;
            const CompositeResult result = run_composite(reference, mask, variant, backend, condition);
            report.push_back({p_blend, space, boundary_energy(result.image, mask, band)});
        }
    }
    return report;
}

}  // namespace xdc
