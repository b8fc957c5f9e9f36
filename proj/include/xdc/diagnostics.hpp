#pragma once

#include <optional>
#include <string>
#include <vector>

#include "xdc/image.hpp"
#include "xdc/sampler.hpp"

namespace xdc {

/// Pixels within `band` 4-connected steps of the mask edge, on either side.
[[nodiscard]] Mask boundary_shell(const Mask& mask, int band);

/// Mean squared high-pass response (x - low_pass(x, 2)) over the boundary shell,
/// averaged over shell pixels and channels. Masks are binarized at 0.5 first.
/// Throws DiagnosticError when band < 1 or the shell is empty.
[[nodiscard]] double boundary_energy(const ImageGrid& x, const Mask& mask, int band);

struct DiagnosticVariant {
    int p_blend;
    BlendSpace blend_space;
    double boundary_energy;
};

/// Runs the composite under p_blend in {0, configured-or-default} and both
/// blend spaces, reporting the boundary energy of each output.
[[nodiscard]] std::vector<DiagnosticVariant> diagnose(const ImageGrid& reference, const Mask& mask,
                                                      const GuidanceConfig& cfg, Denoiser& backend,
                                                      const std::optional<std::string>& condition = {},
                                                      int band = 2);

}  // namespace xdc
