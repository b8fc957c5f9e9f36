"""Guided-diffusion compositing engine (numpy bindings).

Grids are float64 arrays shaped (H, W, C); masks are (H, W).
"""

from ._xdc import (
    ConfigError,
    DiagnosticError,
    GuidanceConfig,
    InvalidFilterError,
    MaskError,
    NoiseSchedule,
    ShapeError,
    XdcError,
    blend_filter,
    blur_outwards,
    boundary_energy,
    composite_oracle,
    dilate,
    forward_noise,
    low_pass,
    oracle_posterior_mean,
    predict_x0,
    resample_actions,
    time_mask_thresholds,
)

__all__ = [
    "ConfigError",
    "DiagnosticError",
    "GuidanceConfig",
    "InvalidFilterError",
    "MaskError",
    "NoiseSchedule",
    "ShapeError",
    "XdcError",
    "blend_filter",
    "blur_outwards",
    "boundary_energy",
    "composite_oracle",
    "dilate",
    "forward_noise",
    "low_pass",
    "oracle_posterior_mean",
    "predict_x0",
    "resample_actions",
    "time_mask_thresholds",
]
