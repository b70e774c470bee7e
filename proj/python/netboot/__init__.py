"""Bootstrap inference for means of network-dependent processes."""

from ._core import (
    NetbootError,
    bootstrap,
    coverage,
    denseness,
    dependence_transform_rate,
    diagnostics,
    distances,
    dwb_variance,
    hac,
    overlap_weights,
    psd_repair,
    quantile,
    simulate,
)

__all__ = [
    "NetbootError",
    "bootstrap",
    "coverage",
    "denseness",
    "dependence_transform_rate",
    "diagnostics",
    "distances",
    "dwb_variance",
    "hac",
    "overlap_weights",
    "psd_repair",
    "quantile",
    "simulate",
]
