"""Converted-measurement Kalman filtering with range rate."""

from ._core import (
    ConversionMethod,
    DegenerateCovariance,
    FilterVariant,
    GaussianBelief,
    NoiseSpec,
    SphericalMeasurement,
    __version__,
    chi_square_bounds,
    consistency_sweep,
    convert_position,
    convert_pseudo,
    decorrelate,
    linearize_pseudo,
    moment_oracle,
    nested_stats,
    simulate,
    unbiased_stats,
)

__all__ = [
    "ConversionMethod",
    "DegenerateCovariance",
    "FilterVariant",
    "GaussianBelief",
    "NoiseSpec",
    "SphericalMeasurement",
    "__version__",
    "chi_square_bounds",
    "consistency_sweep",
    "convert_position",
    "convert_pseudo",
    "decorrelate",
    "linearize_pseudo",
    "moment_oracle",
    "nested_stats",
    "simulate",
    "unbiased_stats",
]
