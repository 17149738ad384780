"""Amdahl-law modelling of parallelized sequential computing systems."""

from .errors import (
    AmdahlLensError,
    DegenerateInstanceError,
    InconsistentMeasurementError,
    ModelInfeasibleError,
)
from .model import (
    AlphaEstimate,
    AlphaSource,
    ContributionLabel,
    ContributionSet,
    SystemConfig,
    alpha_from_efficiency,
    alpha_from_speedup,
    efficiency,
    payload_performance,
    payload_performance_split,
    speedup,
)

__version__ = "0.1.0"

__all__ = [
    "AlphaEstimate",
    "AlphaSource",
    "AmdahlLensError",
    "ContributionLabel",
    "ContributionSet",
    "DegenerateInstanceError",
    "InconsistentMeasurementError",
    "ModelInfeasibleError",
    "SystemConfig",
    "alpha_from_efficiency",
    "alpha_from_speedup",
    "efficiency",
    "payload_performance",
    "payload_performance_split",
    "speedup",
]
