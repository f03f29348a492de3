"""Coincidence-rate integrators, delay sweeps and pattern metrics."""

from .brute import brute_force_rate
from .direct import amplitude_at
from .oracle import oracle_1d, oracle_distances
from .pattern import (
    InterferencePattern,
    asymmetry,
    convergence_report,
    pattern_sweep,
    visibility,
)
from .rate import coincidence_rate, spectral_terms
from .scene import GridSpec, Scene

__all__ = [
    "GridSpec",
    "InterferencePattern",
    "Scene",
    "amplitude_at",
    "asymmetry",
    "brute_force_rate",
    "coincidence_rate",
    "convergence_report",
    "oracle_1d",
    "oracle_distances",
    "pattern_sweep",
    "spectral_terms",
    "visibility",
]
