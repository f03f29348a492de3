"""Delay sweeps and the scalar metrics of a coincidence pattern."""

from dataclasses import dataclass, field

import numpy as np
from scipy.ndimage import uniform_filter1d

from ..errors import DegeneratePattern
from .rate import grid_sizes, refinable_dimensions, spectral_terms

SMOOTHING = 5
BASELINE_FRACTION = 0.10
MIN_VISIBILITY = 0.01
CONVERGENCE_TOL = 1e-3


def dip_center(rate):
    """Index of the minimum of the 5-point moving average."""
    smooth = uniform_filter1d(np.asarray(rate, dtype=float), SMOOTHING, mode="nearest")
    return int(np.argmin(smooth))


def baseline_indices(tau, center):
    """The 10% of samples farthest from the dip centre (at least one)."""
    tau = np.asarray(tau, dtype=float)
    count = max(1, int(round(BASELINE_FRACTION * tau.size)))
    order = np.argsort(-np.abs(tau - tau[center]), kind="stable")
    return np.sort(order[:count])


def normalize(tau, rate):
    """(normalized rate, baseline, dip-centre index)."""
    rate = np.asarray(rate, dtype=float)
    center = dip_center(rate)
    base = float(np.mean(rate[baseline_indices(tau, center)]))
    if not abs(base) > 1e-300 or not np.isfinite(base):
        raise DegeneratePattern("pattern baseline is zero")
    return rate / base, base, center


@dataclass(frozen=True)
class InterferencePattern:
    tau: np.ndarray
    raw: np.ndarray
    normalized: np.ndarray
    baseline: float
    center: int
    grid: dict = field(default_factory=dict)
    convergence: dict = None

    @classmethod
    def from_rates(cls, tau, raw, **extra):
        tau = np.asarray(tau, dtype=float)
        raw = np.asarray(raw, dtype=float)
        norm, base, center = normalize(tau, raw)
        return cls(tau, raw, norm, base, center, **extra)

    @property
    def dip_tau(self):
        return float(self.tau[self.center])

    @property
    def visibility(self):
        return visibility(self)

    @property
    def asymmetry(self):
        """S, or None when no dip can be identified."""
        try:
            return asymmetry(self)
        except DegeneratePattern:
            return None


def visibility(pattern):
    """V = (baseline - min) / baseline, clipped to [0, 1]."""
    if not abs(pattern.baseline) > 1e-300:
        raise DegeneratePattern("pattern baseline is zero")
    v = 1.0 - float(np.min(pattern.normalized))
    return min(1.0, max(0.0, v))


def asymmetry(pattern):
    """Mirror asymmetry about the dip centre over the pairs inside the window."""
    if visibility(pattern) < MIN_VISIBILITY:
        raise DegeneratePattern("no identifiable dip (visibility below 0.01)")
    r, c = pattern.normalized, pattern.center
    k = min(c, r.size - 1 - c)
    if k == 0:
        raise DegeneratePattern("dip centre sits on the edge of the sweep window")
    plus = r[c + 1:c + k + 1]
    minus = r[c - 1::-1][:k]
    total = np.sum(plus + minus)
    if not total > 0:
        raise DegeneratePattern("mirrored samples sum to zero")
    return float(np.sum(np.abs(plus - minus)) / total)


def tau_grid(tau_start, tau_stop, n_steps):
    if not isinstance(n_steps, (int, np.integer)) or n_steps < 2:
        raise ValueError(f"n_steps must be an integer >= 2, got {n_steps!r}")
    if not tau_stop > tau_start:
        raise ValueError("tau_stop must exceed tau_start")
    return np.linspace(tau_start, tau_stop, int(n_steps))


def _rates(tau, scene, method, threads):
    c1, c2 = scene.coeffs
    reach = float(np.max(np.abs(tau)))
    return spectral_terms(scene, method, threads, tau_reach=reach).rate(tau, c1, c2)


def convergence_report(tau, scene, method="auto", threads=1, reference=None):
    """Max change of the normalized pattern when each grid dimension is doubled."""
    if reference is None:
        reference = normalize(tau, _rates(tau, scene, method, threads))[0]
    report = {}
    for name in refinable_dimensions(scene, method):
        fine = scene.replace(grid=scene.grid.doubled(name))
        norm = normalize(tau, _rates(tau, fine, method, threads))[0]
        report[name] = float(np.max(np.abs(norm - reference)))
    return report


def pattern_sweep(tau_start, tau_stop, n_steps, scene, method="auto", threads=1, convergence=False):
    """Sample R on an evenly spaced delay grid and normalize it.

    With ``convergence`` the pattern also carries the refinement report of
    :func:`convergence_report`.
    """
    tau = tau_grid(tau_start, tau_stop, n_steps)
    raw = _rates(tau, scene, method, threads)
    pattern = InterferencePattern.from_rates(
        tau, raw, grid=grid_sizes(scene, method, float(np.max(np.abs(tau))))
    )
    if convergence:
        report = convergence_report(tau, scene, method, threads, reference=pattern.normalized)
        pattern = InterferencePattern(
            pattern.tau, pattern.raw, pattern.normalized, pattern.baseline, pattern.center,
            pattern.grid, report,
        )
    return pattern
