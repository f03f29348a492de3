"""Closed-form pattern of the one-dimensional cw model.

With only the on-axis mode kept and kappa linear in frequency, the two
amplitudes at difference frequency mu are L sinc(D mu L / 2) up to a
relative phase exp(-i D mu L).  Their overlap integrates to a triangle of
full width |D| L, so for analyzer coefficients (c1, c2)

    R(tau) / baseline = 1 + (2 c1 c2 / (c1^2 + c2^2)) * max(0, 1 - |2 tau / (D L) - 1|).

The sign of c1 c2 decides between a dip and a peak; (45, -45) degrees gives
a full dip with zero at tau = D L / 2.  See docs/oracle_1d.md.
"""

import numpy as np

from ..dispersion import group_delay_mismatch
from ..optics import projection_coeffs


def triangle(tau, width):
    """max(0, 1 - |2 tau / width - 1|); supported on [0, width] for either sign of width."""
    tau = np.asarray(tau, dtype=float)
    if width == 0:
        return np.zeros_like(tau)
    return np.clip(1.0 - np.abs(2.0 * tau / width - 1.0), 0.0, None)


def oracle_1d(tau, crystal, analyzers, omega_degenerate):
    """Normalized coincidence rate of the 1-D cw model at delays ``tau`` (s)."""
    c1, c2 = projection_coeffs(analyzers)
    norm = c1 * c1 + c2 * c2
    width = group_delay_mismatch(crystal, omega_degenerate) * crystal.length
    contrast = 2.0 * c1 * c2 / norm if norm > 0 else 0.0
    out = 1.0 + contrast * triangle(tau, width)
    return float(out) if np.ndim(tau) == 0 else out


def oracle_distances(pattern, crystal, analyzers, omega_degenerate):
    """(L_inf, L2-rms) distance between a normalized pattern and the oracle."""
    diff = pattern.normalized - oracle_1d(pattern.tau, crystal, analyzers, omega_degenerate)
    return float(np.max(np.abs(diff))), float(np.sqrt(np.mean(diff * diff)))
