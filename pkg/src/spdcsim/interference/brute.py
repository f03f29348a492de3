"""Slow reference integrator for tests.

Visits every (omega, x_A, x_B, q) node in plain Python loops and rebuilds
every factor from scalar formulas, with no vectorization, hoisting or
reuse.  It shares only the node sets with the direct integrator, so the two
can be compared on identical grids.
"""

import cmath
import math

from scipy.special import j1

from ..dispersion import C_LIGHT
from ..errors import GridTooLarge
from ..pump import pump_amplitude
from .direct import DirectGrid

MAX_NODES = 100_000


def _pupil_value(y0, y1, ap):
    if ap.kind == "circular":
        return 1.0 if math.hypot(y0, y1) <= ap.size / 2 else 0.0
    if ap.kind == "slit":
        a, b = (y0, y1) if ap.orientation == "x" else (y1, y0)
        return 1.0 if abs(a) <= ap.size / 2 and abs(b) <= ap.length / 2 else 0.0
    return math.exp(-(y0 * y0 + y1 * y1) / ap.size ** 2)


def _pupil_transform(k0, k1, ap):
    if ap.kind == "circular":
        a = ap.size / 2
        u = math.hypot(k0, k1) * a
        jinc = 1.0 if u < 1e-8 else 2.0 * float(j1(u)) / u
        return math.pi * a * a * jinc
    if ap.kind == "slit":
        a, b = (k0, k1) if ap.orientation == "x" else (k1, k0)

        def sinc(v):
            return 1.0 if v == 0 else math.sin(v) / v

        return ap.size * ap.length * sinc(a * ap.size / 2) * sinc(b * ap.length / 2)
    w = ap.size
    return math.pi * w * w * math.exp(-(k0 * k0 + k1 * k1) * w * w / 4)


def _filter_value(omega, filt):
    if filt.kind == "open":
        return 1.0
    if filt.kind == "tophat":
        lo, hi = filt.band_omega
        return 1.0 if lo <= omega <= hi else 0.0
    d = omega - filt.center_omega
    return math.exp(-d * d / (2 * filt.sigma_omega ** 2))


def _arm(point, kind, q, omega, path):
    """Scalar response of one arm to mode (q, omega) at a detector node."""
    c = C_LIGHT
    q2 = q[0] * q[0] + q[1] * q[1]
    if kind == "y":
        phase = -path.d1 * c * q2 / (2 * omega) + point[0] * q[0] + point[1] * q[1]
        amp = 2 * math.pi * c * path.f / omega * abs(_pupil_value(point[0], point[1], path.aperture))
        return amp * _filter_value(omega, path.spectral_filter) * cmath.exp(1j * phase)
    x2 = point[0] * point[0] + point[1] * point[1]
    phase = (
        omega * (path.d1 + path.d2 + path.f) / c
        - omega * x2 * (path.d2 / path.f - 1) / (2 * c * path.f)
        - path.d1 * c * q2 / (2 * omega)
    )
    k0 = omega * point[0] / (c * path.f) - q[0]
    k1 = omega * point[1] / (c * path.f) - q[1]
    return (
        cmath.exp(1j * phase) * _pupil_transform(k0, k1, path.aperture)
        * _filter_value(omega, path.spectral_filter)
    )


def _kernel(scene, q_o, q_e, omega_o, omega_e):
    delta = float(scene.kernel.mismatch_values(q_o, q_e, omega_o, omega_e))
    if math.isnan(delta):
        return 0.0
    length = scene.crystal.length
    half = 0.5 * length * delta
    sinc = 1.0 if half == 0 else math.sin(half) / half
    qp = (q_o[0] + q_e[0], q_o[1] + q_e[1])
    amp = complex(pump_amplitude(qp, omega_o + omega_e, scene.pump))
    return amp * length * sinc * cmath.exp(-1j * half)


def brute_force_rate(tau, scene, grid=None):
    """R(tau) on the direct integrator's nodes (or on ``grid``, a DirectGrid)."""
    grid = grid or DirectGrid(scene, abs(tau))
    if grid.total_nodes > MAX_NODES:
        raise GridTooLarge(f"{grid.total_nodes} nodes exceed the brute-force limit of {MAX_NODES}")
    c1, c2 = scene.coeffs
    path, kind = scene.path, grid.det.kind
    freq, pairs, det = grid.freq, grid.pairs, grid.det
    total = 0.0
    for n in range(freq.size):
        wa, wb = float(freq.omega_a[n]), float(freq.omega_b[n])
        for a in range(det.size):
            xa = det.points[a]
            for b in range(det.size):
                xb = det.points[b]
                g1 = 0j
                g2 = 0j
                for j in range(pairs.size):
                    qo, qe, wq = pairs.q_o[j], pairs.q_e[j], pairs.weight[j]
                    # e photon at A, o photon at B
                    g1 += wq * _kernel(scene, qo, qe, wb, wa) * _arm(xa, kind, qe, wa, path) * _arm(xb, kind, qo, wb, path)
                    # o photon at A, e photon at B
                    g2 += wq * _kernel(scene, qo, qe, wa, wb) * _arm(xa, kind, qo, wa, path) * _arm(xb, kind, qe, wb, path)
                amp = c1 * cmath.exp(1j * wa * tau) * g1 + c2 * cmath.exp(1j * wb * tau) * g2
                total += freq.weight[n] * det.weight[a] * det.weight[b] * abs(amp) ** 2
    return float(total)
