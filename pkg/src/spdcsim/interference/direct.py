"""Direct quadrature over transverse mode pairs.

Handles everything the bucket integrator does not: gaussian pumps,
finite-area detectors, and point amplitudes.  The transverse integrals are
plain sums over mode pairs, so Fresnel phases must be resolved by the
q-grid; this is meant for modest geometries and for cross-checks.

Per frequency pair the two-photon amplitude at detector nodes (a, b) is

    G1[a, b] = sum_j KA(a, q_e_j; w_A) Phi(q_o_j, q_e_j; w_B, w_A) w_j KB(b, q_o_j; w_B)

(e photon at A), and G2 the same with the o and e roles exchanged.  In
matrix form G = KA diag(Phi w) KB^T.
"""

import numpy as np

from ..dispersion import C_LIGHT
from ..optics import filter_F, pupil, transfer_H
from ..pump import pump_amplitude
from .grids import detector_nodes, frequency_nodes, mode_pairs

# cap on complex entries held per chunk (keeps memory near 100 MB)
_MAX_ENTRIES = 4_000_000


def _arm_kernel(points, kind, q, omega, path):
    """KA[n, a, j] for nodes a, mode wavevectors q_j and frequencies omega_n."""
    x = points[None, :, None, :]
    qq = q[None, None, :, :]
    w = omega[:, None, None]
    if kind == "x":
        return transfer_H(x, qq, w, path)
    # aperture-plane form of a bucket detector: Parseval of |H|^2 over x
    f = filter_F(omega, path.spectral_filter)[:, None, None]
    amp = np.abs(pupil(points, path.aperture))[None, :, None]
    q2 = np.sum(q * q, axis=-1)[None, None, :]
    phase = -path.d1 * C_LIGHT * q2 / (2 * w) + np.sum(x * qq, axis=-1)
    return (2 * np.pi * C_LIGHT * path.f / w) * f * amp * np.exp(1j * phase)


def _phi(kernel, q_o, q_e, omega_o, omega_e, pump):
    delta = kernel.mismatch_values(q_o[None], q_e[None], omega_o[:, None], omega_e[:, None])
    bad = np.isnan(delta)
    amp = pump_amplitude((q_o + q_e)[None], (omega_o + omega_e)[:, None], pump)
    phi = kernel.phi_from_mismatch(np.where(bad, 0.0, delta), amp)
    return np.where(bad, 0.0, phi), bad


def chunk_size(scene, n_det, n_pairs):
    return max(1, min(scene.grid.chunk, _MAX_ENTRIES // max(1, n_det * n_pairs)))


class DirectGrid:
    """All node sets of the direct integrator (shared with the brute-force check)."""

    def __init__(self, scene, tau_reach=0.0):
        self.freq = frequency_nodes(scene, tau_reach)
        omega_max = float(max(self.freq.omega_a.max(), self.freq.omega_b.max()))
        self.pairs = mode_pairs(scene, omega_max)
        self.det = detector_nodes(scene)

    @property
    def total_nodes(self):
        return self.freq.size * self.det.size ** 2 * self.pairs.size


def amplitudes(scene, grid, index):
    """G1, G2 with shapes (n, Na, Nb) and the evanescent-exclusion counts."""
    kernel, path = scene.kernel, scene.path
    wa, wb = grid.freq.omega_a[index], grid.freq.omega_b[index]
    q_o, q_e, wq = grid.pairs.q_o, grid.pairs.q_e, grid.pairs.weight
    pts, kind = grid.det.points, grid.det.kind
    phi1, bad1 = _phi(kernel, q_o, q_e, wb, wa, scene.pump)
    phi2, bad2 = _phi(kernel, q_o, q_e, wa, wb, scene.pump)
    g1 = np.einsum(
        "naj,nj,nbj->nab",
        _arm_kernel(pts, kind, q_e, wa, path), phi1 * wq, _arm_kernel(pts, kind, q_o, wb, path),
    )
    g2 = np.einsum(
        "naj,nj,nbj->nab",
        _arm_kernel(pts, kind, q_o, wa, path), phi2 * wq, _arm_kernel(pts, kind, q_e, wb, path),
    )
    return g1, g2, int(bad1.sum() + bad2.sum()), bad1.size + bad2.size


def direct_terms(scene, grid, index):
    g1, g2, n_bad, n_all = amplitudes(scene, grid, index)
    wdet = grid.det.weight
    wab = wdet[:, None] * wdet[None, :]
    a11 = np.sum(wab * np.abs(g1) ** 2, axis=(1, 2))
    a22 = np.sum(wab * np.abs(g2) ** 2, axis=(1, 2))
    x12 = np.sum(wab * g1 * np.conj(g2), axis=(1, 2))
    wt = grid.freq.weight[index]
    return wt * a11, wt * a22, wt * x12, n_bad, n_all


def amplitude_at(x_a, x_b, t_a, t_b, tau, scene):
    """Biphoton amplitude at detector points x_A, x_B and times t_A, t_B."""
    grid = DirectGrid(scene, abs(tau))
    c1, c2 = scene.coeffs
    # point evaluation: one detector node per arm, in the detector plane
    single = _PointNodes(np.asarray(x_a, dtype=float), np.asarray(x_b, dtype=float))
    total = 0.0 + 0.0j
    n = grid.freq.size
    step = chunk_size(scene, 1, grid.pairs.size)
    for start in range(0, n, step):
        index = np.arange(start, min(n, start + step))
        g1, g2 = _point_amplitudes(scene, grid, single, index)
        wa, wb = grid.freq.omega_a[index], grid.freq.omega_b[index]
        time = np.exp(-1j * (wa * t_a + wb * t_b))
        mix = c1 * np.exp(1j * wa * tau) * g1 + c2 * np.exp(1j * wb * tau) * g2
        total += np.sum(grid.freq.weight[index] * time * mix)
    return complex(total)


class _PointNodes:
    def __init__(self, x_a, x_b):
        self.x_a, self.x_b = x_a.reshape(1, 2), x_b.reshape(1, 2)


def _point_amplitudes(scene, grid, points, index):
    kernel, path = scene.kernel, scene.path
    wa, wb = grid.freq.omega_a[index], grid.freq.omega_b[index]
    q_o, q_e, wq = grid.pairs.q_o, grid.pairs.q_e, grid.pairs.weight
    phi1, _ = _phi(kernel, q_o, q_e, wb, wa, scene.pump)
    phi2, _ = _phi(kernel, q_o, q_e, wa, wb, scene.pump)
    ka1 = _arm_kernel(points.x_a, "x", q_e, wa, path)[:, 0]
    kb1 = _arm_kernel(points.x_b, "x", q_o, wb, path)[:, 0]
    ka2 = _arm_kernel(points.x_a, "x", q_o, wa, path)[:, 0]
    kb2 = _arm_kernel(points.x_b, "x", q_e, wb, path)[:, 0]
    g1 = np.sum(ka1 * phi1 * wq * kb1, axis=1)
    g2 = np.sum(ka2 * phi2 * wq * kb2, axis=1)
    return g1, g2
