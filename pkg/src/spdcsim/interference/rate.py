"""Coincidence rate R(tau) from per-frequency spectral terms.

Both integrators reduce the rate to

    R(tau) = sum_n [c1^2 a11_n + c2^2 a22_n + 2 c1 c2 Re(exp(i (w_A - w_B)_n tau) x12_n)]

so a whole delay sweep costs one pass over the frequency nodes.  The delay
is a physical retardation of the extraordinary photon, i.e. the factor
exp(+i w_e tau) under the exp(-i w t) time convention.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..errors import GridError
from .direct import DirectGrid, chunk_size, direct_terms
from .fast import bucket_terms
from .grids import bucket_nodes, frequency_nodes
from .scene import GridSpec

log = logging.getLogger(__name__)

# fraction of evanescent (excluded) nodes above which the grid is rejected
MAX_EXCLUDED = 0.01
_TAU_BLOCK = 64


@dataclass(frozen=True)
class SpectralTerms:
    dw: np.ndarray
    a11: np.ndarray
    a22: np.ndarray
    x12: np.ndarray
    excluded: int
    evaluated: int
    method: str

    def rate(self, tau, c1, c2):
        tau = np.atleast_1d(np.asarray(tau, dtype=float))
        base = c1 * c1 * np.sum(self.a11) + c2 * c2 * np.sum(self.a22)
        out = np.empty(tau.size)
        for start in range(0, tau.size, _TAU_BLOCK):
            block = tau[start:start + _TAU_BLOCK]
            phase = np.exp(1j * block[:, None] * self.dw[None, :])
            out[start:start + block.size] = np.sum((phase * self.x12[None, :]).real, axis=1)
        return base + 2 * c1 * c2 * out


def choose_method(scene, method="auto"):
    if method not in ("auto", "fast", "direct"):
        raise ValueError(f"unknown method {method!r}")
    fast_ok = scene.pump.plane_wave and scene.detector == "bucket"
    if method == "fast" and not fast_ok:
        raise ValueError("the bucket integrator needs a plane-wave pump and bucket detectors")
    if method == "auto":
        return "fast" if fast_ok else "direct"
    return method


def refinable_dimensions(scene, method="auto"):
    """Grid fields that actually discretize an integral for this method."""
    if choose_method(scene, method) == "fast":
        return GridSpec.REFINABLE
    dims = ("n_sum", "n_diff", "n_q_rho", "n_q_phi", "n_det_rho", "n_det_phi")
    if not scene.pump.plane_wave:
        dims += ("n_pump_rho", "n_pump_phi")
    return dims


def spectral_terms(scene, method="auto", threads=1, grid=None, tau_reach=0.0):
    """Evaluate the per-frequency terms for delays up to ``tau_reach``.

    ``threads`` only changes wall time: the chunking is fixed by the grid,
    never by the worker count.
    """
    method = choose_method(scene, method)
    if method == "fast":
        nodes = frequency_nodes(scene, tau_reach)
        step = scene.grid.chunk

        def work(index):
            return bucket_terms(scene, nodes, index)
    else:
        grid = grid or DirectGrid(scene, tau_reach)
        nodes = grid.freq
        step = chunk_size(scene, grid.det.size ** 2, grid.pairs.size)

        def work(index):
            return direct_terms(scene, grid, index)

    chunks = [np.arange(s, min(nodes.size, s + step)) for s in range(0, nodes.size, step)]
    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, chunks))
    else:
        parts = [work(c) for c in chunks]
    a11 = np.concatenate([p[0] for p in parts])
    a22 = np.concatenate([p[1] for p in parts])
    x12 = np.concatenate([p[2] for p in parts])
    excluded = sum(p[3] for p in parts)
    evaluated = sum(p[4] for p in parts)
    if excluded:
        log.warning("%d of %d integration nodes are evanescent and were excluded", excluded, evaluated)
    if evaluated and excluded > MAX_EXCLUDED * evaluated:
        raise GridError(
            f"{excluded} of {evaluated} nodes are evanescent (> {MAX_EXCLUDED:.0%}); grid is misconfigured"
        )
    return SpectralTerms(nodes.omega_a - nodes.omega_b, a11, a22, x12, excluded, evaluated, method)


def coincidence_rate(tau, scene, method="auto", threads=1):
    """R(tau) in arbitrary units (scalar in, scalar out)."""
    c1, c2 = scene.coeffs
    reach = float(np.max(np.abs(tau)))
    out = spectral_terms(scene, method, threads, tau_reach=reach).rate(tau, c1, c2)
    return float(out[0]) if np.ndim(tau) == 0 else out


def grid_sizes(scene, method="auto", tau_reach=0.0):
    method = choose_method(scene, method)
    g = scene.grid.sizes()
    if method == "fast":
        g["frequency_nodes"] = int(frequency_nodes(scene, tau_reach).size)
        g["transverse_nodes"] = int(bucket_nodes(scene)[0].shape[0])
    else:
        grid = DirectGrid(scene, tau_reach)
        g["frequency_nodes"] = int(grid.freq.size)
        g["mode_pairs"] = int(grid.pairs.size)
        g["detector_nodes"] = int(grid.det.size)
    g["method"] = method
    return g
