"""Quadrature node sets.

Everything here is deterministic: the same scene always yields bit-identical
nodes, which the CSV reproducibility guarantee relies on.
"""

from dataclasses import dataclass

import numpy as np

from ..dispersion import C_LIGHT, Polarization, group_wavenumber
from ..errors import GridError
from ..optics import filter_support, pupil_autocorrelation
from ..pump import spectral_amplitude, spectral_support

# first zeros of J1 (jinc lobes of a circular pupil)
_J1_ZEROS = (3.8317059702075, 7.0155866698156, 10.173468135063, 13.323691936314)
# |q| cap for the "open" pupil and automatic direct grids, as a fraction of omega/c
PARAXIAL_CAP = 0.02
_GAUSS_TAIL = np.sqrt(np.log(1e12))


def gauss_legendre(n, lo, hi):
    t, w = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (hi - lo)
    return lo + half * (t + 1.0), half * w


def periodic(n):
    phi = 2 * np.pi * (np.arange(n) + 0.5) / n
    return phi, np.full(n, 2 * np.pi / n)


def disc(n_rho, n_phi, radius):
    """Polar GL x periodic rule on a disc; returns points (N, 2) and weights (N,)."""
    rho, wr = gauss_legendre(n_rho, 0.0, radius)
    phi, wp = periodic(n_phi)
    pts = np.stack(
        [np.outer(rho, np.cos(phi)).ravel(), np.outer(rho, np.sin(phi)).ravel()], axis=-1
    )
    return pts, np.outer(wr * rho, wp).ravel()


def rectangle(n_a, n_b, half_a, half_b, axes=(0, 1), split=False):
    """Tensor GL rule on [-half_a, half_a] x [-half_b, half_b].

    With ``split`` each side of zero gets its own panel (for integrands with
    a kink at the origin).
    """
    def line(n, h):
        if split:
            x1, w1 = gauss_legendre(n, -h, 0.0)
            x2, w2 = gauss_legendre(n, 0.0, h)
            return np.concatenate([x1, x2]), np.concatenate([w1, w2])
        return gauss_legendre(n, -h, h)

    a, wa = line(n_a, half_a)
    b, wb = line(n_b, half_b)
    pts = np.zeros((a.size * b.size, 2))
    pts[:, axes[0]] = np.repeat(a, b.size)
    pts[:, axes[1]] = np.tile(b, a.size)
    return pts, np.outer(wa, wb).ravel()


# ---------------------------------------------------------------------------
# frequencies


@dataclass(frozen=True)
class FrequencyNodes:
    omega_a: np.ndarray
    omega_b: np.ndarray
    weight: np.ndarray        # pure quadrature weight in (omega_A, omega_B)
    pump_amp: np.ndarray      # spectral pump amplitude at omega_A + omega_B

    @property
    def size(self):
        return self.omega_a.size


def phase_matching_slopes(scene):
    """(D, alpha): d Delta/d mu and d Delta/d Omega at the collinear degenerate point."""
    crystal, wp = scene.crystal, scene.pump.center_omega
    ko = group_wavenumber(wp / 2, Polarization.ORDINARY, crystal)
    ke = group_wavenumber(wp / 2, Polarization.EXTRAORDINARY, crystal)
    kp = group_wavenumber(wp, Polarization.PUMP, crystal)
    return ko - ke, kp - 0.5 * (ko + ke)


def lobe_width(scene):
    d, _ = phase_matching_slopes(scene)
    if d == 0:
        return np.inf
    return 2 * np.pi / (abs(d) * scene.crystal.length)


def frequency_nodes(scene, tau_reach=0.0):
    """Frequency nodes for delays up to |tau| <= tau_reach.

    Panels in mu are at most one phase-matching lobe wide and narrow enough
    that exp(2 i mu tau) turns through at most 2 pi per panel.
    """
    grid, pump, crystal = scene.grid, scene.pump, scene.crystal
    wp0 = pump.center_omega
    w0 = wp0 / 2
    filt = filter_support(scene.path.spectral_filter)
    band = crystal.omega_band if scene.frequency_expansion == "exact" else None
    d, alpha = phase_matching_slopes(scene)
    lobe = lobe_width(scene)
    # the cross term oscillates as exp(i mu (2 tau - D L)) in mu
    reach = abs(tau_reach) + abs(d) * crystal.length
    panel = min(lobe, np.pi / reach) if reach > 0 else lobe

    if pump.is_cw:
        omegas, w_omega = np.zeros(1), np.ones(1)
    else:
        lo, hi = (v - wp0 for v in spectral_support(pump, grid.eps_pump))
        for lim in (filt, band):
            if lim is not None:
                lo, hi = max(lo, 2 * lim[0] - wp0), min(hi, 2 * lim[1] - wp0)
        if not lo < hi:
            raise GridError("pump spectrum does not overlap the detectable band")
        omegas, w_omega = gauss_legendre(grid.n_sum, lo, hi)

    wa, wb, wt = [], [], []
    for big, w_big in zip(omegas, w_omega):
        m = w0 + 0.5 * big
        half = abs(alpha * big / d) + grid.lobes * lobe if d != 0 else np.inf
        half = min(half, m * (1 - 1e-9))
        if filt is not None:
            half = min(half, filt[1] - m, m - filt[0])
        if band is not None:
            # shrink by a hair so node arithmetic never steps outside the band
            half = min(half, (band[1] - m) * (1 - 1e-12), (m - band[0]) * (1 - 1e-12))
        if not np.isfinite(half):
            raise GridError("difference-frequency window is unbounded (no dispersion and no filter)")
        if half <= 0:
            continue
        n_panels = max(1, int(np.ceil(2 * half / panel))) if np.isfinite(panel) else 1
        edges = np.linspace(-half, half, n_panels + 1)
        for a, b in zip(edges[:-1], edges[1:]):
            mu, w_mu = gauss_legendre(grid.n_diff, a, b)
            wa.append(m + mu)
            wb.append(m - mu)
            wt.append(w_big * w_mu)
    if not wa:
        raise GridError("no frequency nodes survive the filter and band limits")
    wa, wb, wt = (np.concatenate(v) for v in (wa, wb, wt))
    return FrequencyNodes(wa, wb, wt, spectral_amplitude(wa + wb, pump))


# ---------------------------------------------------------------------------
# transverse nodes


def bucket_nodes(scene):
    """Nodes over the pupil autocorrelation for the bucket integrator.

    Returns separation vectors s (N, 2) and weights including C(s).
    """
    grid, ap = scene.grid, scene.path.aperture
    if ap.kind == "circular":
        pts, w = disc(grid.n_rho, grid.n_phi, ap.size)
    elif ap.kind == "slit":
        axes = (0, 1) if ap.orientation == "x" else (1, 0)
        pts, w = rectangle(grid.n_rho, grid.n_phi, ap.size, ap.length, axes, split=True)
    else:
        radius = _GAUSS_TAIL * ap.size
        if ap.kind == "open":
            radius = min(radius, 2 * PARAXIAL_CAP * scene.path.d1)
        pts, w = disc(grid.n_rho, grid.n_phi, radius)
    return pts, w * pupil_autocorrelation(pts, ap)


def pupil_q_radius(aperture):
    """Transverse wavevector radius covering four pupil-transform lobes."""
    if aperture.size == 0:
        return 0.0
    if aperture.kind == "circular":
        return _J1_ZEROS[3] / (aperture.size / 2)
    if aperture.kind == "slit":
        return 4 * 2 * np.pi / aperture.size
    return 4 * 2.0 / aperture.size


def direct_q_radius(scene, omega_max):
    grid = scene.grid
    if grid.q_max is not None:
        return grid.q_max
    ap, path = scene.path.aperture, scene.path
    radius = pupil_q_radius(ap)
    if scene.detector == "finite":
        radius += omega_max * scene.detector_radius / (C_LIGHT * path.f)
    else:
        # rays from the crystal that pass the pupil (stationary point s / 2 beta)
        radius += omega_max * 2 * ap.extent / (C_LIGHT * path.d1)
    return min(radius, PARAXIAL_CAP * omega_max / C_LIGHT)


@dataclass(frozen=True)
class ModePairs:
    """Transverse mode pairs (q_o, q_e) with weights.  For a plane-wave pump
    q_e = -q_o exactly."""

    q_o: np.ndarray
    q_e: np.ndarray
    weight: np.ndarray

    @property
    def size(self):
        return self.weight.size


def mode_pairs(scene, omega_max):
    grid, pump = scene.grid, scene.pump
    q, wq = disc(grid.n_q_rho, grid.n_q_phi, direct_q_radius(scene, omega_max))
    if pump.plane_wave:
        return ModePairs(q, -q, wq)
    qp, wp = disc(grid.n_pump_rho, grid.n_pump_phi, 3 * 2.0 / pump.waist)
    q_o = np.repeat(q, qp.shape[0], axis=0)
    q_e = np.tile(qp, (q.shape[0], 1)) - q_o
    return ModePairs(q_o, q_e, np.outer(wq, wp).ravel())


@dataclass(frozen=True)
class DetectorNodes:
    """Detector-plane nodes (kind "x") or aperture-plane nodes (kind "y")."""

    points: np.ndarray
    weight: np.ndarray
    kind: str

    @property
    def size(self):
        return self.weight.size


def detector_nodes(scene):
    grid = scene.grid
    if scene.detector == "finite":
        pts, w = disc(grid.n_det_rho, grid.n_det_phi, scene.detector_radius)
        return DetectorNodes(pts, w, "x")
    ap = scene.path.aperture
    if ap.kind == "circular":
        pts, w = disc(grid.n_det_rho, grid.n_det_phi, ap.size / 2)
    elif ap.kind == "slit":
        axes = (0, 1) if ap.orientation == "x" else (1, 0)
        pts, w = rectangle(grid.n_det_rho, grid.n_det_phi, ap.size / 2, ap.length / 2, axes)
    else:
        # |p|^2 = exp(-2 |y|^2 / w^2) falls below 1e-12 here
        pts, w = disc(grid.n_det_rho, grid.n_det_phi, _GAUSS_TAIL * ap.size / np.sqrt(2))
    return DetectorNodes(pts, w, "y")
