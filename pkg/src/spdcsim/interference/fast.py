"""Semi-analytic integrator for a plane-wave pump and bucket detectors.

Outline of the reduction, per frequency pair (w_A, w_B):

* the time integrals are done analytically, so only |G1 + G2|^2 integrated
  over both detector planes is needed;
* with detector coordinates rescaled to k = w x / (c f) the lens phase, the
  d2 phase and the global phase are common to both terms and drop out, and
  Parseval moves the detector integrals onto the aperture plane.  What is
  left is an integral over the separation s of aperture points, weighted by
  the autocorrelation C(s) of |p|^2;
* writing L sinc(L Delta/2) exp(-i L Delta/2) as int_0^L exp(-i Delta z) dz
  and expanding Delta to second order about the stationary point
  q0 = -s / (2 beta) of the Fresnel phase beta |q|^2 turns the q-integral
  into a Fresnel-gaussian integral in closed form:

      S(z) = exp((i/2) z^2 g^T M^-1 g) / sqrt(det M),  M = 2 beta I + z Hess

* the remaining z-integral is done by expanding S in Legendre polynomials,
  int_{-1}^{1} P_n(t) exp(-i a t) dt = 2 (-i)^n j_n(a).

Delta is smooth and very nearly quadratic in q over a Fresnel zone, so the
only approximation is the dropped cubic remainder.
"""

import numpy as np
from scipy.special import eval_legendre, spherical_jn

from ..dispersion import C_LIGHT
from ..optics import filter_F
from .grids import bucket_nodes


def legendre_projector(n_z):
    """Matrix Q with c_n = sum_k Q[n, k] f(t_k) on GL nodes t_k."""
    t, w = np.polynomial.legendre.leggauss(n_z)
    n = np.arange(n_z)[:, None]
    return t, (2 * n + 1) / 2.0 * w[None, :] * eval_legendre(n, t[None, :])


def _depth_integral(delta0, grad, hess, beta, length, t, proj):
    """int_0^L exp(-i delta z) S(z) dz with the quadratic model of delta."""
    z = 0.5 * length * (t + 1.0)                       # (nz,)
    zz = z[(None,) * delta0.ndim]                      # broadcast over nodes
    b2 = 2.0 * beta[..., None]
    h00 = hess[..., 0, 0, None]
    h11 = hess[..., 1, 1, None]
    h01 = hess[..., 0, 1, None]
    m00 = b2 + zz * h00
    m11 = b2 + zz * h11
    m01 = zz * h01
    det = m00 * m11 - m01 * m01
    g0 = grad[..., 0, None]
    g1 = grad[..., 1, None]
    quad = (m11 * g0 * g0 - 2 * m01 * g0 * g1 + m00 * g1 * g1) / det
    # normalize by 2 beta so S(0) = 1; the dropped 1/(2 beta) is restored by the caller
    s_vals = np.exp(0.5j * zz * zz * quad) * (b2 / np.sqrt(det.astype(complex)))
    coeffs = np.einsum("...k,nk->...n", s_vals, proj)
    a = 0.5 * length * delta0
    series = np.zeros(delta0.shape, dtype=complex)
    for n in range(proj.shape[0]):
        series += coeffs[..., n] * ((-1j) ** n) * spherical_jn(n, a)
    return length * np.exp(-1j * a) * series


def bucket_terms(scene, nodes, index):
    """Per-frequency-node pieces (a11, a22, x12) for the nodes in ``index``.

    R(tau) = sum_n [c1^2 a11 + c2^2 a22 + 2 c1 c2 Re(exp(i (w_A - w_B) tau) x12)]
    """
    kernel, path, grid = scene.kernel, scene.path, scene.grid
    wa = nodes.omega_a[index]
    wb = nodes.omega_b[index]
    s, ws = bucket_nodes(scene)
    t, proj = legendre_projector(grid.n_z)
    length = scene.crystal.length

    beta = 0.5 * path.d1 * C_LIGHT * (1.0 / wa + 1.0 / wb)          # (n,)
    q0 = -s[None, :, :] / (2.0 * beta[:, None, None])                 # (n, Ns, 2)
    bcol = np.broadcast_to(beta[:, None], q0.shape[:-1])
    # term 1: e photon at A (omega_e = w_A), o photon at B, q_o = q
    d1, g1, h1 = kernel.antipodal_mismatch(q0, wb[:, None], wa[:, None], o_sign=1)
    # term 2: o photon at A, q_o = -q
    d2, g2, h2 = kernel.antipodal_mismatch(q0, wa[:, None], wb[:, None], o_sign=-1)
    bad = ~(np.isfinite(d1) & np.isfinite(d2))
    d1, d2 = np.where(bad, 0.0, d1), np.where(bad, 0.0, d2)
    g1, g2 = (np.where(bad[..., None], 0.0, g) for g in (g1, g2))
    h1, h2 = (np.where(bad[..., None, None], 0.0, h) for h in (h1, h2))
    amp1 = _depth_integral(d1, g1, h1, bcol, length, t, proj)
    amp2 = _depth_integral(d2, g2, h2, bcol, length, t, proj)
    wsn = np.where(bad, 0.0, ws[None, :])

    a11 = np.sum(wsn * np.abs(amp1) ** 2, axis=1)
    a22 = np.sum(wsn * np.abs(amp2) ** 2, axis=1)
    x12 = np.sum(wsn * amp1 * np.conj(amp2), axis=1)

    # detector Jacobian (c f / w)^2 per arm, Parseval (2 pi)^4, Fresnel integral 2 pi / (2 beta i)
    fa = filter_F(wa, path.spectral_filter)
    fb = filter_F(wb, path.spectral_filter)
    scale = (
        nodes.weight[index] * np.abs(nodes.pump_amp[index]) ** 2 * (fa * fb) ** 2
        * (C_LIGHT * path.f) ** 4 / (wa * wb) ** 2 * (2 * np.pi) ** 4
        * (np.pi / beta) ** 2
    )
    return scale * a11, scale * a22, scale * x12, int(bad.sum()), bad.size
