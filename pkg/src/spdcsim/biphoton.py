"""Phase mismatch and the two-photon kernel at the crystal output plane.

For a pump mode (q_o + q_e, omega_o + omega_e), an ordinary mode and an
extraordinary mode, the mismatch is Delta = kappa_p - kappa_o - kappa_e and

    Phi = E_p(q_o + q_e; omega_o + omega_e) * L * sinc(L Delta / 2) * exp(-i L Delta / 2)

with sinc(x) = sin(x) / x.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .dispersion import (
    CrystalSpec,
    Polarization,
    group_wavenumber,
    kappa_derivatives,
    kappa_values,
)
from .errors import Evanescent
from .pump import PumpSpectrum, pump_amplitude

_SERIES_CUTOFF = 1e-4

_O, _E, _P = Polarization.ORDINARY, Polarization.EXTRAORDINARY, Polarization.PUMP


def sinc(x):
    """sin(x)/x with a Taylor branch near the origin."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < _SERIES_CUTOFF
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(small, 0.0, np.sin(x) / np.where(small, 1.0, x))
    x2 = x * x
    out = np.where(small, 1.0 - x2 / 6.0 + x2 * x2 / 120.0, out)
    return out[()] if out.ndim == 0 else out


@dataclass(frozen=True)
class BiphotonKernel:
    """Kernel for one crystal and pump.

    ``frequency_expansion="linear"`` replaces each kappa by its first-order
    Taylor expansion in frequency about the carrier (omega_p0 for the pump,
    omega_p0/2 for the daughters) while keeping the full transverse
    dependence.  This is the dispersion model behind the textbook triangular
    dip and is used to validate the integrators against it.
    """

    crystal: CrystalSpec
    pump: PumpSpectrum
    frequency_expansion: str = "exact"

    def __post_init__(self):
        if self.frequency_expansion not in ("exact", "linear"):
            raise ValueError("frequency_expansion must be 'exact' or 'linear'")

    @property
    def length(self):
        return self.crystal.length

    @cached_property
    def _carriers(self):
        wp = self.pump.center_omega
        wd = wp / 2
        return {
            _P: (wp, group_wavenumber(wp, _P, self.crystal)),
            _O: (wd, group_wavenumber(wd, _O, self.crystal)),
            _E: (wd, group_wavenumber(wd, _E, self.crystal)),
        }

    # -- longitudinal wavevectors --------------------------------------------

    def _kappa(self, q, omega, pol):
        omega = np.asarray(omega, dtype=float)
        if self.frequency_expansion == "exact":
            return kappa_values(q, omega, pol, self.crystal)
        w0, k1 = self._carriers[pol]
        return kappa_values(q, np.full_like(omega, w0), pol, self.crystal) + k1 * (omega - w0)

    def _kappa_derivs(self, q, omega, pol):
        omega = np.asarray(omega, dtype=float)
        if self.frequency_expansion == "exact":
            return kappa_derivatives(q, omega, pol, self.crystal)
        w0, k1 = self._carriers[pol]
        kap, grad, hess = kappa_derivatives(q, np.full_like(omega, w0), pol, self.crystal)
        return kap + k1 * (omega - w0), grad, hess

    # -- public evaluation ---------------------------------------------------

    def mismatch_values(self, q_o, q_e, omega_o, omega_e):
        """Vectorized Delta; entries with an evanescent mode are NaN."""
        q_o = np.asarray(q_o, dtype=float)
        q_e = np.asarray(q_e, dtype=float)
        omega_o = np.asarray(omega_o, dtype=float)
        omega_e = np.asarray(omega_e, dtype=float)
        kp = self._kappa(q_o + q_e, omega_o + omega_e, _P)
        return kp - self._kappa(q_o, omega_o, _O) - self._kappa(q_e, omega_e, _E)

    def mismatch(self, q_o, q_e, omega_o, omega_e):
        d = self.mismatch_values(q_o, q_e, omega_o, omega_e)
        if np.any(np.isnan(d)):
            raise Evanescent("at least one of the pump, ordinary or extraordinary modes is evanescent")
        return d

    def phi_from_mismatch(self, delta, pump_amp):
        half = 0.5 * self.length * np.asarray(delta)
        return pump_amp * self.length * sinc(half) * np.exp(-1j * half)

    def phi(self, q_o, q_e, omega_o, omega_e):
        q_o = np.asarray(q_o, dtype=float)
        q_e = np.asarray(q_e, dtype=float)
        delta = self.mismatch(q_o, q_e, omega_o, omega_e)
        amp = pump_amplitude(q_o + q_e, np.asarray(omega_o) + np.asarray(omega_e), self.pump)
        return self.phi_from_mismatch(delta, amp)

    def antipodal_mismatch(self, q, omega_o, omega_e, o_sign=1):
        """Delta(q_o = s q, q_e = -s q) with its q-gradient and q-Hessian, s = o_sign.

        This is the plane-wave-pump slice of the mismatch.  The pump mode sits
        at zero transverse wavevector, so only the daughter kappas vary with q.
        Returns arrays of shape (...), (..., 2), (..., 2, 2).
        """
        q = np.asarray(q, dtype=float)
        omega_o = np.asarray(omega_o, dtype=float)
        omega_e = np.asarray(omega_e, dtype=float)
        s = float(o_sign)
        zero = np.zeros(2)
        kp = self._kappa(zero, omega_o + omega_e, _P)
        ko, go, ho = self._kappa_derivs(s * q, omega_o, _O)
        ke, ge, he = self._kappa_derivs(-s * q, omega_e, _E)
        delta = kp - ko - ke
        grad = -s * go + s * ge
        hess = -(ho + he)
        return delta, grad, hess
