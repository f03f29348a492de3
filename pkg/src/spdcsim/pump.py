"""Classical pump field amplitude E_p(q_p; omega_p).

The amplitude is a separable product of a spectral and a transverse factor,
each normalized to unit peak.  Overall constants are dropped everywhere.
"""

from dataclasses import dataclass

import numpy as np

from .dispersion import C_LIGHT

# relative tolerance used to recognise the single cw frequency after node arithmetic
_CW_RTOL = 1e-9


@dataclass(frozen=True)
class PumpSpectrum:
    """Pulsed (gaussian) or cw pump.

    center_omega: rad/s.  bandwidth_fwhm_nm: intensity FWHM in wavelength,
    0 for cw.  transverse: "planewave" or "gaussian" (1/e^2 intensity waist
    ``waist`` in m).
    """

    center_omega: float
    bandwidth_fwhm_nm: float = 0.0
    transverse: str = "planewave"
    waist: float = None

    def __post_init__(self):
        if not self.center_omega > 0:
            raise ValueError("pump center frequency must be positive")
        if self.bandwidth_fwhm_nm < 0:
            raise ValueError("pump bandwidth must be >= 0")
        if self.transverse not in ("planewave", "gaussian"):
            raise ValueError(f"unknown transverse profile {self.transverse!r}")
        if self.transverse == "gaussian" and not (self.waist and self.waist > 0):
            raise ValueError("gaussian transverse profile needs a positive waist")

    @classmethod
    def from_wavelength(cls, center_nm, bandwidth_fwhm_nm=0.0, transverse="planewave", waist_um=None):
        waist = None if waist_um is None else waist_um * 1e-6
        return cls(2 * np.pi * C_LIGHT / (center_nm * 1e-9), bandwidth_fwhm_nm, transverse, waist)

    @property
    def center_wavelength(self):
        return 2 * np.pi * C_LIGHT / self.center_omega

    @property
    def is_cw(self):
        return self.bandwidth_fwhm_nm == 0

    @property
    def plane_wave(self):
        return self.transverse == "planewave"

    @property
    def fwhm_omega(self):
        """Intensity FWHM in angular frequency (first-order wavelength conversion)."""
        lam = self.center_wavelength
        return 2 * np.pi * C_LIGHT * self.bandwidth_fwhm_nm * 1e-9 / lam ** 2

    @property
    def sigma_omega(self):
        # amplitude exp[-(w-w0)^2 / (2 sigma^2)]: intensity halves at +-FWHM/2
        return self.fwhm_omega / (2 * np.sqrt(np.log(2)))


def spectral_amplitude(omega_p, pump):
    omega_p = np.asarray(omega_p, dtype=float)
    if pump.is_cw:
        return np.where(np.abs(omega_p - pump.center_omega) <= _CW_RTOL * pump.center_omega, 1.0, 0.0)
    d = omega_p - pump.center_omega
    return np.exp(-d * d / (2 * pump.sigma_omega ** 2))


def transverse_amplitude(q_p, pump):
    """Transverse factor.  A plane wave is a formal delta at q_p = 0: this
    returns its weight (1 at q_p = 0, else 0) and the integrators impose
    q_e = -q_o instead of sampling it."""
    q_p = np.asarray(q_p, dtype=float)
    q2 = np.sum(q_p * q_p, axis=-1)
    if pump.plane_wave:
        return np.where(q2 == 0.0, 1.0, 0.0)
    return np.exp(-q2 * pump.waist ** 2 / 4)


def pump_amplitude(q_p, omega_p, pump):
    """E_p(q_p; omega_p) as a complex array (transform limited, no chirp)."""
    return (spectral_amplitude(omega_p, pump) * transverse_amplitude(q_p, pump)).astype(complex)


def spectral_support(pump, eps):
    """Frequency interval on which |spectral factor|^2 >= eps."""
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    if pump.is_cw:
        return pump.center_omega, pump.center_omega
    half = pump.sigma_omega * np.sqrt(np.log(1 / eps))
    return pump.center_omega - half, pump.center_omega + half


def transverse_support(pump, widths=3.0):
    """Radius in q_p beyond which the gaussian transverse factor is dropped."""
    if pump.plane_wave:
        return 0.0
    return widths * 2.0 / pump.waist
