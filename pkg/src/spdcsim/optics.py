"""Propagation from the crystal output plane to the detectors.

Geometry: free space d1, an aperture co-located with a thin lens of focal
length f, free space d2, then a spectral filter.  The paraxial transfer
function of one arm is

    H(x, q; w) = exp[i w (d1 + d2 + f) / c]
                 * exp[-i w |x|^2 (d2/f - 1) / (2 c f)]
                 * exp[-i d1 c |q|^2 / (2 w)]
                 * P((w / (c f)) x - q) * F(w)

where P is the pupil transform, P(k) = int p(x) exp(-i k.x) dx.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import j1

from .dispersion import C_LIGHT

# default waist of the "open" aperture surrogate, in metres
OPEN_APERTURE_WAIST = 0.5


@dataclass(frozen=True)
class Aperture:
    """Pupil descriptor.

    kind: "circular" (size = diameter), "slit" (size = width across
    ``orientation``, ``length`` along the other axis), "gaussian"
    (size = amplitude 1/e radius, i.e. 1/e^2 intensity waist) or "open"
    (a very wide gaussian; size, if given, overrides its waist).
    """

    kind: str = "circular"
    size: float = None
    orientation: str = "x"
    length: float = None

    def __post_init__(self):
        if self.kind not in ("circular", "slit", "gaussian", "open"):
            raise ValueError(f"unknown aperture kind {self.kind!r}")
        if self.kind == "open" and self.size is None:
            object.__setattr__(self, "size", OPEN_APERTURE_WAIST)
        if self.size is None or not self.size >= 0:
            raise ValueError(f"{self.kind} aperture needs a non-negative size")
        if self.kind == "slit":
            if self.orientation not in ("x", "y"):
                raise ValueError("slit orientation must be 'x' or 'y'")
            if self.length is None:
                object.__setattr__(self, "length", 10.0 * self.size)

    @property
    def is_gaussian(self):
        return self.kind in ("gaussian", "open")

    @property
    def extent(self):
        """Radius of a disc containing the pupil (3 waists for gaussians)."""
        if self.kind == "circular":
            return self.size / 2
        if self.kind == "slit":
            return 0.5 * np.hypot(self.size, self.length)
        return 3.0 * self.size

    def _axes(self):
        # index of the narrow axis and of the long axis
        return (0, 1) if self.orientation == "x" else (1, 0)


def pupil(x, aperture):
    """Transmission p(x) (real, unit peak)."""
    x = np.asarray(x, dtype=float)
    if aperture.kind == "circular":
        r = np.hypot(x[..., 0], x[..., 1])
        return np.where(r <= aperture.size / 2, 1.0, 0.0)
    if aperture.kind == "slit":
        a, b = aperture._axes()
        inside = (np.abs(x[..., a]) <= aperture.size / 2) & (np.abs(x[..., b]) <= aperture.length / 2)
        return inside.astype(float)
    r2 = np.sum(x * x, axis=-1)
    return np.exp(-r2 / aperture.size ** 2)


def pupil_fourier(k, aperture):
    """Closed-form pupil transform P(k) = int p(x) exp(-i k.x) dx."""
    k = np.asarray(k, dtype=float)
    if aperture.kind == "circular":
        a = aperture.size / 2
        u = np.hypot(k[..., 0], k[..., 1]) * a
        small = u < 1e-8
        with np.errstate(invalid="ignore", divide="ignore"):
            jinc = np.where(small, 1.0, 2.0 * j1(u) / np.where(small, 1.0, u))
        return (np.pi * a * a * jinc).astype(complex)
    if aperture.kind == "slit":
        i, j = aperture._axes()
        w, length = aperture.size, aperture.length
        out = w * length * np.sinc(k[..., i] * w / (2 * np.pi)) * np.sinc(k[..., j] * length / (2 * np.pi))
        return out.astype(complex)
    w = aperture.size
    k2 = np.sum(k * k, axis=-1)
    return (np.pi * w * w * np.exp(-k2 * w * w / 4)).astype(complex)


def pupil_autocorrelation(s, aperture):
    """C(s) = int |p(y + s)|^2 |p(y)|^2 dy, in closed form."""
    s = np.asarray(s, dtype=float)
    if aperture.kind == "circular":
        r = aperture.size / 2
        u = np.clip(np.hypot(s[..., 0], s[..., 1]) / (2 * r), 0.0, 1.0) if r > 0 else np.ones(s.shape[:-1])
        return 2 * r * r * (np.arccos(u) - u * np.sqrt(1 - u * u))
    if aperture.kind == "slit":
        i, j = aperture._axes()
        return np.clip(aperture.size - np.abs(s[..., i]), 0, None) * np.clip(
            aperture.length - np.abs(s[..., j]), 0, None
        )
    w = aperture.size
    return 0.25 * np.pi * w * w * np.exp(-np.sum(s * s, axis=-1) / (w * w))


@dataclass(frozen=True)
class SpectralFilter:
    """Amplitude filter.  kind: "tophat", "gaussian" or "open".

    center_nm and fwhm_nm are wavelengths; for the gaussian the FWHM refers
    to intensity transmission.
    """

    kind: str = "open"
    center_nm: float = None
    fwhm_nm: float = None

    def __post_init__(self):
        if self.kind not in ("tophat", "gaussian", "open"):
            raise ValueError(f"unknown filter kind {self.kind!r}")
        if self.kind != "open":
            if not (self.center_nm and self.center_nm > 0 and self.fwhm_nm and self.fwhm_nm > 0):
                raise ValueError(f"{self.kind} filter needs positive center_nm and fwhm_nm")
            if self.kind == "tophat" and self.fwhm_nm >= 2 * self.center_nm:
                raise ValueError("tophat band extends to non-positive wavelengths")

    @property
    def center_omega(self):
        return 2 * np.pi * C_LIGHT / (self.center_nm * 1e-9)

    @property
    def sigma_omega(self):
        lam = self.center_nm * 1e-9
        fwhm = 2 * np.pi * C_LIGHT * self.fwhm_nm * 1e-9 / lam ** 2
        return fwhm / (2 * np.sqrt(np.log(2)))

    @property
    def band_omega(self):
        """Exact tophat pass band in angular frequency."""
        lo_nm = self.center_nm - self.fwhm_nm / 2
        hi_nm = self.center_nm + self.fwhm_nm / 2
        return 2 * np.pi * C_LIGHT / (hi_nm * 1e-9), 2 * np.pi * C_LIGHT / (lo_nm * 1e-9)


def filter_F(omega, spectral_filter):
    """Real amplitude transmission in [0, 1]."""
    omega = np.asarray(omega, dtype=float)
    if spectral_filter.kind == "open":
        return np.ones_like(omega)
    if spectral_filter.kind == "tophat":
        lo, hi = spectral_filter.band_omega
        return np.where((omega >= lo) & (omega <= hi), 1.0, 0.0)
    d = omega - spectral_filter.center_omega
    return np.exp(-d * d / (2 * spectral_filter.sigma_omega ** 2))


def filter_support(spectral_filter, eps=1e-8):
    """Frequency interval outside which F^2 < eps, or None for an open filter."""
    if spectral_filter.kind == "open":
        return None
    if spectral_filter.kind == "tophat":
        return spectral_filter.band_omega
    half = spectral_filter.sigma_omega * np.sqrt(np.log(1 / eps))
    c = spectral_filter.center_omega
    return c - half, c + half


@dataclass(frozen=True)
class OpticalPath:
    """One detection arm: distances in metres, pupil and spectral filter."""

    d1: float
    d2: float
    f: float
    aperture: Aperture = Aperture("circular", 2e-3)
    spectral_filter: SpectralFilter = SpectralFilter()

    def __post_init__(self):
        for name in ("d1", "d2", "f"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")


def transfer_H(x, q, omega, path):
    """Paraxial transfer function H(x, q; omega) of one arm (broadcasting)."""
    x = np.asarray(x, dtype=float)
    q = np.asarray(q, dtype=float)
    omega = np.asarray(omega, dtype=float)
    c = C_LIGHT
    x2 = np.sum(x * x, axis=-1)
    q2 = np.sum(q * q, axis=-1)
    phase = (
        omega * (path.d1 + path.d2 + path.f) / c
        - omega * x2 * (path.d2 / path.f - 1) / (2 * c * path.f)
        - path.d1 * c * q2 / (2 * omega)
    )
    k = (omega / (c * path.f))[..., None] * x - q
    return np.exp(1j * phase) * pupil_fourier(k, path.aperture) * filter_F(omega, path.spectral_filter)


@dataclass(frozen=True)
class AnalyzerConfig:
    """Analyzer angles (rad) from the extraordinary axis, and the delay (s)
    applied to the extraordinary photon."""

    alpha_a: float
    alpha_b: float
    tau: float = 0.0

    @classmethod
    def from_degrees(cls, alpha_a_deg, alpha_b_deg, tau=0.0):
        return cls(np.deg2rad(alpha_a_deg), np.deg2rad(alpha_b_deg), tau)


def projection_coeffs(analyzers):
    """(c1, c2): c1 weights (A sees e, B sees o), c2 weights (A sees o, B sees e)."""
    # adding pi to an angle flips the sign of both coefficients, which cancels in |A|^2
    a, b = analyzers.alpha_a, analyzers.alpha_b
    c1 = np.cos(a) * np.sin(b)
    c2 = np.sin(a) * np.cos(b)
    return float(c1), float(c2)
