"""Refractive indices and longitudinal wavevectors in a uniaxial crystal.

All quantities are SI (rad/s, rad/m, m) except the Sellmeier wavelength
variable, which is in micrometres as is customary for published fits.  The
dispersion form used throughout is

    n^2 = A + B / (lambda^2 - C) - D * lambda^2

with one coefficient set ``(A, B, C, D)`` per principal index.
"""

from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path

import numpy as np
from scipy.optimize import brentq

from .errors import ConfigError, Evanescent, NoConvergence, OutOfBand
from .flatfile import parse_flat

C_LIGHT = 299_792_458.0

MATERIAL_DIR = Path(__file__).parent / "data" / "materials"


class Polarization(str, Enum):
    ORDINARY = "ordinary"
    EXTRAORDINARY = "extraordinary"
    # the pump is extraordinary inside the crystal (type-II, e -> o + e)
    PUMP = "pump"


def _sellmeier(coeffs, lam_um):
    a, b, c, d = coeffs
    lam2 = lam_um * lam_um
    return np.sqrt(a + b / (lam2 - c) - d * lam2)


@dataclass(frozen=True)
class CrystalSpec:
    """Uniaxial crystal: two Sellmeier sets, cut angle (rad) and length (m).

    ``principal_plane_axis`` names the transverse axis ("x" or "y") lying in
    the plane spanned by the optic axis and z.
    """

    sellmeier_o: tuple
    sellmeier_e: tuple
    cut_angle: float
    length: float
    principal_plane_axis: str = "x"
    band_um: tuple = (0.22, 1.06)
    name: str = "custom"

    def __post_init__(self):
        object.__setattr__(self, "sellmeier_o", tuple(float(v) for v in self.sellmeier_o))
        object.__setattr__(self, "sellmeier_e", tuple(float(v) for v in self.sellmeier_e))
        object.__setattr__(self, "band_um", tuple(float(v) for v in self.band_um))
        if len(self.sellmeier_o) != 4 or len(self.sellmeier_e) != 4:
            raise ValueError("Sellmeier coefficient sets need exactly (A, B, C, D)")
        if not self.length > 0:
            raise ValueError(f"crystal length must be positive, got {self.length}")
        if not 0.0 <= self.cut_angle <= np.pi / 2:
            raise ValueError(f"cut angle must lie in [0, pi/2], got {self.cut_angle}")
        if self.principal_plane_axis not in ("x", "y"):
            raise ValueError("principal_plane_axis must be 'x' or 'y'")
        lo, hi = self.band_um
        if not 0 < lo < hi:
            raise ValueError(f"invalid validity band {self.band_um}")
        lam = np.linspace(lo, hi, 257)
        with np.errstate(invalid="ignore"):
            ok = np.all(_sellmeier(self.sellmeier_o, lam) > 1) and np.all(_sellmeier(self.sellmeier_e, lam) > 1)
        if not ok:
            raise ValueError("Sellmeier evaluation must give n > 1 across the validity band")

    @property
    def axis_index(self):
        return 0 if self.principal_plane_axis == "x" else 1

    @property
    def omega_band(self):
        lo, hi = self.band_um
        return 2 * np.pi * C_LIGHT / (hi * 1e-6), 2 * np.pi * C_LIGHT / (lo * 1e-6)

    def with_length(self, length):
        return replace(self, length=length)

    def with_cut_angle(self, cut_angle):
        return replace(self, cut_angle=cut_angle)


@dataclass(frozen=True)
class Mode:
    """A transverse plane-wave label (q, omega) with polarization tag.

    ``q`` has shape (..., 2) and ``omega`` broadcasts against ``q[..., 0]``.
    """

    q: np.ndarray
    omega: np.ndarray
    polarization: Polarization = Polarization.ORDINARY

    def __post_init__(self):
        q = np.asarray(self.q, dtype=float)
        omega = np.asarray(self.omega, dtype=float)
        if q.shape[-1:] != (2,):
            raise ValueError("q must have a trailing dimension of length 2")
        if not np.all(omega > 0):
            raise ValueError("mode frequencies must be positive")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "polarization", Polarization(self.polarization))


# ---------------------------------------------------------------------------
# indices


def _lambda_um(omega):
    return 2 * np.pi * C_LIGHT / np.asarray(omega, dtype=float) * 1e6


def _check_band(omega, crystal):
    lam = _lambda_um(omega)
    lo, hi = crystal.band_um
    if np.any((lam < lo) | (lam > hi)) or np.any(~np.isfinite(lam)):
        raise OutOfBand(
            f"wavelength outside the {crystal.name} validity band [{lo}, {hi}] um "
            f"(requested range {np.nanmin(lam):.6g}..{np.nanmax(lam):.6g} um)"
        )
    return lam


def n_ordinary(omega, crystal):
    """Ordinary index n_o(omega)."""
    return _sellmeier(crystal.sellmeier_o, _check_band(omega, crystal))


def n_principal_e(omega, crystal):
    """Principal extraordinary index (propagation normal to the optic axis)."""
    return _sellmeier(crystal.sellmeier_e, _check_band(omega, crystal))


def _ellipsoid(n_o, n_e, theta):
    c, s = np.cos(theta), np.sin(theta)
    return 1.0 / np.sqrt(c * c / (n_o * n_o) + s * s / (n_e * n_e))


def n_extraordinary(omega, theta, crystal):
    """Index-ellipsoid value n_e(omega, theta) for angle theta to the optic axis."""
    theta = np.asarray(theta, dtype=float)
    if np.any((theta < 0) | (theta > np.pi / 2)):
        raise ValueError("theta must lie in [0, pi/2]")
    return _ne(omega, theta, crystal)


def _ne(omega, theta, crystal):
    n_o = n_ordinary(omega, crystal)
    n_e = n_principal_e(omega, crystal)
    # exact endpoints, so theta=0 and theta=pi/2 reproduce the principal values bit for bit
    out = _ellipsoid(n_o, n_e, theta)
    out = np.where(theta == 0.0, n_o, out)
    out = np.where(theta == np.pi / 2, n_e, out)
    return out[()] if np.ndim(out) == 0 else out


def _n_along_axis(omega, crystal, polarization):
    """Index at the cut angle (q = 0); used to scale the paraxial angle."""
    if Polarization(polarization) is Polarization.ORDINARY:
        return n_ordinary(omega, crystal)
    return _ne(omega, crystal.cut_angle, crystal)


# ---------------------------------------------------------------------------
# angles and longitudinal wavevector


def _paraxial_theta(q, omega, crystal, polarization):
    q_par = np.asarray(q)[..., crystal.axis_index]
    n = _n_along_axis(omega, crystal, polarization)
    return crystal.cut_angle - q_par * C_LIGHT / (n * omega)


def propagation_angle(mode, crystal, exact=False, max_iter=50, rtol=1e-12):
    """Angle between the wavevector of ``mode`` and the optic axis.

    The default is the first-order paraxial expansion about the cut angle.
    With ``exact=True`` the relation cos(theta) = k_hat . c_hat is solved by
    fixed-point iteration, with |k| = n(theta) omega / c.
    """
    theta = _paraxial_theta(mode.q, mode.omega, crystal, mode.polarization)
    if not exact:
        return theta

    q = mode.q
    q2 = np.sum(q * q, axis=-1)
    q_par = q[..., crystal.axis_index]
    sin_c, cos_c = np.sin(crystal.cut_angle), np.cos(crystal.cut_angle)
    ordinary = mode.polarization is Polarization.ORDINARY
    for _ in range(max_iter):
        n = n_ordinary(mode.omega, crystal) if ordinary else _ne(mode.omega, theta, crystal)
        k = n * mode.omega / C_LIGHT
        kz2 = k * k - q2
        if np.any(kz2 < 0):
            raise Evanescent("mode is evanescent during exact angle solve")
        cos_theta = np.clip((q_par * sin_c + np.sqrt(kz2) * cos_c) / k, -1.0, 1.0)
        new = np.arccos(cos_theta)
        diff = np.abs(new - theta)
        theta = new
        if np.all(diff <= rtol * np.abs(theta)):
            return theta
    raise NoConvergence(f"exact propagation angle did not converge in {max_iter} iterations")


def _index_for(q, omega, crystal, polarization, exact=False):
    if Polarization(polarization) is Polarization.ORDINARY:
        return n_ordinary(omega, crystal)
    if exact:
        return _ne(omega, propagation_angle(Mode(q, omega, polarization), crystal, exact=True), crystal)
    return _ne(omega, _paraxial_theta(q, omega, crystal, polarization), crystal)


def kappa_values(q, omega, polarization, crystal):
    """Vectorized kappa without the evanescent check: evanescent entries are NaN."""
    q = np.asarray(q, dtype=float)
    omega = np.asarray(omega, dtype=float)
    n = _index_for(q, omega, crystal, polarization)
    k = n * omega / C_LIGHT
    k2 = k * k - np.sum(q * q, axis=-1)
    with np.errstate(invalid="ignore"):
        return np.sqrt(np.where(k2 >= 0, k2, np.nan))


def kappa(mode, crystal, exact_angle=False):
    """Longitudinal wavevector sqrt[(n omega/c)^2 - |q|^2] of ``mode``."""
    n = _index_for(mode.q, mode.omega, crystal, mode.polarization, exact=exact_angle)
    k = n * mode.omega / C_LIGHT
    k2 = k * k - np.sum(mode.q * mode.q, axis=-1)
    if np.any(k2 < 0):
        raise Evanescent("|q| exceeds n*omega/c; mode does not propagate")
    return np.sqrt(k2)


def kappa_derivatives(q, omega, polarization, crystal):
    """kappa with its gradient and Hessian in q (paraxial angle rule).

    Returns ``(kappa, grad, hess)`` with shapes (...), (..., 2), (..., 2, 2).
    Evanescent entries come back as NaN.
    """
    q = np.asarray(q, dtype=float)
    omega = np.asarray(omega, dtype=float)
    polarization = Polarization(polarization)
    k0 = omega / C_LIGHT
    shape = np.broadcast_shapes(q.shape[:-1], omega.shape)
    q = np.broadcast_to(q, shape + (2,))
    k0 = np.broadcast_to(k0, shape)
    grad_k2 = -2.0 * q
    hess_k2 = np.zeros(shape + (2, 2))
    hess_k2[..., 0, 0] = -2.0
    hess_k2[..., 1, 1] = -2.0
    if polarization is Polarization.ORDINARY:
        n = np.broadcast_to(n_ordinary(omega, crystal), shape)
    else:
        ax = crystal.axis_index
        n_c = _n_along_axis(omega, crystal, polarization)
        t = 1.0 / (n_c * k0)
        theta = crystal.cut_angle - q[..., ax] * t
        inv_o2 = 1.0 / n_ordinary(omega, crystal) ** 2
        inv_e2 = 1.0 / n_principal_e(omega, crystal) ** 2
        u = np.cos(theta) ** 2 * inv_o2 + np.sin(theta) ** 2 * inv_e2
        du = np.sin(2 * theta) * (inv_e2 - inv_o2)
        ddu = 2 * np.cos(2 * theta) * (inv_e2 - inv_o2)
        n = u ** -0.5
        dn = -0.5 * u ** -1.5 * du
        ddn = 0.75 * u ** -2.5 * du * du - 0.5 * u ** -1.5 * ddu
        n_q = -t * dn
        n_qq = t * t * ddn
        grad_k2[..., ax] += 2 * n * n_q * k0 * k0
        hess_k2[..., ax, ax] += 2 * (n_q * n_q + n * n_qq) * k0 * k0
    k2 = (n * k0) ** 2 - np.sum(q * q, axis=-1)
    with np.errstate(invalid="ignore"):
        kap = np.sqrt(np.where(k2 >= 0, k2, np.nan))
    grad = grad_k2 / (2 * kap[..., None])
    hess = hess_k2 / (2 * kap[..., None, None]) - (
        grad_k2[..., :, None] * grad_k2[..., None, :]
    ) / (4 * kap[..., None, None] ** 3)
    return kap, grad, hess


def group_wavenumber(omega, polarization, crystal, rel_step=1e-6):
    """d kappa / d omega at q = 0 and theta = cut angle (central difference)."""
    h = rel_step * omega
    def k_axis(w):
        return _n_along_axis(w, crystal, polarization) * w / C_LIGHT
    return (k_axis(omega + h) - k_axis(omega - h)) / (2 * h)


def group_delay_mismatch(crystal, omega_degenerate, rel_step=1e-6):
    """D = d(kappa_o - kappa_e)/d omega at q = 0 (s/m); D*L is the 1-D dip width."""
    h = rel_step * omega_degenerate
    def diff(w):
        return (n_ordinary(w, crystal) - _ne(w, crystal.cut_angle, crystal)) * w / C_LIGHT
    return float((diff(omega_degenerate + h) - diff(omega_degenerate - h)) / (2 * h))


def solve_cut_angle(crystal, omega_pump):
    """Cut angle giving collinear degenerate type-II phase matching (e -> o + e)."""
    w = omega_pump / 2

    def mismatch(theta):
        return (
            _ne(omega_pump, theta, crystal) * omega_pump
            - n_ordinary(w, crystal) * w
            - _ne(w, theta, crystal) * w
        ) / C_LIGHT

    lo, hi = 1e-9, np.pi / 2
    if mismatch(lo) * mismatch(hi) > 0:
        raise NoConvergence("no type-II collinear phase-matching angle in [0, pi/2]")
    return brentq(mismatch, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)


# ---------------------------------------------------------------------------
# material presets


@dataclass(frozen=True)
class Material:
    name: str
    sellmeier_o: tuple
    sellmeier_e: tuple
    band_um: tuple
    cut_angle: float = None
    principal_plane_axis: str = "x"
    source: str = ""
    extra: dict = field(default_factory=dict)

    def crystal(self, length, cut_angle=None):
        theta = self.cut_angle if cut_angle is None else cut_angle
        if theta is None:
            raise ConfigError(f"material {self.name} has no cut angle; give one explicitly")
        return CrystalSpec(
            sellmeier_o=self.sellmeier_o,
            sellmeier_e=self.sellmeier_e,
            cut_angle=theta,
            length=length,
            principal_plane_axis=self.principal_plane_axis,
            band_um=self.band_um,
            name=self.name,
        )


def _floats(value, lineno, key, count=None):
    try:
        vals = tuple(float(v) for v in value.split(","))
    except ValueError:
        raise ConfigError(f"{key}: expected number(s), got {value!r}", line=lineno, key=key) from None
    if count is not None and len(vals) != count:
        raise ConfigError(f"{key}: expected {count} values", line=lineno, key=key)
    return vals


def parse_material(text, name="custom"):
    coeffs = {"o": {}, "e": {}}
    info = {"name": name, "band_um": None, "cut_angle": None, "axis": "x", "source": ""}
    extra = {}
    for lineno, key, value in parse_flat(text):
        if key.startswith(("sellmeier_o.", "sellmeier_e.")):
            which, term = key[10], key.split(".", 1)[1]
            if term not in "ABCD" or len(term) != 1:
                raise ConfigError(f"unknown Sellmeier term {key!r}", line=lineno, key=key)
            coeffs[which][term] = _floats(value, lineno, key, 1)[0]
        elif key == "validity_band_nm":
            lo, hi = _floats(value, lineno, key, 2)
            info["band_um"] = (lo * 1e-3, hi * 1e-3)
        elif key == "cut_angle_deg":
            info["cut_angle"] = np.deg2rad(_floats(value, lineno, key, 1)[0])
        elif key == "principal_plane_axis":
            if value not in ("x", "y"):
                raise ConfigError("principal_plane_axis must be x or y", line=lineno, key=key)
            info["axis"] = value
        elif key == "name":
            info["name"] = value
        elif key == "source":
            info["source"] = value
        else:
            extra[key] = value
    for which in "oe":
        missing = [t for t in "ABCD" if t not in coeffs[which]]
        if missing:
            raise ConfigError(f"material {name}: missing sellmeier_{which}.{','.join(missing)}")
    if info["band_um"] is None:
        raise ConfigError(f"material {name}: missing validity_band_nm")
    return Material(
        name=info["name"],
        sellmeier_o=tuple(coeffs["o"][t] for t in "ABCD"),
        sellmeier_e=tuple(coeffs["e"][t] for t in "ABCD"),
        band_um=info["band_um"],
        cut_angle=info["cut_angle"],
        principal_plane_axis=info["axis"],
        source=info["source"],
        extra=extra,
    )


def load_material(name_or_path):
    """Load a material preset by name (shipped data dir) or by file path."""
    path = Path(name_or_path)
    if not path.suffix:
        path = MATERIAL_DIR / f"{name_or_path}.cfg"
    if not path.exists():
        raise ConfigError(f"unknown material {name_or_path!r}")
    return parse_material(path.read_text(encoding="utf-8"), name=path.stem)
