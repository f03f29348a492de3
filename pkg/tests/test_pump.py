import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spdcsim.dispersion import C_LIGHT
from spdcsim.pump import (
    PumpSpectrum,
    pump_amplitude,
    spectral_amplitude,
    spectral_support,
    transverse_amplitude,
    transverse_support,
)

# key width factor sqrt(ln(1e4) / ln 2), evaluated at 30 digits
WIDTH_1E4 = 3.6452314576099896


def test_cw_delta():
    p = PumpSpectrum.from_wavelength(406.0)
    assert p.is_cw
    assert spectral_amplitude(p.center_omega, p) == 1.0
    assert spectral_amplitude(p.center_omega * 1.001, p) == 0.0
    lo, hi = spectral_support(p, 1e-4)
    assert lo == hi == p.center_omega


def test_fwhm_in_frequency():
    p = PumpSpectrum.from_wavelength(406.0, 1.0)
    expected = 2 * np.pi * C_LIGHT * 1e-9 / 406e-9 ** 2
    assert p.fwhm_omega == pytest.approx(expected, rel=1e-14)
    # intensity halves at +-FWHM/2
    amp = spectral_amplitude(p.center_omega + p.fwhm_omega / 2, p)
    assert amp ** 2 == pytest.approx(0.5, rel=1e-12)


def test_support_width():
    p = PumpSpectrum.from_wavelength(406.0, 2.0)
    lo, hi = spectral_support(p, 1e-4)
    assert (hi - lo) / p.fwhm_omega == pytest.approx(WIDTH_1E4, rel=1e-12)
    assert spectral_amplitude(hi, p) ** 2 == pytest.approx(1e-4, rel=1e-10)


@pytest.mark.parametrize("eps", [0.0, 1.0, -1.0])
def test_support_rejects_bad_eps(eps):
    with pytest.raises(ValueError):
        spectral_support(PumpSpectrum.from_wavelength(406.0, 1.0), eps)


@given(st.floats(0.01, 10.0), st.floats(-5.0, 5.0))
def test_spectrum_even_and_bounded(bw, x):
    p = PumpSpectrum.from_wavelength(406.0, bw)
    d = x * p.fwhm_omega
    a = spectral_amplitude(p.center_omega + d, p)
    b = spectral_amplitude(p.center_omega - d, p)
    assert a == pytest.approx(b, rel=1e-9, abs=1e-300)
    assert 0 <= a <= 1


def test_transverse_profiles():
    flat = PumpSpectrum.from_wavelength(406.0)
    assert transverse_amplitude([0.0, 0.0], flat) == 1.0
    assert transverse_amplitude([1.0, 0.0], flat) == 0.0
    assert transverse_support(flat) == 0.0
    g = PumpSpectrum.from_wavelength(406.0, transverse="gaussian", waist_um=500.0)
    q = 2.0 / g.waist
    assert transverse_amplitude([q, 0.0], g) == pytest.approx(np.exp(-1.0), rel=1e-14)
    assert transverse_amplitude([0.0, q], g) == transverse_amplitude([q, 0.0], g)


def test_amplitude_is_product():
    g = PumpSpectrum.from_wavelength(406.0, 1.0, "gaussian", 300.0)
    q, w = np.array([1e3, 2e3]), g.center_omega + 0.3 * g.fwhm_omega
    value = pump_amplitude(q, w, g)
    assert value == pytest.approx(spectral_amplitude(w, g) * transverse_amplitude(q, g), rel=1e-15)
    assert np.iscomplexobj(value)


@pytest.mark.parametrize(
    "kwargs",
    [dict(center_omega=0.0), dict(center_omega=1e15, bandwidth_fwhm_nm=-1.0),
     dict(center_omega=1e15, transverse="tophat"), dict(center_omega=1e15, transverse="gaussian")],
)
def test_validation(kwargs):
    with pytest.raises(ValueError):
        PumpSpectrum(**kwargs)
