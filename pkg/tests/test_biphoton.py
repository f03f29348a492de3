import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spdcsim.biphoton import BiphotonKernel, sinc
from spdcsim.dispersion import C_LIGHT, Polarization, kappa_values
from spdcsim.errors import Evanescent
from spdcsim.pump import PumpSpectrum

from conftest import omega_nm


@pytest.fixture(scope="module")
def kernel(bbo):
    return BiphotonKernel(bbo.crystal(3e-3), PumpSpectrum.from_wavelength(406.0, 1.0))


@given(st.floats(-1e-3, 1e-3))
def test_sinc_series_branch(x):
    exact = np.sin(x) / x if x != 0 else 1.0
    assert sinc(x) == pytest.approx(exact, rel=1e-15)


def test_sinc_zeros():
    assert sinc(np.pi) == pytest.approx(0.0, abs=1e-15)
    assert sinc(np.array([0.0, 2.0])).shape == (2,)


def test_degenerate_collinear_phase_matched(kernel):
    w = kernel.pump.center_omega / 2
    delta = kernel.mismatch(np.zeros(2), np.zeros(2), w, w)
    assert abs(delta * kernel.length) < 1e-5
    phi = kernel.phi(np.zeros(2), np.zeros(2), w, w)
    assert abs(phi) == pytest.approx(kernel.length, rel=1e-9)


def test_phi_modulus_bounded(kernel):
    rng = np.random.default_rng(1)
    w = kernel.pump.center_omega / 2
    q = rng.normal(scale=2e4, size=(50, 2))
    mu = rng.normal(scale=1e12, size=50)
    phi = kernel.phi(q, -q, w + mu, w - mu)
    assert np.all(np.abs(phi) <= kernel.length * (1 + 1e-12))


def test_phi_phase_is_minus_half_delta_l(kernel):
    w = kernel.pump.center_omega / 2
    qo, qe = np.array([1e4, 0.0]), np.array([-1e4, 0.0])
    delta = kernel.mismatch(qo, qe, w + 3e11, w - 3e11)
    phi = kernel.phi(qo, qe, w + 3e11, w - 3e11)
    s = sinc(0.5 * kernel.length * delta)
    expected = np.exp(-0.5j * kernel.length * delta) * np.sign(s)
    assert phi / abs(phi) == pytest.approx(expected, rel=1e-10)


def test_mismatch_definition(kernel):
    crystal = kernel.crystal
    qo, qe = np.array([2e4, 1e4]), np.array([-1.5e4, 3e3])
    wo, we = omega_nm(800.0), omega_nm(824.0)
    expected = (
        kappa_values(qo + qe, wo + we, Polarization.PUMP, crystal)
        - kappa_values(qo, wo, Polarization.ORDINARY, crystal)
        - kappa_values(qe, we, Polarization.EXTRAORDINARY, crystal)
    )
    assert kernel.mismatch(qo, qe, wo, we) == pytest.approx(expected, rel=1e-14)


def test_evanescent_raises(kernel):
    w = kernel.pump.center_omega / 2
    big = np.array([2.0 * w / C_LIGHT, 0.0])
    with pytest.raises(Evanescent):
        kernel.phi(big, -big, w, w)
    assert np.isnan(kernel.mismatch_values(big, -big, w, w))


def test_pump_amplitude_enters(bbo):
    pump = PumpSpectrum.from_wavelength(406.0, 1.0)
    k = BiphotonKernel(bbo.crystal(1e-3), pump)
    w = pump.center_omega / 2
    off = w + 0.5 * pump.fwhm_omega / 2
    full = abs(k.phi(np.zeros(2), np.zeros(2), w, w))
    edge = k.phi(np.zeros(2), np.zeros(2), off, off)
    delta = k.mismatch(np.zeros(2), np.zeros(2), off, off)
    assert abs(edge) == pytest.approx(np.sqrt(0.5) * k.length * abs(sinc(0.5 * k.length * delta)), rel=1e-10)
    assert full > 0


def test_linear_expansion_agrees_at_carrier(bbo):
    crystal = bbo.crystal(3e-3)
    pump = PumpSpectrum.from_wavelength(406.0, 1.0)
    exact = BiphotonKernel(crystal, pump)
    lin = BiphotonKernel(crystal, pump, "linear")
    w = pump.center_omega / 2
    q = np.array([1e4, -5e3])
    assert lin.mismatch(q, -q, w, w) == pytest.approx(exact.mismatch(q, -q, w, w), rel=1e-13)
    # first derivative in mu matches too, so the difference is second order
    h = 1e11
    d_lin = lin.mismatch(q, -q, w + h, w - h) - lin.mismatch(q, -q, w - h, w + h)
    d_ex = exact.mismatch(q, -q, w + h, w - h) - exact.mismatch(q, -q, w - h, w + h)
    assert d_lin == pytest.approx(d_ex, rel=1e-3)


def test_bad_expansion(bbo):
    with pytest.raises(ValueError):
        BiphotonKernel(bbo.crystal(1e-3), PumpSpectrum.from_wavelength(406.0), "cubic")


def test_antipodal_slice(kernel):
    w = kernel.pump.center_omega / 2
    q = np.array([[1e4, 2e4], [-3e4, 5e3]])
    wo, we = w + 2e12, w - 2e12
    for sign in (1, -1):
        delta, grad, hess = kernel.antipodal_mismatch(q, wo, we, sign)
        # Delta is a difference of ~1e7 rad/m terms
        assert delta == pytest.approx(kernel.mismatch_values(sign * q, -sign * q, wo, we), abs=1e-7)
        h = np.array([1.0, 0.0])
        fd = (kernel.mismatch_values(sign * (q + h), -sign * (q + h), wo, we)
              - kernel.mismatch_values(sign * (q - h), -sign * (q - h), wo, we)) / 2
        assert grad[:, 0] == pytest.approx(fd, rel=1e-5, abs=1e-9)
        assert hess.shape == (2, 2, 2)
