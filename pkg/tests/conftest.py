import numpy as np
import pytest

from spdcsim.dispersion import C_LIGHT, CrystalSpec, load_material
from spdcsim.interference import GridSpec, Scene
from spdcsim.optics import AnalyzerConfig, Aperture, OpticalPath, SpectralFilter
from spdcsim.pump import PumpSpectrum


def omega_nm(nm):
    return 2 * np.pi * C_LIGHT / (nm * 1e-9)


def constant_index_crystal(n_o, n_e=None, length=1e-3, cut_deg=45.0):
    """Dispersionless uniaxial crystal: n^2 = A with B = C = D = 0."""
    n_e = n_o if n_e is None else n_e
    return CrystalSpec((n_o ** 2, 0, 0, 0), (n_e ** 2, 0, 0, 0), np.deg2rad(cut_deg), length)


@pytest.fixture(scope="session")
def bbo():
    return load_material("BBO")


@pytest.fixture(scope="session")
def make_scene(bbo):
    """Factory for small scenes; keyword arguments override the defaults."""

    def build(
        length_mm=0.5, bandwidth_nm=0.0, d1=0.5, aperture=None, spectral_filter=None,
        angles=(45.0, -45.0), grid=None, expansion="exact", detector="bucket",
        detector_radius=None, transverse="planewave", waist_um=None,
    ):
        pump = PumpSpectrum.from_wavelength(406.0, bandwidth_nm, transverse, waist_um)
        path = OpticalPath(
            d1, 0.1, 0.1,
            aperture or Aperture("circular", 2e-3),
            spectral_filter or SpectralFilter(),
        )
        return Scene(
            bbo.crystal(length_mm * 1e-3), pump, path, AnalyzerConfig.from_degrees(*angles),
            grid or GridSpec(n_sum=6, lobes=12), expansion, detector, detector_radius,
        )

    return build


# ---------------------------------------------------------------------------
# acceptance summary: one line per criterion-marked test

_CRITERIA = {}


def pytest_runtest_logreport(report):
    marker = getattr(report, "_criterion", None)
    if marker is None:
        return
    if report.when == "call" or report.outcome != "passed":
        detail = dict(report.user_properties).get("detail", "")
        _CRITERIA.setdefault(marker, (report.outcome, detail))
        if report.outcome != "passed":
            _CRITERIA[marker] = (report.outcome, detail)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        report._criterion = mark.args


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for (number, title), (outcome, detail) in sorted(_CRITERIA.items()):
        verdict = "PASS" if outcome == "passed" else "FAIL"
        line = f"criterion {number}: {verdict}  {title}"
        terminalreporter.write_line(line + (f"  [{detail}]" if detail else ""))
