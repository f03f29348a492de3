"""Scene and grid-size descriptors shared by every integrator."""

from dataclasses import dataclass, field, fields, replace
from functools import cached_property

from ..biphoton import BiphotonKernel
from ..dispersion import CrystalSpec
from ..optics import AnalyzerConfig, OpticalPath, projection_coeffs
from ..pump import PumpSpectrum


@dataclass(frozen=True)
class GridSpec:
    """Node counts and truncation controls.

    Frequencies use sum/difference coordinates Omega = w_A + w_B - w_p0 and
    mu = (w_A - w_B) / 2.  ``n_sum`` Gauss-Legendre nodes cover the pump
    support in Omega (one node for a cw pump); the mu window is cut into
    panels about one phase-matching lobe wide with ``n_diff`` nodes each, and
    reaches ``lobes`` lobes past the phase-matching centre.

    ``n_rho`` and ``n_phi`` discretize the transverse plane (polar for
    round pupils, rectangular for slits), ``n_z`` is the Legendre order used
    for the crystal-depth integral of the bucket integrator.  The remaining
    fields only matter to the direct integrator: transverse wavevector
    nodes (``n_q_rho``, ``n_q_phi``, radius ``q_max`` in rad/m, automatic if
    None), detector nodes (``n_det_rho``, ``n_det_phi``) and pump transverse
    nodes for gaussian pumps (``n_pump_rho``, ``n_pump_phi``).
    """

    n_sum: int = 12
    n_diff: int = 8
    lobes: float = 24.0
    n_rho: int = 12
    n_phi: int = 12
    n_z: int = 6
    eps_pump: float = 1e-4
    n_q_rho: int = 8
    n_q_phi: int = 8
    q_max: float = None
    n_det_rho: int = 4
    n_det_phi: int = 4
    n_pump_rho: int = 4
    n_pump_phi: int = 4
    chunk: int = 64

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name.startswith("n_") and (not isinstance(v, int) or v < 1):
                raise ValueError(f"{f.name} must be a positive integer, got {v!r}")
        if not self.lobes > 0:
            raise ValueError("lobes must be positive")
        if not 0 < self.eps_pump < 1:
            raise ValueError("eps_pump must lie in (0, 1)")
        if self.q_max is not None and not self.q_max > 0:
            raise ValueError("q_max must be positive")
        if self.chunk < 1:
            raise ValueError("chunk must be positive")

    # the dimensions that convergence control refines
    REFINABLE = ("n_sum", "n_diff", "n_rho", "n_phi", "n_z")

    def doubled(self, name):
        return replace(self, **{name: 2 * getattr(self, name)})

    def sizes(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class Scene:
    """Everything one coincidence-rate evaluation needs, except the delay.

    ``detector`` is "bucket" (unbounded detectors) or "finite" (discs of
    radius ``detector_radius`` m centred on the axis).  Both arms share the
    same optical path.
    """

    crystal: CrystalSpec
    pump: PumpSpectrum
    path: OpticalPath
    analyzers: AnalyzerConfig
    grid: GridSpec = field(default_factory=GridSpec)
    frequency_expansion: str = "exact"
    detector: str = "bucket"
    detector_radius: float = None

    def __post_init__(self):
        if self.detector not in ("bucket", "finite"):
            raise ValueError("detector must be 'bucket' or 'finite'")
        if self.detector == "finite" and not (self.detector_radius and self.detector_radius > 0):
            raise ValueError("finite detectors need a positive detector_radius")

    @cached_property
    def kernel(self):
        return BiphotonKernel(self.crystal, self.pump, self.frequency_expansion)

    @property
    def coeffs(self):
        return projection_coeffs(self.analyzers)

    def with_grid(self, **changes):
        return replace(self, grid=replace(self.grid, **changes))

    def replace(self, **changes):
        return replace(self, **changes)
