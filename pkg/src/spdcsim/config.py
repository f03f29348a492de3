"""Scenario files: a typed, flat ``section.key = value`` schema.

Every key is optional except the ones marked required in ``SCHEMA``.
Quantities carry their unit in the key name (``_mm``, ``_nm``, ``_um``,
``_fs``, ``_deg``).  A scenario can also be loaded back from the JSON sidecar written
by a sweep, which stores the fully resolved key set.
"""

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .dispersion import load_material, solve_cut_angle
from .errors import ConfigError, SimulationError
from .flatfile import format_flat, parse_flat
from .interference.scene import GridSpec, Scene
from .optics import AnalyzerConfig, Aperture, OpticalPath, SpectralFilter
from .pump import PumpSpectrum

PRESET_ENV = "SPDC_PRESET_DIR"
PRESET_DIR = Path(__file__).parent / "data" / "presets"


def _choice(*options):
    def check(v):
        if v not in options:
            raise ValueError(f"expected one of {', '.join(options)}")
    return check


def _positive(v):
    if not v > 0:
        raise ValueError("must be positive")


def _non_negative(v):
    if not v >= 0:
        raise ValueError("must be >= 0")


def _angle(v):
    if not -360.0 <= v <= 360.0:
        raise ValueError("angle must lie in [-360, 360] degrees")


def _cut(v):
    if v != "auto" and not 0.0 <= v <= 90.0:
        raise ValueError("cut angle must lie in [0, 90] degrees or be 'auto'")


# key: (type, default, validator); default None means "unset"
SCHEMA = {
    "name": (str, None, None),
    "crystal.material": (str, "BBO", None),
    "crystal.length_mm": (float, None, _positive),
    "crystal.cut_angle_deg": ("cut", None, _cut),
    "crystal.frequency_expansion": (str, "exact", _choice("exact", "linear")),
    "pump.center_wavelength_nm": (float, 406.0, _positive),
    "pump.bandwidth_fwhm_nm": (float, 0.0, _non_negative),
    "pump.transverse": (str, "planewave", _choice("planewave", "gaussian")),
    "pump.waist_um": (float, None, _positive),
    "path.d1_mm": (float, 1000.0, _positive),
    "path.d2_mm": (float, 100.0, _positive),
    "path.f_mm": (float, 100.0, _positive),
    "path.aperture": (str, "circular", _choice("circular", "slit", "gaussian", "open")),
    "path.aperture_size_mm": (float, None, _non_negative),
    "path.aperture_length_mm": (float, None, _positive),
    "path.aperture_orientation": (str, "x", _choice("x", "y")),
    "path.filter": (str, "open", _choice("open", "gaussian", "tophat")),
    "path.filter_center_nm": (float, None, _positive),
    "path.filter_fwhm_nm": (float, None, _positive),
    "analyzers.alpha_a_deg": (float, 45.0, _angle),
    "analyzers.alpha_b_deg": (float, -45.0, _angle),
    "detector.kind": (str, "bucket", _choice("bucket", "finite")),
    "detector.radius_mm": (float, None, _positive),
    "sweep.tau_start_fs": (float, None, None),
    "sweep.tau_stop_fs": (float, None, None),
    "sweep.steps": (int, 201, None),
    "integrator.method": (str, "auto", _choice("auto", "fast", "direct")),
    "convergence.tolerance": (float, 1e-3, _positive),
    "oracle.one_dimensional": (bool, False, None),
    "oracle.tolerance": (float, 1e-3, _positive),
}
for _f, _default in GridSpec().sizes().items():
    if _f == "q_max":
        SCHEMA["grid.q_max"] = (float, None, _positive)
    elif _f in ("lobes", "eps_pump"):
        SCHEMA[f"grid.{_f}"] = (float, _default, _positive)
    else:
        SCHEMA[f"grid.{_f}"] = (int, _default, _positive)

REQUIRED = ("crystal.length_mm", "sweep.tau_start_fs", "sweep.tau_stop_fs")


def _convert(kind, raw):
    if kind is str:
        return raw
    if kind is bool:
        low = raw.lower()
        if low in ("true", "yes", "1"):
            return True
        if low in ("false", "no", "0"):
            return False
        raise ValueError("expected true or false")
    if kind is int:
        return int(raw)
    if kind == "cut":
        return "auto" if raw == "auto" else float(raw)
    value = float(raw)
    if not np.isfinite(value):
        raise ValueError("must be finite")
    return value


def _typed(key, value):
    """Validate a value that is already a Python object (JSON sidecar path)."""
    kind, _, check = SCHEMA[key]
    if value is None:
        return None
    if kind is float and isinstance(value, (int, float)) and not isinstance(value, bool):
        value = float(value)
    elif kind is int and isinstance(value, int) and not isinstance(value, bool):
        pass
    elif kind is bool and isinstance(value, bool):
        pass
    elif kind is str and isinstance(value, str):
        pass
    elif kind == "cut" and (value == "auto" or isinstance(value, (int, float))):
        value = value if value == "auto" else float(value)
    else:
        raise ValueError(f"wrong type {type(value).__name__}")
    if check:
        check(value)
    return value


@dataclass
class Scenario:
    values: dict
    lines: dict = field(default_factory=dict)
    source: str = "<memory>"

    # -- construction ----------------------------------------------------

    @classmethod
    def from_text(cls, text, source="<memory>"):
        values, lines = {}, {}
        for lineno, key, raw in parse_flat(text):
            if key not in SCHEMA:
                raise ConfigError(f"unknown key {key!r}", line=lineno, key=key)
            kind, _, check = SCHEMA[key]
            try:
                value = _convert(kind, raw)
                if check:
                    check(value)
            except ValueError as exc:
                raise ConfigError(f"{key}: {exc} (got {raw!r})", line=lineno, key=key) from None
            values[key], lines[key] = value, lineno
        return cls._finish(values, lines, source)

    @classmethod
    def from_mapping(cls, mapping, source="<memory>"):
        values = {}
        for key, value in mapping.items():
            if key not in SCHEMA:
                raise ConfigError(f"unknown key {key!r}", key=key)
            try:
                values[key] = _typed(key, value)
            except ValueError as exc:
                raise ConfigError(f"{key}: {exc}", key=key) from None
        return cls._finish({k: v for k, v in values.items() if v is not None}, {}, source)

    @classmethod
    def _finish(cls, values, lines, source):
        for key in REQUIRED:
            if key not in values:
                raise ConfigError(f"missing required key {key!r}", key=key)
        full = {k: spec[1] for k, spec in SCHEMA.items()}
        full.update(values)
        if full["name"] is None:
            full["name"] = Path(source).stem if source != "<memory>" else "scenario"
        scenario = cls(full, lines, source)
        scenario._check_consistency()
        return scenario

    def error(self, key, message):
        return ConfigError(f"{key}: {message}", line=self.lines.get(key), key=key)

    def _check_consistency(self):
        v = self.values
        if v["sweep.steps"] < 2:
            raise self.error("sweep.steps", "at least 2 steps are needed")
        if not v["sweep.tau_stop_fs"] > v["sweep.tau_start_fs"]:
            raise self.error("sweep.tau_stop_fs", "must exceed sweep.tau_start_fs")
        if v["path.aperture"] != "open" and v["path.aperture_size_mm"] is None:
            raise self.error("path.aperture_size_mm", f"required for a {v['path.aperture']} aperture")
        if v["pump.transverse"] == "gaussian" and v["pump.waist_um"] is None:
            raise self.error("pump.waist_um", "required for a gaussian pump")
        if v["path.filter"] != "open":
            for key in ("path.filter_center_nm", "path.filter_fwhm_nm"):
                if v[key] is None:
                    raise self.error(key, f"required for a {v['path.filter']} filter")
        if v["detector.kind"] == "finite" and v["detector.radius_mm"] is None:
            raise self.error("detector.radius_mm", "required for finite detectors")
        if v["oracle.one_dimensional"] and v["pump.bandwidth_fwhm_nm"] > 0:
            raise self.error("oracle.one_dimensional", "the 1-D model needs a cw pump (pump.bandwidth_fwhm_nm = 0)")
        # build once so parameter errors surface as config errors
        self.scene()

    def with_steps(self, steps):
        values = dict(self.values, **{"sweep.steps": steps})
        lines = {k: n for k, n in self.lines.items() if k != "sweep.steps"}
        out = Scenario(values, lines, self.source)
        out._check_consistency()
        return out

    # -- physics objects -------------------------------------------------

    def material(self):
        try:
            return load_material(self.values["crystal.material"])
        except ConfigError as exc:
            raise self.error("crystal.material", str(exc)) from None

    def pump(self):
        v = self.values
        return PumpSpectrum.from_wavelength(
            v["pump.center_wavelength_nm"], v["pump.bandwidth_fwhm_nm"], v["pump.transverse"], v["pump.waist_um"]
        )

    def crystal(self):
        v = self.values
        mat = self.material()
        length = v["crystal.length_mm"] * 1e-3
        cut = v["crystal.cut_angle_deg"]
        if cut == "auto":
            probe = mat.crystal(length, cut_angle=np.pi / 4)
            try:
                return probe.with_cut_angle(solve_cut_angle(probe, self.pump().center_omega))
            except SimulationError as exc:
                raise self.error("crystal.cut_angle_deg", str(exc)) from None
        return mat.crystal(length, None if cut is None else np.deg2rad(cut))

    def scene(self):
        v = self.values
        key = "crystal"
        try:
            crystal = self.crystal()
            key = "pump"
            pump = self.pump()
            key = "path.aperture"
            mm = v["path.aperture_size_mm"]
            aperture = Aperture(
                v["path.aperture"],
                None if mm is None else mm * 1e-3,
                v["path.aperture_orientation"],
                None if v["path.aperture_length_mm"] is None else v["path.aperture_length_mm"] * 1e-3,
            )
            key = "path.filter"
            filt = SpectralFilter(v["path.filter"], v["path.filter_center_nm"], v["path.filter_fwhm_nm"])
            key = "path"
            path = OpticalPath(v["path.d1_mm"] * 1e-3, v["path.d2_mm"] * 1e-3, v["path.f_mm"] * 1e-3, aperture, filt)
            key = "grid"
            grid = GridSpec(**{k[5:]: v[k] for k in SCHEMA if k.startswith("grid.")})
            key = "detector"
            radius = v["detector.radius_mm"]
            return Scene(
                crystal, pump, path,
                AnalyzerConfig.from_degrees(v["analyzers.alpha_a_deg"], v["analyzers.alpha_b_deg"]),
                grid, v["crystal.frequency_expansion"], v["detector.kind"],
                None if radius is None else radius * 1e-3,
            )
        except (ValueError, SimulationError) as exc:
            if isinstance(exc, ConfigError):
                raise
            line = min((n for k, n in self.lines.items() if k.startswith(key)), default=None)
            raise ConfigError(f"{key}: {exc}", line=line, key=key) from None

    # -- sweep -----------------------------------------------------------

    @property
    def tau(self):
        v = self.values
        return np.linspace(v["sweep.tau_start_fs"], v["sweep.tau_stop_fs"], v["sweep.steps"]) * 1e-15

    @property
    def method(self):
        return self.values["integrator.method"]

    def resolved(self):
        return dict(self.values)

    def to_text(self):
        return format_flat({k: v for k, v in self.values.items() if v is not None})


def preset_dirs():
    dirs = []
    env = os.environ.get(PRESET_ENV)
    if env:
        dirs.append(Path(env))
    dirs.append(PRESET_DIR)
    return dirs


def list_presets():
    names = set()
    for d in preset_dirs():
        if d.is_dir():
            names.update(p.stem for p in d.glob("*.cfg"))
    return sorted(names)


def resolve_path(name_or_path):
    """A scenario file path, or a preset name looked up in the preset directories."""
    path = Path(name_or_path)
    if path.is_file():
        return path
    for d in preset_dirs():
        candidate = d / f"{name_or_path}.cfg"
        if candidate.is_file():
            return candidate
    raise ConfigError(f"no scenario file or preset named {str(name_or_path)!r}")


def load_scenario(name_or_path):
    path = resolve_path(name_or_path)
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".json":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON: {exc.msg}", line=exc.lineno) from None
        if not isinstance(data, dict) or "resolved_config" not in data:
            raise ConfigError("JSON scenario must contain a 'resolved_config' object")
        return Scenario.from_mapping(data["resolved_config"], source=str(path))
    return Scenario.from_text(text, source=str(path))
