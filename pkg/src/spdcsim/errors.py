"""Exception hierarchy shared by every module."""


class SimulationError(Exception):
    """Base class for all errors raised by spdcsim."""


class OutOfBand(SimulationError):
    """A refractive index was requested outside the material's validity band."""


class Evanescent(SimulationError):
    """A transverse wavevector exceeds the propagating limit n*omega/c."""


class NoConvergence(SimulationError):
    """An iterative solve did not reach its tolerance."""


class DegeneratePattern(SimulationError):
    """A pattern metric is undefined (zero baseline, no identifiable dip)."""


class GridTooLarge(SimulationError):
    """A brute-force evaluation was asked to visit too many nodes."""


class GridError(SimulationError):
    """Quadrature grid is misconfigured (e.g. too many evanescent nodes)."""


class ConfigError(SimulationError):
    """Invalid scenario or material file.

    ``line`` is the 1-based line number in the source file when known.
    """

    def __init__(self, message, line=None, key=None):
        self.line = line
        self.key = key
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)
