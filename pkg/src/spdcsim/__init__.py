"""Type-II SPDC polarization-interference simulator."""

__version__ = "0.1.0"
