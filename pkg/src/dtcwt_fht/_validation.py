"""Input validation helpers and the package's exception types."""
from __future__ import annotations

import numbers

import numpy as np


class DtcwtError(ValueError):
    """Base class for all errors raised by this package."""


class SizeError(DtcwtError):
    """A length is not a power of two, too short, or mismatched."""


class ShapeError(DtcwtError):
    """Coefficient containers are inconsistent with a wavelet system."""


class SymmetryError(DtcwtError):
    """A spectrum that should describe a real signal is not conjugate-symmetric."""


class ParameterError(DtcwtError):
    """A numeric parameter is outside its admissible range."""


class FitError(DtcwtError):
    """A fitting procedure has no well-defined solution for its input."""


def is_power_of_two(n) -> bool:
    return isinstance(n, numbers.Integral) and n > 0 and (n & (n - 1)) == 0


def check_length(n, minimum=8, name="length"):
    if not is_power_of_two(n):
        raise SizeError(f"{name} must be a power of two, got {n}")
    if n < minimum:
        raise SizeError(f"{name} must be >= {minimum}, got {n}")
    return int(n)


def check_signal(x, minimum=8, name="signal"):
    """Return `x` as a 1D float array with power-of-two length and finite samples."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise SizeError(f"{name} must be one-dimensional, got shape {x.shape}")
    check_length(x.size, minimum, f"{name} length")
    if not np.all(np.isfinite(x)):
        raise ParameterError(f"{name} contains non-finite samples")
    return x


def check_image(x, minimum=8, name="image"):
    """Return `x` as a square 2D float array with power-of-two side."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 2:
        raise ShapeError(f"{name} must be two-dimensional, got shape {x.shape}")
    if x.shape[0] != x.shape[1]:
        raise ShapeError(f"{name} must be square, got shape {x.shape}")
    check_length(x.shape[0], minimum, f"{name} side")
    if not np.all(np.isfinite(x)):
        raise ParameterError(f"{name} contains non-finite samples")
    return x


def check_positive(value, name):
    value = float(value)
    if not np.isfinite(value) or value <= 0:
        raise ParameterError(f"{name} must be a positive finite number, got {value}")
    return value


def check_finite(value, name):
    value = float(value)
    if not np.isfinite(value):
        raise ParameterError(f"{name} must be finite, got {value}")
    return value
