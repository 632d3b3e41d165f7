"""Frequency-domain plumbing shared by the transforms.

Conventions
-----------
* Unnormalized forward DFT with an ``exp(-j w x)`` kernel, ``1/N`` on the inverse.
* Bin ``m`` of a length-``N`` spectrum sits at the angular frequency
  ``2*pi*m'/(N*spacing)`` where ``m'`` is the signed alias of ``m`` in
  ``[-N/2, N/2)``. The Nyquist bin is therefore reported at ``-pi/spacing``.
* Signals are periodic with period ``N*spacing``.
"""
from __future__ import annotations

from typing import Callable, Union

import numpy as np

from ._validation import (
    ParameterError,
    SymmetryError,
    check_image,
    check_length,
    check_positive,
    check_signal,
)

Multiplier = Union[Callable[[np.ndarray], np.ndarray], np.ndarray, complex, float]

__all__ = [
    "frequency_grid",
    "frequency_grid2",
    "forward_spectrum",
    "inverse_spectrum",
    "forward_spectrum2",
    "inverse_spectrum2",
    "apply_multiplier",
    "circular_shift",
    "conjugate_asymmetry",
    "remove_dc_nyquist",
    "bandlimited_window",
    "radial_window",
    "sample_spectrum",
]


def frequency_grid(n, spacing=1.0):
    """Signed angular-frequency grid of a length-``n`` DFT."""
    spacing = check_positive(spacing, "spacing")
    return 2 * np.pi * np.fft.fftfreq(n, d=spacing)


def frequency_grid2(n, spacing=1.0):
    """Return ``(wy, wx)`` grids of shape ``(n, n)``; axis 0 is y, axis 1 is x."""
    w = frequency_grid(n, spacing)
    return np.meshgrid(w, w, indexing="ij")


def forward_spectrum(signal):
    signal = check_signal(signal)
    return np.fft.fft(signal)


def conjugate_asymmetry(spec):
    """Largest violation of ``X[m] == conj(X[-m])`` relative to ``max|X|``."""
    spec = np.asarray(spec)
    scale = np.abs(spec).max()
    if scale == 0:
        return 0.0
    mirrored = spec
    for axis in range(spec.ndim):
        mirrored = np.roll(np.flip(mirrored, axis=axis), 1, axis=axis)
    return float(np.abs(spec - np.conj(mirrored)).max() / scale)


def inverse_spectrum(spec, rtol=1e-9):
    """Inverse DFT of a conjugate-symmetric spectrum, returned as a real signal.

    Raises
    ------
    SymmetryError
        If the spectrum departs from conjugate symmetry by more than ``rtol``
        relative to its largest bin; this always indicates an upstream bug.
    """
    spec = np.asarray(spec, dtype=complex)
    if spec.ndim != 1:
        raise SymmetryError(f"expected a 1D spectrum, got shape {spec.shape}")
    check_length(spec.size, 1, "spectrum length")
    asym = conjugate_asymmetry(spec)
    if asym > rtol:
        raise SymmetryError(f"spectrum is not conjugate-symmetric (relative defect {asym:.3g})")
    return np.fft.ifft(spec).real


def forward_spectrum2(image):
    image = check_image(image)
    return np.fft.fft2(image)


def inverse_spectrum2(spec, rtol=1e-9):
    spec = np.asarray(spec, dtype=complex)
    asym = conjugate_asymmetry(spec)
    if asym > rtol:
        raise SymmetryError(f"spectrum is not conjugate-symmetric (relative defect {asym:.3g})")
    return np.fft.ifft2(spec).real


def apply_multiplier(spec, multiplier: Multiplier, spacing=1.0):
    """Pointwise product of ``spec`` with ``multiplier`` on the signed grid.

    ``multiplier`` may be a callable of the angular frequency (called with the
    1D grid, or with ``(wy, wx)`` for 2D spectra), an array of matching shape,
    or a scalar.
    """
    spec = np.asarray(spec, dtype=complex)
    if callable(multiplier):
        if spec.ndim == 1:
            values = multiplier(frequency_grid(spec.size, spacing))
        else:
            values = multiplier(*frequency_grid2(spec.shape[0], spacing))
    else:
        values = multiplier
    values = np.broadcast_to(np.asarray(values, dtype=complex), spec.shape)
    if not np.all(np.isfinite(values)):
        raise ParameterError("multiplier is not finite on the frequency grid")
    return spec * values


def circular_shift(x, k):
    """Delay ``x`` by ``k`` samples with periodic wraparound."""
    return np.roll(np.asarray(x), k, axis=-1)


def remove_dc_nyquist(x):
    """Project a real signal onto the subspace with empty DC and Nyquist bins."""
    spec = np.fft.fft(np.asarray(x, dtype=float))
    spec[0] = 0
    spec[spec.size // 2] = 0
    return np.fft.ifft(spec).real


def _raised_cosine(radius, cutoff):
    bump = 0.5 * (1 + np.cos(np.pi * np.minimum(radius / cutoff, 1.0)))
    return np.where(radius < cutoff, bump, 0.0)


def bandlimited_window(n, omega, spacing=1.0):
    """Real, symmetric window whose spectrum is a raised-cosine bump on ``[-omega, omega]``.

    The window is centred on sample 0 (circularly) and scaled to a unit peak.
    Every bin with ``|w| >= omega`` is exactly zero.
    """
    n = check_length(n, 8, "n")
    omega = check_positive(omega, "omega")
    spacing = check_positive(spacing, "spacing")
    if omega >= np.pi / spacing:
        raise ParameterError(f"omega={omega} must be below the Nyquist frequency {np.pi / spacing}")
    bump = _raised_cosine(np.abs(frequency_grid(n, spacing)), omega)
    if bump.sum() == 0:
        raise ParameterError("omega is narrower than one frequency bin")
    return np.fft.ifft(bump).real * (n / bump.sum())


def radial_window(n, radius, spacing=1.0):
    """2D analogue of :func:`bandlimited_window` with a radially symmetric bump."""
    n = check_length(n, 8, "n")
    radius = check_positive(radius, "radius")
    spacing = check_positive(spacing, "spacing")
    if radius >= np.pi / spacing:
        raise ParameterError(f"radius={radius} must be below the Nyquist frequency {np.pi / spacing}")
    wy, wx = frequency_grid2(n, spacing)
    bump = _raised_cosine(np.hypot(wx, wy), radius)
    return np.fft.ifft2(bump).real * (n * n / bump.sum())


def sample_spectrum(spectrum, n, spacing, origin=0.0):
    """Sample the periodization of a function given by its Fourier transform.

    Returns ``f(origin + k*spacing)`` for ``k = 0..n-1`` where ``f`` has period
    ``n*spacing`` and Fourier-series coefficients ``spectrum(w_m)/(n*spacing)``.
    The Nyquist bin is dropped so that real-valued spectra give real samples.
    """
    w = frequency_grid(n, spacing)
    values = np.asarray(spectrum(w), dtype=complex) * np.exp(1j * w * origin)
    values[n // 2] = 0
    return np.fft.ifft(values) / spacing
