"""Hilbert-type operators as frequency-domain multipliers.

The 1D Hilbert transform multiplies the spectrum by ``-j sign(w)``; the
fractional transform is ``H_tau = cos(pi tau) I - sin(pi tau) H``. The 2D
directional versions replace ``sign(w)`` by ``sign(u_theta . w)``.

Bins that are their own conjugate partner (DC and Nyquist) cannot carry an
imaginary multiplier without producing a complex result, so the Hilbert
multiplier is 0 there. As a consequence the operators are unitary, and form a
group, only on signals with empty DC and Nyquist bins.
"""
from __future__ import annotations

import numpy as np

from ._validation import check_finite, check_image, check_signal
from .spectral import frequency_grid, frequency_grid2

__all__ = [
    "reduce_direction",
    "direction_vector",
    "hilbert_multiplier",
    "directional_hilbert_multiplier",
    "fractional_multiplier",
    "hilbert",
    "fractional_hilbert",
    "directional_hilbert",
    "fractional_directional_hilbert",
]

# Snapping threshold for direction-vector components; see direction_vector.
_SNAP = 1e-14


def reduce_direction(theta):
    """Map ``theta`` into ``[0, pi)``."""
    theta = check_finite(theta, "theta")
    return float(np.mod(theta, np.pi))


def direction_vector(theta):
    """Unit vector ``(cos theta, sin theta)`` after reducing ``theta`` mod pi.

    Components that should vanish or coincide in magnitude for the multiples of
    ``pi/4`` are snapped, so that the zero set ``u . w = 0`` of the directional
    multiplier is hit exactly on a square grid for those directions.
    """
    theta = reduce_direction(theta)
    c, s = np.cos(theta), np.sin(theta)
    if abs(c) < _SNAP:
        c = 0.0
    if abs(s) < _SNAP:
        s = 0.0
    if c != 0 and s != 0 and abs(abs(c) - abs(s)) < _SNAP:
        s = np.copysign(abs(c), s)
    return c, s


def hilbert_multiplier(n, nyquist=0.0):
    """``-j sign(w)`` on the length-``n`` grid, with DC at 0 and Nyquist at ``nyquist``.

    ``nyquist`` must be real; the default 0 is the standard convention. A
    dual-tree wavelet system pairs its trees with ``nyquist=1`` (see
    :attr:`dtcwt_fht.splines.WaveletSystem.pairing_nyquist`).
    """
    m = -1j * np.sign(frequency_grid(n))
    m[n // 2] = float(nyquist)
    return m


def directional_hilbert_multiplier(n, theta):
    """``-j sign(u_theta . w)`` on the ``n x n`` grid (axis 0 is y, axis 1 is x).

    Bins on the line ``u . w = 0`` get 0. Bins whose conjugate partner does not
    receive the conjugate multiplier (the self-conjugate bins, and for oblique
    directions the aliased Nyquist row/column) are also set to 0, which keeps
    the operator real.
    """
    c, s = direction_vector(theta)
    wy, wx = frequency_grid2(n)
    m = -1j * np.sign(c * wx + s * wy)
    partner = np.roll(np.flip(m, axis=(0, 1)), 1, axis=(0, 1))
    m[partner != np.conj(m)] = 0
    return m


def fractional_multiplier(hilbert_mult, tau):
    """Multiplier of ``cos(pi tau) I - sin(pi tau) H`` given the multiplier of ``H``."""
    tau = check_finite(tau, "tau")
    return np.cos(np.pi * tau) - np.sin(np.pi * tau) * np.asarray(hilbert_mult)


def hilbert(signal):
    """Hilbert transform of a real periodic signal."""
    signal = check_signal(signal)
    return np.fft.ifft(np.fft.fft(signal) * hilbert_multiplier(signal.size)).real


def fractional_hilbert(signal, tau, multiplier=None):
    """Fractional Hilbert transform ``H_tau`` of a real periodic signal.

    ``multiplier`` overrides the Hilbert multiplier (an array on the DFT grid);
    by default :func:`hilbert_multiplier` is used.
    """
    signal = check_signal(signal)
    if multiplier is None:
        multiplier = hilbert_multiplier(signal.size)
    spec = np.fft.fft(signal) * fractional_multiplier(multiplier, tau)
    return np.fft.ifft(spec).real


def directional_hilbert(image, theta):
    image = check_image(image)
    m = directional_hilbert_multiplier(image.shape[0], theta)
    return np.fft.ifft2(np.fft.fft2(image) * m).real


def fractional_directional_hilbert(image, theta, tau, multiplier=None):
    """``cos(pi tau) I - sin(pi tau) H_theta`` applied to a square image."""
    image = check_image(image)
    if multiplier is None:
        multiplier = directional_hilbert_multiplier(image.shape[0], theta)
    spec = np.fft.fft2(image) * fractional_multiplier(multiplier, tau)
    return np.fft.ifft2(spec).real
