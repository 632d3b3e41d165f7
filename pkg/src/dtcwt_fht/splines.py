"""Fractional (alpha, tau) B-spline wavelet systems built in the frequency domain.

Two trees share the degree ``alpha``; tree ``a`` uses the shift ``tau`` and
tree ``b`` uses ``tau + 1/2``. Changing the shift by one half only changes the
phase of the B-spline spectrum, and after orthonormalization the two mother
wavelets are a Hilbert pair on the whole frequency axis.

The discrete transform always runs through the orthonormal filter bank. The
*synthesis* functions can be either the orthonormal ones or the semi-orthogonal
B-spline ones (``basis="bspline"``, the default). The latter converge to Gabor
functions as ``alpha`` grows, while the orthonormal wavelets do not. They span
the same wavelet spaces, so switching basis is a fixed per-level filter
applied to the coefficients.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ._validation import (
    FitError,
    ParameterError,
    SizeError,
    check_finite,
    check_length,
    check_positive,
)
from .spectral import frequency_grid, sample_spectrum

__all__ = [
    "SplineParams",
    "WaveletSystem",
    "GaborFit",
    "bspline_spectrum",
    "autocorrelation",
    "autocorrelation_terms",
    "build_system",
    "fit_gabor",
    "gabor_fit",
    "BASES",
]

BASES = ("bspline", "orthonormal")
TAIL_TOLERANCE = 1e-12
DEFAULT_FINE_SPACING = 1.0 / 16
DEFAULT_MIN_FINE_LENGTH = 4096


@dataclass(frozen=True)
class SplineParams:
    """Degree ``alpha`` (approximation order ``alpha + 1``) and base shift ``tau``."""

    alpha: float
    tau: float = 0.0

    def __post_init__(self):
        alpha = check_finite(self.alpha, "alpha")
        if alpha < 1:
            raise ParameterError(f"alpha must be >= 1, got {alpha}")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "tau", check_finite(self.tau, "tau"))

    def shift(self, tree):
        if tree == "a":
            return self.tau
        if tree == "b":
            return self.tau + 0.5
        raise ValueError(f"tree must be 'a' or 'b', got {tree!r}")


def _wrap_phase(phase):
    """Wrap into ``(-pi, pi]``."""
    return np.pi - np.mod(np.pi - phase, 2 * np.pi)


def _reduce(omega):
    """Wrap an angular frequency into ``[-pi, pi)``."""
    return np.mod(omega + np.pi, 2 * np.pi) - np.pi


def bspline_spectrum(alpha, tau, omega):
    """Fourier transform of the fractional B-spline of degree ``alpha`` and shift ``tau``.

    Evaluates ``u**((alpha+1)/2 + tau) * conj(u)**((alpha+1)/2 - tau)`` with
    ``u = (1 - exp(-jw))/(jw)`` on the principal branch. Writing
    ``u = exp(-jw/2) sinc(w/2)`` this is ``|sinc(w/2)|**(alpha+1) *
    exp(2j tau Arg u)``, the form used here; it has no trouble at the zeros
    ``w = 2 pi k`` and takes the value 1 at ``w = 0``.
    """
    omega = np.asarray(omega, dtype=float)
    sinc = np.sinc(omega / (2 * np.pi))
    arg_u = _wrap_phase(-omega / 2 + np.where(sinc < 0, np.pi, 0.0))
    return np.abs(sinc) ** (alpha + 1) * np.exp(2j * tau * arg_u)


def autocorrelation_terms(alpha, tol=TAIL_TOLERANCE):
    """Smallest ``K`` for which the autocorrelation tail beyond ``|n| = K`` is below ``tol``.

    For ``|w| <= pi`` the ``n``-th term is bounded by
    ``(2/((2|n|-1) pi))**(2 alpha + 2)``; the sum over ``|n| > K`` is bounded
    by twice the integral of that bound from ``K`` to infinity.
    """
    p = 2 * alpha + 2
    c = (2 / np.pi) ** p / (2 * alpha + 1)
    k = int(np.ceil(((c / tol) ** (1 / (p - 1)) + 1) / 2))
    return max(k, 1)


def autocorrelation(alpha, omega, tol=TAIL_TOLERANCE):
    """``A(w) = sum_n |beta(w + 2 pi n)|**2``, truncated with a certified tail below ``tol``."""
    alpha = float(alpha)
    if alpha < 1:
        raise ParameterError(f"alpha must be >= 1, got {alpha}")
    omega = np.asarray(omega, dtype=float)
    reduced, inverse = np.unique(_reduce(omega), return_inverse=True)
    total = np.zeros_like(reduced)
    for n in range(-autocorrelation_terms(alpha, tol), autocorrelation_terms(alpha, tol) + 1):
        total += np.abs(np.sinc((reduced + 2 * np.pi * n) / (2 * np.pi))) ** (2 * alpha + 2)
    return total[inverse].reshape(omega.shape)


def _periodic_mean(fn, points=4096):
    w = 2 * np.pi * np.arange(points) / points - np.pi
    return float(np.mean(fn(w)))


@dataclass(frozen=True, eq=False)
class WaveletSystem:
    """Frequency responses and sampled functions of a dual-tree spline wavelet system.

    Use :func:`build_system` rather than constructing this directly.

    Attributes
    ----------
    params : SplineParams
    n : int
        Signal length the filter bank is sampled for.
    levels : int
    basis : {"bspline", "orthonormal"}
        Which synthesis functions the coefficients refer to.
    lowpass, highpass : dict
        ``lowpass["a"][i-1]`` is the orthonormal lowpass response of tree ``a``
        used at level ``i``, sampled on the ``n / 2**(i-1)`` point grid.
    prefilter : ndarray
        All-pass response applied to the input of tree ``b``. It advances tree
        ``b`` by half a sample so that its wavelets are the discrete Hilbert
        transforms of tree ``a``'s.
    x : ndarray
        Abscissa of the fine grid.
    psi_a, psi_b, phi_a, phi_b : ndarray
        Synthesis wavelets and scaling functions sampled on the fine grid.
    """

    params: SplineParams
    n: int
    levels: int
    basis: str
    fine_spacing: float
    lowpass: dict = field(repr=False)
    highpass: dict = field(repr=False)
    prefilter: np.ndarray = field(repr=False)
    x: np.ndarray = field(repr=False)
    psi_a: np.ndarray = field(repr=False)
    psi_b: np.ndarray = field(repr=False)
    phi_a: np.ndarray = field(repr=False)
    phi_b: np.ndarray = field(repr=False)

    #: Value of the tree-pairing Hilbert multiplier at the Nyquist bin.
    pairing_nyquist = 1.0

    @property
    def fine_length(self):
        return self.x.size

    @cached_property
    def _wavelet_norm(self):
        if self.basis == "orthonormal":
            return 1.0
        return np.sqrt(_periodic_mean(lambda w: self._rebasing_ratio(w) ** 2))

    @cached_property
    def _scaling_norm(self):
        if self.basis == "orthonormal":
            return 1.0
        return np.sqrt(_periodic_mean(lambda w: autocorrelation(self.params.alpha, w)))

    def _rebasing_ratio(self, omega):
        a = self.params.alpha
        return np.sqrt(
            autocorrelation(a, omega / 2)
            * autocorrelation(a, omega / 2 + np.pi)
            * autocorrelation(a, omega)
        )

    def orthonormal_scaling_spectrum(self, tree, omega):
        a = self.params.alpha
        return bspline_spectrum(a, self.params.shift(tree), omega) / np.sqrt(autocorrelation(a, omega))

    def orthonormal_lowpass(self, tree, omega):
        """2pi-periodic refinement filter ``sqrt(2) phi(2w)/phi(w)``."""
        w = _reduce(np.asarray(omega, dtype=float))
        return np.sqrt(2) * self.orthonormal_scaling_spectrum(tree, 2 * w) / self.orthonormal_scaling_spectrum(tree, w)

    def orthonormal_highpass(self, tree, omega):
        omega = np.asarray(omega, dtype=float)
        return np.exp(-1j * omega) * np.conj(self.orthonormal_lowpass(tree, omega + np.pi))

    def lowpass_basis(self, omega):
        """Coefficient filter taking orthonormal lowpass coefficients to synthesis-basis ones (divide)."""
        if self.basis == "orthonormal":
            return np.ones_like(np.asarray(omega, dtype=float))
        return np.sqrt(autocorrelation(self.params.alpha, omega)) / self._scaling_norm

    def highpass_basis(self, omega):
        if self.basis == "orthonormal":
            return np.ones_like(np.asarray(omega, dtype=float))
        return self._rebasing_ratio(np.asarray(omega, dtype=float)) / self._wavelet_norm

    def scaling_spectrum(self, tree, omega):
        """Fourier transform of the synthesis scaling function of ``tree``."""
        return self.orthonormal_scaling_spectrum(tree, omega) * self.lowpass_basis(omega)

    def wavelet_spectrum(self, tree, omega):
        """Fourier transform of the synthesis mother wavelet of ``tree``."""
        omega = np.asarray(omega, dtype=float)
        psi = self.orthonormal_highpass(tree, omega / 2) * self.orthonormal_scaling_spectrum(tree, omega / 2) / np.sqrt(2)
        return psi * self.highpass_basis(omega)

    def prefilter_response(self, omega):
        """Half-sample advance ``exp(jw/2)`` on ``(-pi, pi)``, 1 at the Nyquist bin."""
        w = _reduce(np.asarray(omega, dtype=float))
        return np.where(w == -np.pi, 1.0 + 0j, np.exp(0.5j * w))

    def level_wavelet_spectrum(self, tree, level, m):
        """Closed-form DFT of the level-``level`` synthesis wavelet in the sample domain.

        This is ``2**(i/2) psi(2**i w) / phi_o(w)`` on an ``m`` point grid,
        where ``phi_o`` is the orthonormal scaling function that defines the
        sample domain. For tree ``b`` the inverse prefilter is included.
        """
        w = frequency_grid(m)
        spec = 2 ** (level / 2) * self.wavelet_spectrum(tree, 2**level * w) / self.orthonormal_scaling_spectrum(tree, w)
        if tree == "b":
            spec = spec * np.conj(self.prefilter_response(w))
        return spec

    def level_scaling_spectrum(self, tree, level, m):
        w = frequency_grid(m)
        spec = 2 ** (level / 2) * self.scaling_spectrum(tree, 2**level * w) / self.orthonormal_scaling_spectrum(tree, w)
        if tree == "b":
            spec = spec * np.conj(self.prefilter_response(w))
        return spec

    def pairing_multiplier(self, m):
        """Hilbert multiplier relating tree ``b`` to tree ``a`` in the sample domain."""
        from .hilbert import hilbert_multiplier

        return hilbert_multiplier(m, nyquist=self.pairing_nyquist)

    def filter_defects(self):
        """Largest violation of the orthonormal two-channel identities over all stored filters."""
        worst = 0.0
        for tree in ("a", "b"):
            for lo, hi in zip(self.lowpass[tree], self.highpass[tree]):
                m = lo.size
                half = np.roll(lo, -m // 2)
                pr = np.abs(np.abs(lo) ** 2 + np.abs(half) ** 2 - 2).max()
                w = frequency_grid(m)
                qmf = np.abs(hi - np.exp(-1j * w) * np.conj(half)).max()
                worst = max(worst, pr, qmf)
        return float(worst)


def build_system(params, n, levels, basis="bspline", fine_length=None, fine_spacing=DEFAULT_FINE_SPACING):
    """Build the dual-tree wavelet system for signals of length ``n``.

    Parameters
    ----------
    params : SplineParams or tuple
        ``(alpha, tau)``.
    n : int
        Power-of-two signal length (image side for 2D use).
    levels : int
        Decomposition depth; ``n / 2**levels`` must be at least 8.
    basis : {"bspline", "orthonormal"}
    fine_length : int, optional
        Number of fine-grid samples for the mother functions; defaults to
        ``max(4096, 8 n)``.
    fine_spacing : float
        Fine-grid step, in units of the level-0 sample step.
    """
    if not isinstance(params, SplineParams):
        params = SplineParams(*params)
    n = check_length(n, 8, "n")
    if int(levels) != levels or levels < 1:
        raise SizeError(f"levels must be a positive integer, got {levels}")
    levels = int(levels)
    if n >> levels < 8:
        raise SizeError(f"n / 2**levels must be >= 8 (n={n}, levels={levels})")
    if basis not in BASES:
        raise ParameterError(f"basis must be one of {BASES}, got {basis!r}")
    if fine_length is None:
        fine_length = max(DEFAULT_MIN_FINE_LENGTH, 8 * n)
    fine_length = check_length(fine_length, 64, "fine_length")
    fine_spacing = check_positive(fine_spacing, "fine_spacing")

    proto = WaveletSystem(
        params, n, levels, basis, fine_spacing,
        lowpass={}, highpass={}, prefilter=None,
        x=np.zeros(fine_length), psi_a=None, psi_b=None, phi_a=None, phi_b=None,
    )
    for tree in ("a", "b"):
        proto.lowpass[tree] = []
        proto.highpass[tree] = []
        for i in range(1, levels + 1):
            w = frequency_grid(n >> (i - 1))
            lo = proto.orthonormal_lowpass(tree, w)
            # absorb the ~1e-12 truncation error of the autocorrelation sum so
            # that the stored two-channel bank is orthonormal to rounding
            lo = lo * np.sqrt(2 / (np.abs(lo) ** 2 + np.abs(np.roll(lo, w.size // 2)) ** 2))
            proto.lowpass[tree].append(lo)
            proto.highpass[tree].append(np.exp(-1j * w) * np.conj(np.roll(lo, -(w.size // 2))))

    period = fine_length * fine_spacing
    origin = -period / 2
    fine = {}
    for tree in ("a", "b"):
        fine["psi_" + tree] = sample_spectrum(
            lambda w, t=tree: proto.wavelet_spectrum(t, w), fine_length, fine_spacing, origin).real
        fine["phi_" + tree] = sample_spectrum(
            lambda w, t=tree: proto.scaling_spectrum(t, w), fine_length, fine_spacing, origin).real
    return WaveletSystem(
        params, n, levels, basis, fine_spacing,
        lowpass=proto.lowpass,
        highpass=proto.highpass,
        prefilter=proto.prefilter_response(frequency_grid(n)),
        x=origin + fine_spacing * np.arange(fine_length),
        **fine,
    )


@dataclass(frozen=True)
class GaborFit:
    """Least-squares Gabor atom ``exp(-(x-center)**2/(2 width**2)) exp(j(omega0 (x-center) + xi0))``."""

    omega0: float
    xi0: float
    center: float
    width: float
    window: np.ndarray = field(repr=False)
    correlation: float


def fit_gabor(samples, spacing, origin=0.0):
    """Fit a Gaussian-envelope Gabor atom to complex samples on a uniform periodic grid.

    The modulation frequency is the energy-weighted mean frequency, the
    envelope centre and width come from the first two moments of ``|z|**2``,
    and ``xi0`` is the phase at the envelope peak referred to the centre.
    """
    z = np.asarray(samples, dtype=complex)
    energy = np.abs(z) ** 2
    if energy.sum() == 0:
        raise FitError("cannot fit a Gabor atom to an all-zero envelope")
    x = origin + spacing * np.arange(z.size)
    spec = np.abs(np.fft.fft(z)) ** 2
    omega0 = float((spec * frequency_grid(z.size, spacing)).sum() / spec.sum())
    p = energy / energy.sum()
    center = float((p * x).sum())
    variance = float((p * (x - center) ** 2).sum())
    if variance <= 0:
        raise FitError("envelope has zero spread")
    width = np.sqrt(2 * variance)
    peak = int(np.argmax(energy))
    xi0 = float(_wrap_phase(np.angle(z[peak]) - omega0 * (x[peak] - center)))
    atom = np.exp(-((x - center) ** 2) / (2 * width**2)) * np.exp(1j * (omega0 * (x - center) + xi0))
    corr = abs(np.vdot(atom, z)) / (np.linalg.norm(atom) * np.linalg.norm(z))
    return GaborFit(omega0, xi0, center, float(width), np.abs(z), float(min(corr, 1.0)))


def gabor_fit(system):
    """Gabor fit of the complex wavelet ``psi_a + j psi_b`` of ``system``."""
    return fit_gabor(system.psi_a + 1j * system.psi_b, system.fine_spacing, system.x[0])
