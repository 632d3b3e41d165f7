"""One-dimensional dual-tree complex wavelet transform and its amplitude-phase form."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, NamedTuple

import numpy as np

from ._validation import ParameterError, ShapeError, SizeError, check_finite, check_signal
from .hilbert import fractional_hilbert
from .spectral import bandlimited_window, frequency_grid
from .splines import WaveletSystem

__all__ = [
    "DtCoeffs1D",
    "AmpPhaseMap",
    "QuadraturePair",
    "analyze",
    "synthesize",
    "amp_phase",
    "from_amp_phase",
    "shifted_wavelet",
    "amp_phase_synthesize",
    "quadrature_pair",
    "verify_proposition1",
]

TREES = ("a", "b")


@dataclass
class DtCoeffs1D:
    """Complex coefficients ``c_i[k] = (a_i[k] + j b_i[k]) / 2`` plus both trees' residues.

    ``levels[i-1]`` holds level ``i`` (finest first), of length ``n / 2**i``.
    """

    levels: List[np.ndarray]
    residue_a: np.ndarray
    residue_b: np.ndarray
    alpha: float
    tau: float
    basis: str
    n: int

    def __post_init__(self):
        self.levels = [np.asarray(c, dtype=complex) for c in self.levels]
        self.residue_a = np.asarray(self.residue_a, dtype=float)
        self.residue_b = np.asarray(self.residue_b, dtype=float)
        for i, c in enumerate(self.levels, start=1):
            if c.shape != (self.n >> i,):
                raise ShapeError(f"level {i} must have length {self.n >> i}, got {c.shape}")
        expected = (self.n >> len(self.levels),)
        if self.residue_a.shape != expected or self.residue_b.shape != expected:
            raise ShapeError(f"residues must have length {expected[0]}")

    @property
    def depth(self):
        return len(self.levels)

    def tree(self, name):
        """Real coefficients of one tree: ``a_i = 2 Re c_i`` or ``b_i = 2 Im c_i``."""
        part = np.real if name == "a" else np.imag
        return [2 * part(c) for c in self.levels]

    def __mul__(self, scale):
        return DtCoeffs1D([scale * c for c in self.levels], scale * self.residue_a,
                          scale * self.residue_b, self.alpha, self.tau, self.basis, self.n)

    __rmul__ = __mul__


@dataclass
class AmpPhaseMap:
    """Per-level magnitudes ``|c|`` and shifts ``tau = arg(c)/pi`` in ``(-1, 1]``."""

    magnitude: List[np.ndarray]
    shift: List[np.ndarray] = field(repr=False)


class QuadraturePair(NamedTuple):
    w1: np.ndarray
    w2: np.ndarray
    envelope: np.ndarray


def _check_compatible(system, n, depth, alpha, tau, basis):
    if n != system.n:
        raise ShapeError(f"coefficients are for n={n}, system has n={system.n}")
    if depth != system.levels:
        raise ShapeError(f"coefficients have {depth} levels, system has {system.levels}")
    if (alpha, tau, basis) != (system.params.alpha, system.params.tau, system.basis):
        raise ShapeError("coefficients were produced by a different wavelet system")


def _split(spec, lo, hi):
    """One orthonormal analysis step on a spectrum: returns (lowpass, highpass) halves."""
    half = spec.size // 2
    zl = np.conj(lo) * spec
    zh = np.conj(hi) * spec
    return 0.5 * (zl[:half] + zl[half:]), 0.5 * (zh[:half] + zh[half:])


def _merge(low, high, lo, hi):
    return lo * np.tile(low, 2) + hi * np.tile(high, 2)


def _analyze_tree(spec, system, tree):
    if tree == "b":
        spec = spec * system.prefilter
    details = []
    for lo, hi in zip(system.lowpass[tree], system.highpass[tree]):
        spec, high = _split(spec, lo, hi)
        high = high / system.highpass_basis(frequency_grid(high.size))
        details.append(np.fft.ifft(high).real)
    residue = np.fft.ifft(spec / system.lowpass_basis(frequency_grid(spec.size))).real
    return details, residue


def _synthesize_tree(details, residue, system, tree):
    spec = np.fft.fft(residue) * system.lowpass_basis(frequency_grid(residue.size))
    for i in range(len(details), 0, -1):
        high = np.fft.fft(details[i - 1]) * system.highpass_basis(frequency_grid(details[i - 1].size))
        spec = _merge(spec, high, system.lowpass[tree][i - 1], system.highpass[tree][i - 1])
    if tree == "b":
        spec = spec * np.conj(system.prefilter)
    return np.fft.ifft(spec).real


def analyze(signal, system: WaveletSystem) -> DtCoeffs1D:
    """Dual-tree analysis: both trees run the FFT-domain Mallat recursion on ``signal``."""
    signal = check_signal(signal)
    if signal.size != system.n:
        raise SizeError(f"signal length {signal.size} does not match system n={system.n}")
    spec = np.fft.fft(signal)
    a, res_a = _analyze_tree(spec, system, "a")
    b, res_b = _analyze_tree(spec, system, "b")
    levels = [(ai + 1j * bi) / 2 for ai, bi in zip(a, b)]
    return DtCoeffs1D(levels, res_a, res_b, system.params.alpha, system.params.tau, system.basis, system.n)


def synthesize(coeffs: DtCoeffs1D, system: WaveletSystem):
    """Invert each tree from its real coefficients and average the two reconstructions."""
    _check_compatible(system, coeffs.n, coeffs.depth, coeffs.alpha, coeffs.tau, coeffs.basis)
    fa = _synthesize_tree(coeffs.tree("a"), coeffs.residue_a, system, "a")
    fb = _synthesize_tree(coeffs.tree("b"), coeffs.residue_b, system, "b")
    return 0.5 * (fa + fb)


def _polar(c):
    c = np.asarray(c, dtype=complex)
    magnitude = np.abs(c)
    shift = np.angle(c) / np.pi
    shift = np.where(shift <= -1.0, 1.0, shift)
    shift = np.where(magnitude == 0, 0.0, shift)
    return magnitude, shift


def amp_phase(coeffs: DtCoeffs1D) -> AmpPhaseMap:
    polar = [_polar(c) for c in coeffs.levels]
    return AmpPhaseMap([p[0] for p in polar], [p[1] for p in polar])


def from_amp_phase(amp_map: AmpPhaseMap):
    """Rebuild the complex coefficients ``|c| exp(j pi tau)`` level by level."""
    return [m * np.exp(1j * np.pi * s) for m, s in zip(amp_map.magnitude, amp_map.shift)]


def shifted_wavelet(system: WaveletSystem, shift):
    """Fine-grid mother wavelet of tree ``a`` acted on by the fractional Hilbert transform."""
    return fractional_hilbert(system.psi_a, shift)


def _residue_image(residue, system, tree):
    level = system.levels
    spec = system.level_scaling_spectrum(tree, level, system.n)
    return np.fft.ifft(np.tile(np.fft.fft(residue), 1 << level) * spec).real


def amp_phase_synthesize(amp_map: AmpPhaseMap, residues, system: WaveletSystem):
    """Rebuild a signal as a sum of magnitude-weighted, fHT-shifted wavelets.

    Every nonzero coefficient at level ``i`` and position ``k`` contributes
    ``|c| * H_{-tau} w_i`` translated by ``2**i k`` samples. ``w_i`` is the
    level-``i`` synthesis wavelet of tree ``a``, evaluated from the closed-form
    mother-wavelet spectrum dilated by ``2**i``. The Hilbert multiplier is the
    system's tree pairing. The shift enters with a minus sign because
    ``(a w + b Hw)/2 = |c| (cos(pi tau) w + sin(pi tau) Hw)``.
    The two residues contribute the average of their lowpass reconstructions.
    """
    residue_a, residue_b = residues
    n = system.n
    if len(amp_map.magnitude) != system.levels:
        raise ShapeError(f"map has {len(amp_map.magnitude)} levels, system has {system.levels}")
    pairing = system.pairing_multiplier(n)
    out = 0.5 * (_residue_image(np.asarray(residue_a, float), system, "a")
                 + _residue_image(np.asarray(residue_b, float), system, "b"))
    for i, (mags, shifts) in enumerate(zip(amp_map.magnitude, amp_map.shift), start=1):
        if mags.shape != (n >> i,):
            raise ShapeError(f"level {i} must have length {n >> i}")
        mother = np.fft.ifft(system.level_wavelet_spectrum("a", i, n)).real
        for k in np.flatnonzero(mags):
            wavelet = fractional_hilbert(mother, -shifts[k], multiplier=pairing)
            out += mags[k] * np.roll(wavelet, k << i)
    return out


def quadrature_pair(system: WaveletSystem, shift) -> QuadraturePair:
    """``(H_tau psi, H_{tau+1/2} psi)`` and their common envelope."""
    w1 = fractional_hilbert(system.psi_a, shift)
    w2 = fractional_hilbert(system.psi_a, shift + 0.5)
    return QuadraturePair(w1, w2, np.abs(w1 + 1j * w2))


class Proposition1Result(NamedTuple):
    max_error: float
    window: np.ndarray
    lhs: np.ndarray
    rhs: np.ndarray


def verify_proposition1(omega_window, omega0, tau, n, spacing=1.0, strict=True):
    """Check ``H_tau{phi(x) cos(w0 x)} = phi(x) cos(w0 x + pi tau)`` on a periodic grid.

    ``phi`` is :func:`~dtcwt_fht.spectral.bandlimited_window` with band edge
    ``omega_window``. ``omega0`` must be a DFT-grid frequency so the carrier is
    periodic. With ``strict=False`` the band-limit hypothesis
    ``omega_window < omega0`` is not enforced, which allows negative controls.
    """
    omega_window = check_finite(omega_window, "omega_window")
    omega0 = check_finite(omega0, "omega0")
    nyquist = np.pi / spacing
    if not 0 < omega_window < nyquist or not 0 < omega0 < nyquist:
        raise ParameterError("omega_window and omega0 must lie in (0, Nyquist)")
    if strict and not (omega_window < omega0 < nyquist - omega_window):
        raise ParameterError(
            f"need 0 < omega_window < omega0 < Nyquist - omega_window "
            f"(got omega_window={omega_window}, omega0={omega0})")
    bin_index = omega0 * n * spacing / (2 * np.pi)
    if abs(bin_index - round(bin_index)) > 1e-9 * max(1.0, bin_index):
        raise ParameterError(f"omega0={omega0} is not a frequency of the {n}-point grid")
    window = bandlimited_window(n, omega_window, spacing)
    x = spacing * np.arange(n)
    lhs = fractional_hilbert(window * np.cos(omega0 * x), tau)
    rhs = window * np.cos(omega0 * x + np.pi * tau)
    return Proposition1Result(float(np.abs(lhs - rhs).max()), window, lhs, rhs)
