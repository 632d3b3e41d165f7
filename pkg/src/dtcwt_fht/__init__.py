"""Dual-tree complex wavelet transforms from fractional spline Hilbert pairs.

The 1D transform pairs two (alpha, tau) spline wavelet trees whose mother
wavelets form a Hilbert pair; its complex coefficients can be read as
magnitudes times fractionally Hilbert-shifted wavelets. The 2D transform
combines four separable transforms into six directional complex bands.
"""
from ._validation import (
    DtcwtError,
    FitError,
    ParameterError,
    ShapeError,
    SizeError,
    SymmetryError,
)
from .dualtree import (
    AmpPhaseMap,
    DtCoeffs1D,
    amp_phase,
    amp_phase_synthesize,
    analyze,
    from_amp_phase,
    quadrature_pair,
    shifted_wavelet,
    synthesize,
    verify_proposition1,
)
from .dualtree2d import (
    THETAS,
    DtCoeffs2D,
    amp_phase2d,
    amp_phase_synthesize2d,
    analyze2d,
    complex_directional_wavelet,
    directional_wavelet,
    from_amp_phase2d,
    synthesize2d,
    verify_proposition2,
)
from .estimators import DualTreeCWT, DualTreeCWT2D
from .hilbert import (
    directional_hilbert,
    fractional_directional_hilbert,
    fractional_hilbert,
    hilbert,
)
from .splines import SplineParams, WaveletSystem, build_system, fit_gabor, gabor_fit

__version__ = "0.1.0"

__all__ = [
    "DtcwtError", "FitError", "ParameterError", "ShapeError", "SizeError", "SymmetryError",
    "AmpPhaseMap", "DtCoeffs1D", "amp_phase", "amp_phase_synthesize", "analyze",
    "from_amp_phase", "quadrature_pair", "shifted_wavelet", "synthesize", "verify_proposition1",
    "THETAS", "DtCoeffs2D", "amp_phase2d", "amp_phase_synthesize2d", "analyze2d",
    "complex_directional_wavelet", "directional_wavelet", "from_amp_phase2d", "synthesize2d",
    "verify_proposition2", "DualTreeCWT", "DualTreeCWT2D", "directional_hilbert",
    "fractional_directional_hilbert", "fractional_hilbert", "hilbert", "SplineParams",
    "WaveletSystem", "build_system", "fit_gabor", "gabor_fit",
]
