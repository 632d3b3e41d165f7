"""scikit-learn style wrappers around the 1D and 2D dual-tree transforms."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import ParameterError, ShapeError, SizeError, check_length
from .dualtree import DtCoeffs1D, analyze, synthesize
from .dualtree2d import TREES2D, DtCoeffs2D, analyze2d, synthesize2d
from .splines import BASES, SplineParams, build_system

__all__ = ["DualTreeCWT", "DualTreeCWT2D", "pack1d", "unpack1d", "pack2d", "unpack2d"]


def pack1d(coeffs: DtCoeffs1D):
    """Flatten coefficients into one complex vector of length ``n``.

    Layout: level 1, level 2, ..., level L, then ``residue_a + j residue_b``.
    """
    return np.concatenate(coeffs.levels + [coeffs.residue_a + 1j * coeffs.residue_b])


def unpack1d(row, system):
    row = np.asarray(row, dtype=complex)
    if row.shape != (system.n,):
        raise ShapeError(f"packed row must have length {system.n}, got {row.shape}")
    levels, start = [], 0
    for i in range(1, system.levels + 1):
        m = system.n >> i
        levels.append(row[start:start + m])
        start += m
    res = row[start:]
    return DtCoeffs1D(levels, res.real, res.imag, system.params.alpha, system.params.tau,
                      system.basis, system.n)


def pack2d(coeffs: DtCoeffs2D):
    """Flatten 2D coefficients: all bands level by level, then the four residues as real parts."""
    parts = [c.ravel() for c in coeffs.levels]
    parts += [coeffs.residues[t].ravel().astype(complex) for t in TREES2D]
    return np.concatenate(parts)


def _packed2d_size(system):
    m = system.n >> system.levels
    return sum(6 * (system.n >> i) ** 2 for i in range(1, system.levels + 1)) + 4 * m * m


def unpack2d(row, system):
    row = np.asarray(row, dtype=complex)
    if row.shape != (_packed2d_size(system),):
        raise ShapeError(f"packed row must have length {_packed2d_size(system)}, got {row.shape}")
    levels, start = [], 0
    for i in range(1, system.levels + 1):
        m = system.n >> i
        levels.append(row[start:start + 6 * m * m].reshape(6, m, m))
        start += 6 * m * m
    m = system.n >> system.levels
    residues = {}
    for t in TREES2D:
        residues[t] = row[start:start + m * m].real.reshape(m, m)
        start += m * m
    return DtCoeffs2D(levels, residues, system.params.alpha, system.params.tau, system.basis, system.n)


class _DualTreeBase(TransformerMixin, BaseEstimator):
    def _validate_params(self):
        if self.basis not in BASES:
            raise ParameterError(f"basis must be one of {BASES}, got {self.basis!r}")
        SplineParams(self.alpha, self.tau)

    def _build(self, n):
        self._validate_params()
        check_length(n, 8, "n")
        self.system_ = build_system((self.alpha, self.tau), n, self.levels, basis=self.basis)
        self.n_ = n
        return self


class DualTreeCWT(_DualTreeBase):
    """1D dual-tree complex wavelet transform as a transformer.

    ``fit`` only records the signal length; ``transform`` maps an array of
    shape ``(n_signals, n)`` to complex rows of the same shape (see
    :func:`pack1d`).

    Examples
    --------
    >>> import numpy as np
    >>> X = np.random.default_rng(0).standard_normal((3, 64))
    >>> est = DualTreeCWT(alpha=4, levels=2).fit(X)
    >>> np.allclose(est.inverse_transform(est.transform(X)), X)
    True
    """

    def __init__(self, alpha=8.0, tau=0.0, levels=3, basis="bspline"):
        self.alpha = alpha
        self.tau = tau
        self.levels = levels
        self.basis = basis

    def _check_X(self, X):
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X[None, :]
        if X.ndim != 2:
            raise SizeError(f"expected an array of shape (n_signals, n), got {X.shape}")
        return X

    def fit(self, X, y=None):
        X = self._check_X(X)
        return self._build(X.shape[1])

    def transform(self, X):
        check_is_fitted(self, "system_")
        X = self._check_X(X)
        if X.shape[1] != self.n_:
            raise SizeError(f"fitted for n={self.n_}, got signals of length {X.shape[1]}")
        return np.stack([pack1d(analyze(x, self.system_)) for x in X])

    def inverse_transform(self, C):
        check_is_fitted(self, "system_")
        C = np.atleast_2d(np.asarray(C, dtype=complex))
        return np.stack([synthesize(unpack1d(row, self.system_), self.system_) for row in C])


class DualTreeCWT2D(_DualTreeBase):
    """2D six-orientation transform over a stack of square images ``(n_images, n, n)``."""

    def __init__(self, alpha=8.0, tau=0.0, levels=3, basis="bspline"):
        self.alpha = alpha
        self.tau = tau
        self.levels = levels
        self.basis = basis

    def _check_X(self, X):
        X = np.asarray(X, dtype=float)
        if X.ndim == 2:
            X = X[None]
        if X.ndim != 3 or X.shape[1] != X.shape[2]:
            raise ShapeError(f"expected an array of shape (n_images, n, n), got {X.shape}")
        return X

    def fit(self, X, y=None):
        X = self._check_X(X)
        return self._build(X.shape[1])

    def transform(self, X):
        check_is_fitted(self, "system_")
        X = self._check_X(X)
        if X.shape[1] != self.n_:
            raise ShapeError(f"fitted for side {self.n_}, got images of side {X.shape[1]}")
        return np.stack([pack2d(analyze2d(x, self.system_)) for x in X])

    def inverse_transform(self, C):
        check_is_fitted(self, "system_")
        C = np.atleast_2d(np.asarray(C, dtype=complex))
        return np.stack([synthesize2d(unpack2d(row, self.system_), self.system_) for row in C])
