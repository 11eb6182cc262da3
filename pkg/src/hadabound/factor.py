"""Gram factorizations, principal square roots and zero padding."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, UsageError
from .matcore import (
    DEFAULT_TOL,
    Tolerances,
    as_matrix,
    hermitian,
    hermitian_eigen,
    max_abs,
)


@dataclass(frozen=True, eq=False)
class GramFactor:
    """A factor ``A`` (n x r) with ``A A* = M``.

    Behaves like its factor array under ``np.asarray``, so it can be passed
    anywhere a plain matrix is expected.
    """

    factor: np.ndarray

    @property
    def target_dim(self) -> int:
        return self.factor.shape[0]

    @property
    def gram(self) -> np.ndarray:
        return self.factor @ self.factor.conj().T

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.factor
        return self.factor.astype(dtype)


def _psd_eigen(M, tol: Tolerances):
    M = hermitian(M, tol)
    w, V = hermitian_eigen(M, tol)
    if w.size:
        scale = float(np.max(np.abs(w)))
        if w[0] < -tol.psd_rtol * max(1.0, scale):
            raise DomainError(
                f"matrix is not PSD: smallest eigenvalue {w[0]:.3e}", lambda_min=float(w[0])
            )
    return M, np.clip(w, 0.0, None), V


def gram_factor(M, tol: Tolerances = DEFAULT_TOL) -> GramFactor:
    """Factor a PSD matrix as ``A A*`` with one column per retained eigenvalue.

    Eigenvalues at or below ``rank_rtol * lambda_max`` (including slightly
    negative ones inside the PSD allowance) are dropped, so the column count
    is the numerical rank.
    """
    M, w, V = _psd_eigen(M, tol)
    n = M.shape[0]
    if n == 0 or w[-1] == 0.0:
        return GramFactor(np.zeros((n, 0), dtype=np.complex128))
    keep = w > tol.rank_rtol * w[-1]
    A = V[:, keep] * np.sqrt(w[keep])
    # largest eigenvalue first
    return GramFactor(np.ascontiguousarray(A[:, ::-1]))


def principal_sqrt(M, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Unique PSD square root of a PSD matrix."""
    _, w, V = _psd_eigen(M, tol)
    H = (V * np.sqrt(w)) @ V.conj().T
    return (H + H.conj().T) / 2


def pad_columns(A, extra: int) -> np.ndarray:
    """Append ``extra`` zero columns to ``A``; ``A A*`` is unchanged."""
    if extra < 0:
        raise UsageError(f"extra must be >= 0, got {extra}")
    A = as_matrix(np.asarray(A), "A")
    return np.hstack([A, np.zeros((A.shape[0], extra), dtype=A.dtype)])


def pad_to_common(A, B, p: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Zero-pad ``A`` and ``B`` to ``max(a, b) + p`` columns each."""
    A = as_matrix(np.asarray(A), "A")
    B = as_matrix(np.asarray(B), "B")
    width = max(A.shape[1], B.shape[1]) + p
    return pad_columns(A, width - A.shape[1]), pad_columns(B, width - B.shape[1])


def rank_one_columns(A) -> list[np.ndarray]:
    """Columns ``v_j`` of ``A``, so that ``A A* = sum_j v_j v_j*``."""
    A = as_matrix(np.asarray(A), "A")
    return [A[:, j].copy() for j in range(A.shape[1])]


def reconstruction_error(A, M) -> float:
    A = as_matrix(np.asarray(A), "A")
    return max_abs(A @ A.conj().T - as_matrix(M))
