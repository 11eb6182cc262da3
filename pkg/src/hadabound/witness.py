"""Extremal and negative examples.

Random blocks are drawn from ``numpy.random.default_rng(seed)`` (PCG64), so a
given seed reproduces a witness bit-for-bit on the same platform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import BoundKind, BoundReport, certify_rank_one, main_lower_bound
from .errors import DomainError, UsageError
from .io import matrix_to_json
from .matcore import (
    DEFAULT_TOL,
    EPS,
    LoewnerCertificate,
    Tolerances,
    as_matrix,
    psd_certificate,
)

INFLATION = 1e-3


@dataclass(eq=False)
class TightWitness:
    A: np.ndarray
    B: np.ndarray
    r: int
    s: int
    achieved_margin: float
    report: BoundReport
    inflated: LoewnerCertificate
    seed: int | None = None

    @property
    def gamma(self) -> float:
        return self.report.gamma

    @property
    def confirmed(self) -> bool:
        """Margin zero within tolerance, and a slightly larger coefficient fails."""
        cert = self.report.certificate
        return cert.accepted and abs(self.achieved_margin) <= cert.tol_used and not self.inflated.accepted

    def to_dict(self) -> dict:
        return {
            "family": "tight",
            "parameters": {"n": self.A.shape[0], "a": self.A.shape[1], "r": self.r, "s": self.s},
            "seed": self.seed,
            "margin": self.achieved_margin,
            "gamma": self.gamma,
            "inflated_lambda_min": self.inflated.lambda_min,
            "confirmed": self.confirmed,
            "A": matrix_to_json(self.A),
            "B": matrix_to_json(self.B),
        }


def tight_example(n: int, a: int, r: int, s: int, seed: int = 0, *,
                  d_block=None, d_prime_block=None,
                  tol: Tolerances = DEFAULT_TOL) -> TightWitness:
    """Block-diagonal factors on which the main bound has zero margin.

    ``A = diag(D, 0)`` and ``B = diag(D', 0)`` are ``n x a`` with diagonal
    ``r x r`` and ``s x s`` blocks.  The diagonals default to seeded draws
    from ``[0.5, 1.5]``; pass ``d_block`` / ``d_prime_block`` to fix them.
    """
    if not (1 <= r <= min(n, a) and 1 <= s <= min(n, a)):
        raise UsageError(f"need 1 <= r, s <= min(n, a) = {min(n, a)}, got r={r}, s={s}")
    rng = np.random.default_rng(seed)
    D = rng.uniform(0.5, 1.5, r) if d_block is None else np.asarray(d_block, dtype=float)
    Dp = rng.uniform(0.5, 1.5, s) if d_prime_block is None else np.asarray(d_prime_block, dtype=float)
    if D.shape != (r,) or Dp.shape != (s,) or np.any(D == 0) or np.any(Dp == 0):
        raise UsageError("diagonal blocks must be nonsingular with lengths r and s")
    A = np.zeros((n, a), dtype=np.complex128)
    B = np.zeros((n, a), dtype=np.complex128)
    A[np.arange(r), np.arange(r)] = D
    B[np.arange(s), np.arange(s)] = Dp
    report = main_lower_bound(A, B, tol)
    inflated = certify_rank_one(
        BoundKind.MAIN, report.lhs, report.gamma * (1 + INFLATION), report.d, tol
    ).certificate
    return TightWitness(A, B, r, s, report.certificate.lambda_min, report, inflated, seed)


@dataclass(eq=False)
class DnnCounterexample:
    a: float
    b: float
    c: float
    d: float
    matrix: np.ndarray
    defect: np.ndarray
    defect_det: float
    closed_form_det: float
    matrix_certificate: LoewnerCertificate
    defect_certificate: LoewnerCertificate

    @property
    def doubly_nonnegative(self) -> bool:
        return bool(np.all(self.matrix >= 0)) and self.matrix_certificate.accepted

    @property
    def det_error(self) -> float:
        return abs(self.defect_det - self.closed_form_det)

    @property
    def confirmed(self) -> bool:
        scale = max(1.0, float(np.max(np.abs(self.defect))) ** 3)
        return (
            self.doubly_nonnegative
            and self.defect_det < 0
            and self.det_error <= 1e4 * EPS * scale
            and not self.defect_certificate.accepted
        )

    def to_dict(self) -> dict:
        return {
            "family": "dnn",
            "parameters": {"a": self.a, "b": self.b, "c": self.c, "d": self.d},
            "seed": None,
            "margin": self.defect_certificate.lambda_min,
            "defect_det": self.defect_det,
            "closed_form_det": self.closed_form_det,
            "doubly_nonnegative": self.doubly_nonnegative,
            "defect_psd": self.defect_certificate.accepted,
            "confirmed": self.confirmed,
            "matrix": matrix_to_json(self.matrix),
            "defect": matrix_to_json(self.defect),
        }


def dnn_counterexample(a: float, b: float, c: float,
                       tol: Tolerances = DEFAULT_TOL) -> DnnCounterexample:
    """A 3x3 doubly non-negative ``A`` with ``A - s s^T / 3`` not PSD, ``s = sqrt(diag A)``.

    ``A = [[a, c, d], [c, b, c], [d, c, a]]`` with ``d = 2c^2/b - a``, valid for
    ``a, b > 0`` and ``sqrt(ab/2) <= c < sqrt(ab)``.  The defect determinant
    has the closed form ``-(2/3)(a - d)(sqrt(ab) - c)^2``.
    """
    a, b, c = float(a), float(b), float(c)
    if not (a > 0 and b > 0):
        raise DomainError(f"need a, b > 0, got a={a}, b={b}")
    root = math.sqrt(a * b)
    if not (2 * c * c >= a * b and c >= 0 and c < root):
        raise DomainError(f"c={c} outside [sqrt(ab/2), sqrt(ab)) = [{math.sqrt(a * b / 2)}, {root})")
    # d >= 0 on the valid region; clamp rounding at the lower endpoint
    d = max(2 * c * c / b - a, 0.0)
    A = np.array([[a, c, d], [c, b, c], [d, c, a]])
    s = np.sqrt(np.diagonal(A))
    defect = A - np.outer(s, s) / 3
    return DnnCounterexample(
        a, b, c, d, A, defect,
        float(np.linalg.det(defect)),
        -2.0 / 3.0 * (a - d) * (root - c) ** 2,
        psd_certificate(A, tol),
        psd_certificate(defect, tol),
    )


def dimension_embedding(A, B, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Append zero rows so both factors have ``m`` rows."""
    A, B = as_matrix(A, "A"), as_matrix(B, "B")
    n = max(A.shape[0], B.shape[0])
    if m < n:
        raise UsageError(f"m={m} is smaller than the row count {n}")
    return (
        np.vstack([A, np.zeros((m - A.shape[0], A.shape[1]), dtype=A.dtype)]),
        np.vstack([B, np.zeros((m - B.shape[0], B.shape[1]), dtype=B.dtype)]),
    )
