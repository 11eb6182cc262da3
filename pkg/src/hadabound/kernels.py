"""Kernel Gram matrices and their nonzero lower bounds.

Point sets are ``(n, dim)`` float arrays; a 1-D array is read as ``n``
points on the real line.
"""

from __future__ import annotations

import numpy as np

from .bounds import BoundKind, BoundReport, certify_rank_one
from .errors import DimensionError, DomainError
from .matcore import DEFAULT_TOL, Tolerances, as_matrix, hermitian, max_abs, psd_certificate


def as_points(ps, name: str = "points") -> np.ndarray:
    pts = np.asarray(ps, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts.reshape(-1, 1)
    if pts.ndim != 2 or pts.shape[0] == 0:
        raise DimensionError(f"{name} must be a nonempty (n, dim) array, got shape {pts.shape}")
    if not np.all(np.isfinite(pts)):
        raise DomainError(f"{name} has non-finite coordinates")
    return pts


def _sq_dists(pts: np.ndarray) -> np.ndarray:
    diff = pts[:, None, :] - pts[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def cosine_gram(xs) -> np.ndarray:
    """``(cos(x_i - x_j))_ij`` for real scalars ``x``."""
    x = np.asarray(xs, dtype=np.float64).reshape(-1)
    if x.size == 0:
        raise DimensionError("need at least one point")
    return np.cos(x[:, None] - x[None, :])


def cosine_rank_two_split(xs) -> tuple[np.ndarray, np.ndarray]:
    """``u = cos(x)``, ``v = sin(x)``; the cosine Gram equals ``u u^T + v v^T``."""
    x = np.asarray(xs, dtype=np.float64).reshape(-1)
    return np.cos(x), np.sin(x)


def novak_matrix(X) -> np.ndarray:
    """``prod_l cos^2(x_li - x_lj) - 1/n`` for a ``(k, n)`` array of reals."""
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.ndim != 2 or X.size == 0:
        raise DimensionError(f"expected a nonempty (k, n) array, got shape {X.shape}")
    n = X.shape[1]
    prod = np.ones((n, n))
    for row in X:
        prod *= cosine_gram(row) ** 2
    return prod - 1.0 / n


def gaussian_gram(ps, lam: float = 1.0) -> np.ndarray:
    """``exp(-lam |x_i - x_j|^2)``."""
    if not lam > 0:
        raise DomainError(f"lambda must be positive, got {lam}")
    return np.exp(-lam * _sq_dists(as_points(ps)))


def gaussian_novak_matrix(point_sets) -> np.ndarray:
    """``prod_l exp(-|x_li - x_lj|^2) - 1/n`` over ``k`` point sets of equal size."""
    sets = [as_points(ps, f"point_sets[{l}]") for l, ps in enumerate(point_sets)]
    if not sets:
        raise DimensionError("need at least one point set")
    n = sets[0].shape[0]
    if any(s.shape[0] != n for s in sets):
        raise DimensionError(f"point sets have sizes {[s.shape[0] for s in sets]}")
    prod = np.ones((n, n))
    for s in sets:
        prod *= np.exp(-_sq_dists(s))
    return prod - 1.0 / n


def product_kernel_lower_bound(grams, ells=None, tol: Tolerances = DEFAULT_TOL) -> BoundReport:
    """Certify ``o_l (G_l o conj(G_l)) >= (1/n) prod_l ell_l^2 E_n``.

    Each Gram must have constant diagonal ``ell_l > 0``; when ``ells`` is
    omitted the values are read off the diagonals.
    """
    grams = [hermitian(G, tol, f"grams[{l}]") for l, G in enumerate(grams)]
    if not grams:
        raise DimensionError("need at least one Gram matrix")
    n = grams[0].shape[0]
    if any(G.shape != (n, n) for G in grams):
        raise DimensionError("Gram matrices must share one size")
    read = []
    for l, G in enumerate(grams):
        diag = np.diagonal(G).real
        ell = float(diag[0])
        if ell <= 0 or max_abs(diag - ell) > tol.psd_rtol * max(1.0, abs(ell)):
            raise DomainError(f"grams[{l}] does not have a constant positive diagonal")
        if not psd_certificate(G, tol).accepted:
            raise DomainError(f"grams[{l}] is not PSD")
        read.append(ell)
    if ells is not None:
        ells = [float(e) for e in ells]
        if len(ells) != len(grams) or any(
            abs(e - r) > tol.psd_rtol * max(1.0, abs(r)) for e, r in zip(ells, read)
        ):
            raise DomainError(f"ells {ells} disagree with diagonals {read}")
    lhs = np.ones((n, n), dtype=np.complex128)
    for G in grams:
        lhs = lhs * G * G.conj()
    level = float(np.prod(read))
    return certify_rank_one(BoundKind.PRODUCT_KERNEL, lhs, 1.0 / n, level * np.ones(n), tol,
                            extra={"ells": read})


def is_real_correlation(M, tol: Tolerances = DEFAULT_TOL) -> bool:
    M = as_matrix(M)
    if M.shape[0] != M.shape[1] or max_abs(M.imag) > 0.0:
        return False
    if max_abs(np.diagonal(M) - 1.0) > tol.psd_rtol:
        return False
    try:
        return psd_certificate(M, tol).accepted
    except DomainError:
        return False


def entrywise_power_preserver_check(M, k: int, tol: Tolerances = DEFAULT_TOL) -> BoundReport:
    """Certify ``M^{o 2k} - E_n / n`` is PSD for a real correlation matrix ``M``."""
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    if not is_real_correlation(M, tol):
        raise DomainError("input is not a real correlation matrix")
    M = hermitian(M, tol).real
    n = M.shape[0]
    lhs = (M ** (2 * k)).astype(np.complex128)
    return certify_rank_one(BoundKind.POWER_PRESERVER, lhs, 1.0 / n, np.ones(n), tol,
                            extra={"k": k})
