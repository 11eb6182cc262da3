"""Dense complex Hermitian kernel.

Matrices are plain ``numpy`` arrays of dtype ``complex128``; real input is
embedded with zero imaginary part.  A "Hermitian view" is simply such an
array that has passed :func:`hermitian`.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError, NumericError

EPS = np.finfo(np.float64).eps

# components smaller than this are skipped when fixing eigenvector phases
_PHASE_FLOOR = 1e-10


@dataclass(frozen=True)
class Tolerances:
    """Relative thresholds used by every rank and PSD decision.

    rank_rtol
        Singular values at or below ``rank_rtol * sigma_max`` do not count
        towards the numerical rank.
    psd_rtol
        A difference is accepted as PSD when its smallest eigenvalue is at
        least ``-psd_rtol * max(1, scale)``.
    hermitian_tol
        Allowed asymmetry ``max|H - H*|`` relative to ``max(1, max|H|)``.
    """

    rank_rtol: float = 1e-9
    psd_rtol: float = 1e-8
    hermitian_tol: float = 1e-10

    def __post_init__(self):
        for field in dataclasses.fields(self):
            value = getattr(self, field.name)
            if not (isinstance(value, (int, float)) and 0.0 < value < 1.0):
                raise ValueError(f"{field.name} must lie in (0, 1), got {value!r}")

    def replace(self, **changes) -> "Tolerances":
        changes = {k: v for k, v in changes.items() if v is not None}
        return dataclasses.replace(self, **changes)

    @classmethod
    def parse(cls, text: str, base: "Tolerances | None" = None) -> "Tolerances":
        """Parse ``"1e-8"`` (psd_rtol only) or ``"rank_rtol=1e-9,psd_rtol=1e-8"``."""
        base = base or cls()
        text = text.strip()
        if not text:
            return base
        if "=" not in text:
            return base.replace(psd_rtol=float(text))
        aliases = {"rank": "rank_rtol", "psd": "psd_rtol", "hermitian": "hermitian_tol"}
        changes = {}
        for item in text.split(","):
            key, _, value = item.partition("=")
            key = aliases.get(key.strip(), key.strip())
            if key not in {"rank_rtol", "psd_rtol", "hermitian_tol"}:
                raise ValueError(f"unknown tolerance {key!r}")
            changes[key] = float(value)
        return base.replace(**changes)


DEFAULT_TOL = Tolerances()


@dataclass(frozen=True)
class LoewnerCertificate:
    """Numerical evidence that ``X - Y`` is positive semidefinite.

    ``tol_used`` is the absolute allowance ``psd_rtol * max(1, scale)``.
    """

    lambda_min: float
    scale: float
    accepted: bool
    tol_used: float

    @property
    def margin(self) -> float:
        return self.lambda_min

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def as_matrix(x, name: str = "matrix") -> np.ndarray:
    """Return ``x`` as a finite 2-D complex array (vectors become columns)."""
    arr = np.array(x, dtype=np.complex128)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    elif arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    elif arr.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} has non-finite entries")
    return arr


def as_vector(x, name: str = "vector") -> np.ndarray:
    arr = np.array(x, dtype=np.complex128)
    if arr.ndim == 2 and 1 in arr.shape:
        arr = arr.reshape(-1)
    if arr.ndim != 1:
        raise DimensionError(f"{name} must be a vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} has non-finite entries")
    return arr


def max_abs(x) -> float:
    x = np.asarray(x)
    return float(np.max(np.abs(x))) if x.size else 0.0


def _require_square(M: np.ndarray, name: str) -> None:
    if M.shape[0] != M.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {M.shape}")


def hermitian(H, tol: Tolerances = DEFAULT_TOL, name: str = "matrix") -> np.ndarray:
    """Certify that ``H`` is Hermitian and return its exactly Hermitian part."""
    H = as_matrix(H, name)
    _require_square(H, name)
    asym = max_abs(H - H.conj().T)
    if asym > tol.hermitian_tol * max(1.0, max_abs(H)):
        raise DomainError(f"{name} is not Hermitian (max asymmetry {asym:.3e})")
    return (H + H.conj().T) / 2


def hadamard(A, B) -> np.ndarray:
    A, B = as_matrix(A, "A"), as_matrix(B, "B")
    if A.shape != B.shape:
        raise DimensionError(f"hadamard: shapes {A.shape} and {B.shape} differ")
    return A * B


def trace_inner(X, Y) -> complex:
    """Frobenius inner product ``tr(X* Y)``, conjugate-linear in ``X``."""
    X, Y = as_matrix(X, "X"), as_matrix(Y, "Y")
    if X.shape != Y.shape:
        raise DimensionError(f"trace_inner: shapes {X.shape} and {Y.shape} differ")
    return complex(np.vdot(X, Y))


def diag_vector(M) -> np.ndarray:
    M = as_matrix(M, "M")
    _require_square(M, "M")
    return np.diagonal(M).copy()


def hermitian_eigen(H, tol: Tolerances = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decompose a Hermitian matrix.

    Eigenvalues come back ascending.  Each eigenvector is rotated so that
    its first non-negligible component is real and positive, which makes
    the output deterministic.  The decomposition is checked against the
    residual contract ``max|HV - V diag(w)| <= 1e3 eps max(1, max|H|)``
    (and the same bound on ``V*V - I``) before it is returned.
    """
    H = hermitian(H, tol)
    n = H.shape[0]
    if n == 0:
        return np.zeros(0), np.zeros((0, 0), dtype=np.complex128)
    try:
        w, V = np.linalg.eigh(H)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigensolver did not converge for {n}x{n} input: {exc}") from exc
    for j in range(n):
        col = V[:, j]
        k = int(np.argmax(np.abs(col) > _PHASE_FLOOR))
        V[:, j] = col * (abs(col[k]) / col[k])
    bound = 1e3 * EPS * max(1.0, max_abs(H))
    resid = max_abs(H @ V - V * w)
    ortho = max_abs(V.conj().T @ V - np.eye(n))
    if resid > bound or ortho > 1e3 * EPS:
        raise NumericError(
            f"eigendecomposition residual {resid:.3e} / orthogonality {ortho:.3e} "
            f"exceeds contract {bound:.3e} (n={n})"
        )
    return w, V


def numerical_rank(M, tol: Tolerances = DEFAULT_TOL) -> int:
    """Count singular values above ``rank_rtol`` times the largest one."""
    M = as_matrix(M, "M")
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.sum(s > tol.rank_rtol * s[0]))


def loewner_geq(X, Y, tol: Tolerances = DEFAULT_TOL) -> LoewnerCertificate:
    """Certify ``X >= Y`` in the Loewner order."""
    X = hermitian(X, tol, "X")
    Y = hermitian(Y, tol, "Y")
    if X.shape != Y.shape:
        raise DimensionError(f"loewner_geq: shapes {X.shape} and {Y.shape} differ")
    return psd_certificate(X - Y, tol)


def psd_certificate(D, tol: Tolerances = DEFAULT_TOL) -> LoewnerCertificate:
    """Certificate that ``D`` itself is PSD (``loewner_geq(D, 0)``)."""
    D = hermitian(D, tol, "difference")
    if D.shape[0] == 0:
        return LoewnerCertificate(0.0, 0.0, True, tol.psd_rtol)
    w, _ = hermitian_eigen(D, tol)
    lam_min = float(w[0])
    scale = float(np.max(np.abs(w)))
    allowance = tol.psd_rtol * max(1.0, scale)
    return LoewnerCertificate(lam_min, scale, lam_min >= -allowance, allowance)


def bilinear_trace_residual(M, N, u, v) -> float:
    """``|u^T (M o N) v - tr(N^T D_u M D_v)|`` (no conjugation anywhere)."""
    M, N = as_matrix(M, "M"), as_matrix(N, "N")
    u, v = as_vector(u, "u"), as_vector(v, "v")
    _require_square(M, "M")
    n = M.shape[0]
    if N.shape != (n, n) or u.shape != (n,) or v.shape != (n,):
        raise DimensionError(
            f"bilinear_trace_residual: M{M.shape}, N{N.shape}, u{u.shape}, v{v.shape}"
        )
    lhs = u @ (M * N) @ v
    rhs = np.trace(N.T @ (u[:, None] * M * v[None, :]))
    return float(abs(lhs - rhs))


def bilinear_trace_scale(M, N, u, v) -> float:
    """Roundoff scale ``|u|^T (|M| o |N|) |v|`` for the trace identity."""
    M, N = np.abs(as_matrix(M)), np.abs(as_matrix(N))
    u, v = np.abs(as_vector(u)), np.abs(as_vector(v))
    return float(u @ (M * N) @ v)


def principal_submatrix(M, J) -> np.ndarray:
    """Rows and columns of ``M`` indexed by ``J`` (0-based, sorted, de-duplicated)."""
    M = as_matrix(M, "M")
    _require_square(M, "M")
    idx = sorted({int(j) for j in J})
    if not idx:
        raise ValueError("index set must be nonempty")
    n = M.shape[0]
    if idx[0] < 0 or idx[-1] >= n:
        raise IndexError(f"index set {idx} out of range for {n}x{n} matrix")
    return M[np.ix_(idx, idx)]
