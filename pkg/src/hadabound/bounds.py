"""Rank-one lower bounds (and one upper bound) for Schur products.

Every constructor returns a :class:`BoundReport` whose certificate is
recomputed numerically, even where the inequality is known to hold.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, DomainError, UsageError
from .factor import pad_to_common, principal_sqrt
from .matcore import (
    DEFAULT_TOL,
    LoewnerCertificate,
    Tolerances,
    as_matrix,
    as_vector,
    hermitian,
    hermitian_eigen,
    loewner_geq,
    max_abs,
    numerical_rank,
    psd_certificate,
)

# singular values within this factor of the rank cutoff make a rank ambiguous
AMBIGUITY_BAND = 10.0


class BoundKind(str, enum.Enum):
    MAIN = "main"
    COMPRESSED = "compressed"
    MULTIPLIER = "multiplier"
    MULTIFACTOR = "multifactor"
    FIEDLER = "fiedler"
    LAMBDA_MIN = "lambda_min"
    QUAD_FORM = "quad_form"
    HKV = "hkv"
    UPPER = "upper"
    SQRT = "sqrt"
    PRODUCT_KERNEL = "product_kernel"
    POWER_PRESERVER = "power_preserver"


@dataclass(frozen=True, eq=False)
class RankOneLowerBound:
    """The matrix ``gamma * d d*``."""

    gamma: float
    d: np.ndarray

    @property
    def bound_matrix(self) -> np.ndarray:
        return self.gamma * np.outer(self.d, self.d.conj())


@dataclass(eq=False)
class BoundReport:
    """A bound together with its Loewner certificate.

    For lower kinds the certificate is on ``lhs - bound``; for the upper
    kind it is on ``bound - lhs``.
    """

    kind: BoundKind
    lhs: np.ndarray
    bound: RankOneLowerBound | np.ndarray
    certificate: LoewnerCertificate
    ambiguous_rank: bool = False
    gamma_candidates: tuple[float, ...] = ()
    note: str = ""
    extra: dict = field(default_factory=dict)

    @property
    def accepted(self) -> bool:
        return self.certificate.accepted

    @property
    def gamma(self) -> float | None:
        return self.bound.gamma if isinstance(self.bound, RankOneLowerBound) else None

    @property
    def d(self) -> np.ndarray | None:
        return self.bound.d if isinstance(self.bound, RankOneLowerBound) else None

    @property
    def bound_matrix(self) -> np.ndarray:
        if isinstance(self.bound, RankOneLowerBound):
            return self.bound.bound_matrix
        return self.bound

    def to_dict(self) -> dict:
        d = self.d
        out = {
            "kind": BoundKind(self.kind).value,
            "gamma": self.gamma,
            "d": None if d is None else [[float(z.real), float(z.imag)] for z in d],
            "lambda_min": self.certificate.lambda_min,
            "scale": self.certificate.scale,
            "accepted": self.accepted,
            "ambiguous_rank": self.ambiguous_rank,
        }
        if self.ambiguous_rank:
            out["gamma_candidates"] = list(self.gamma_candidates)
        if self.note:
            out["note"] = self.note
        out.update(self.extra)
        return out


def _rank_range(M, tol: Tolerances) -> tuple[int, int, int]:
    """(rank, lowest plausible rank, highest plausible rank)."""
    M = as_matrix(M)
    if M.size == 0:
        return 0, 0, 0
    s = np.linalg.svd(M, compute_uv=False)
    if s[0] == 0.0:
        return 0, 0, 0
    cut = tol.rank_rtol * s[0]
    return (
        int(np.sum(s > cut)),
        int(np.sum(s > cut * AMBIGUITY_BAND)),
        int(np.sum(s > cut / AMBIGUITY_BAND)),
    )


@dataclass(frozen=True)
class _Gamma:
    value: float
    ambiguous: bool
    candidates: tuple[float, ...]


def _min_rank_gamma(Ma, Mb, tol: Tolerances, what: str = "") -> _Gamma:
    ra, ra_lo, ra_hi = _rank_range(Ma, tol)
    rb, rb_lo, rb_hi = _rank_range(Mb, tol)
    if ra == 0 or rb == 0:
        raise DomainError(f"{what}zero Gram matrix: ranks ({ra}, {rb})")
    value = 1.0 / min(ra, rb)
    ambiguous = (ra_lo, ra_hi) != (ra, ra) or (rb_lo, rb_hi) != (rb, rb)
    cands = {
        1.0 / min(p, q)
        for p in range(max(ra_lo, 1), ra_hi + 1)
        for q in range(max(rb_lo, 1), rb_hi + 1)
    }
    return _Gamma(value, ambiguous, tuple(sorted(cands)) if ambiguous else (value,))


def certify_rank_one(kind, lhs, gamma, d, tol, g: _Gamma | None = None, **kw) -> BoundReport:
    """Build a report for ``lhs >= gamma d d*`` and attach its certificate."""
    bound = RankOneLowerBound(float(gamma), np.asarray(d, dtype=np.complex128))
    cert = loewner_geq(lhs, bound.bound_matrix, tol)
    if g is not None:
        kw.setdefault("ambiguous_rank", g.ambiguous)
        kw.setdefault("gamma_candidates", g.candidates)
    return BoundReport(BoundKind(kind), lhs, bound, cert, **kw)


def _factor_pair(A, B):
    A, B = as_matrix(A, "A"), as_matrix(B, "B")
    if A.shape[0] != B.shape[0]:
        raise DimensionError(f"factors have {A.shape[0]} and {B.shape[0]} rows")
    return A, B


def transpose_diag(A, B) -> np.ndarray:
    """``d_{A B^T}``: the diagonal of ``A B^T`` (plain transpose, no conjugate)."""
    A, B = pad_to_common(A, B)
    return np.sum(A * B, axis=1)


def main_lower_bound(A, B, tol: Tolerances = DEFAULT_TOL, p: int = 0) -> BoundReport:
    """``A A* o B B* >= d d* / min(rk A A*, rk B B*)`` with ``d = d_{A0 B0^T}``.

    Factors with different column counts are zero-padded to a common width
    (plus ``p`` extra columns); ``d`` does not depend on ``p``.
    """
    A, B = _factor_pair(A, B)
    A0, B0 = pad_to_common(A, B, p)
    Ma, Mb = A0 @ A0.conj().T, B0 @ B0.conj().T
    g = _min_rank_gamma(Ma, Mb, tol, "main bound: ")
    lhs = Ma * Mb
    return certify_rank_one(BoundKind.MAIN, lhs, g.value, np.sum(A0 * B0, axis=1), tol, g)


def gamma_rank(A, B, J, tol: Tolerances = DEFAULT_TOL) -> float:
    """``1 / min(rk (A A*)_JJ, rk (B B*)_JJ)``; ``J`` is 0-based."""
    return _gamma_on(A, B, J, tol).value


def _gamma_on(A, B, J, tol) -> _Gamma:
    A, B = _factor_pair(A, B)
    idx = sorted({int(j) for j in J})
    if not idx:
        raise DomainError("index set J is empty")
    if idx[0] < 0 or idx[-1] >= A.shape[0]:
        raise IndexError(f"index set {idx} out of range for n={A.shape[0]}")
    # (A A*)_JJ = A_J A_J*
    AJ, BJ = A[idx], B[idx]
    return _min_rank_gamma(AJ @ AJ.conj().T, BJ @ BJ.conj().T, tol, "gamma_rank: ")


def orthoprojection_P(A, B, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Projection onto ``(ker A)^perp`` composed with projection onto ``im(B^T)``.

    Satisfies ``A P B^T = A B^T`` and ``<P, P> <= min(rk A, rk B)``.
    """
    A, B = _factor_pair(A, B)
    if A.shape[1] != B.shape[1]:
        raise DimensionError(f"factors have {A.shape[1]} and {B.shape[1]} columns; pad first")
    ra = numerical_rank(A @ A.conj().T, tol)
    rb = numerical_rank(B @ B.conj().T, tol)
    _, _, VhA = np.linalg.svd(A)
    _, _, VhB = np.linalg.svd(B)
    row_a = VhA[:ra].conj().T @ VhA[:ra]
    # columns of B^T are spanned by the (unconjugated) right singular vectors of B
    col_bt = VhB[:rb].T @ VhB[:rb].conj()
    return row_a @ col_bt


def nonzero_columns(C, tol: Tolerances = DEFAULT_TOL) -> list[int]:
    C = as_matrix(C, "C")
    cmax = max_abs(C)
    if cmax == 0.0:
        return []
    norms = np.linalg.norm(C, axis=0)
    return [int(j) for j in np.flatnonzero(norms > tol.rank_rtol * cmax)]


def compressed_lower_bound(C, A, B, tol: Tolerances = DEFAULT_TOL) -> BoundReport:
    """``C (A A* o B B*) C* >= gamma(A, B, J) C d d* C*`` with ``J`` the nonzero columns of ``C``."""
    A, B = _factor_pair(A, B)
    C = as_matrix(C, "C")
    if C.shape[1] != A.shape[0]:
        raise DimensionError(f"C has {C.shape[1]} columns but factors have {A.shape[0]} rows")
    J = nonzero_columns(C, tol)
    if not J:
        raise DomainError("C has no nonzero columns")
    g = _gamma_on(A, B, J, tol)
    A0, B0 = pad_to_common(A, B)
    inner = (A0 @ A0.conj().T) * (B0 @ B0.conj().T)
    lhs = C @ inner @ C.conj().T
    d = C @ np.sum(A0 * B0, axis=1)
    return certify_rank_one(BoundKind.COMPRESSED, lhs, g.value, d, tol, g, extra={"J": J})


def _require_psd(M, tol, name):
    M = hermitian(M, tol, name)
    cert = psd_certificate(M, tol)
    if not cert.accepted:
        raise DomainError(f"{name} is not PSD (lambda_min {cert.lambda_min:.3e})", cert.lambda_min)
    return M


def multiplier_lower_bound(Ms, us=None, ys=None, tol: Tolerances = DEFAULT_TOL) -> BoundReport:
    """Lower bound for ``o_j (D_uj M_j D_uj* o D_yj conj(M_j) D_yj*)``.

    The bound is ``(w o d_M1 o ... o d_Mk)(...)* / rk(M_JJ)`` where
    ``w = o_j (u_j o y_j)``, ``J`` its support and ``M = M_1 o ... o M_k``.
    ``us``/``ys`` default to all-ones vectors.
    """
    Ms = [_require_psd(M, tol, f"M[{j}]") for j, M in enumerate(Ms)]
    if not Ms:
        raise UsageError("need at least one matrix")
    n = Ms[0].shape[0]
    k = len(Ms)
    if any(M.shape != (n, n) for M in Ms):
        raise DimensionError("all matrices must share one size")
    ones = np.ones(n, dtype=np.complex128)
    us = [ones] * k if us is None else [as_vector(u, "u") for u in us]
    ys = [ones] * k if ys is None else [as_vector(y, "y") for y in ys]
    if len(us) != k or len(ys) != k:
        raise DimensionError(f"need {k} u and y vectors, got {len(us)} and {len(ys)}")
    if any(v.shape != (n,) for v in us + ys):
        raise DimensionError(f"u and y vectors must have length {n}")

    w = np.ones(n, dtype=np.complex128)
    lhs = np.ones((n, n), dtype=np.complex128)
    M = np.ones((n, n), dtype=np.complex128)
    d = np.ones(n, dtype=np.complex128)
    for Mj, u, y in zip(Ms, us, ys):
        w = w * u * y
        left = u[:, None] * Mj * u.conj()[None, :]
        right = y[:, None] * Mj.conj() * y.conj()[None, :]
        lhs = lhs * left * right
        M = M * Mj
        d = d * np.diagonal(Mj)
    wmax = max_abs(w)
    if wmax == 0.0:
        raise DomainError("w = o_j (u_j o y_j) is zero")
    J = [int(j) for j in np.flatnonzero(np.abs(w) > tol.rank_rtol * wmax)]
    r, r_lo, r_hi = _rank_range(M[np.ix_(J, J)], tol)
    vec = w * d
    if r == 0:
        return certify_rank_one(
            BoundKind.MULTIPLIER, lhs, 1.0, vec, tol,
            note="principal submatrix on J(w) is zero; coefficient irrelevant",
            extra={"J": J},
        )
    ambiguous = (r_lo, r_hi) != (r, r)
    cands = tuple(sorted(1.0 / q for q in range(max(r_lo, 1), r_hi + 1)))
    g = _Gamma(1.0 / r, ambiguous, cands if ambiguous else (1.0 / r,))
    return certify_rank_one(BoundKind.MULTIPLIER, lhs, g.value, vec, tol, g, extra={"J": J})


def multifactor_lower_bound(factors, l: int | None = None, tol: Tolerances = DEFAULT_TOL) -> BoundReport:
    """``M'_1 o ... o M'_2l >= prod_j [1/min(rk M'_j, rk M'_{j+l})] w w*``.

    ``M'_j = A_j A_j*`` and ``w = o_{j<=l} d_{A_j A_{j+l}^T}``.
    """
    factors = [as_matrix(A, f"A[{j}]") for j, A in enumerate(factors)]
    if len(factors) == 0 or len(factors) % 2:
        raise UsageError(f"need an even, positive number of factors, got {len(factors)}")
    if l is None:
        l = len(factors) // 2
    if 2 * l != len(factors):
        raise UsageError(f"l={l} does not match {len(factors)} factors")
    n = factors[0].shape[0]
    if any(A.shape[0] != n for A in factors):
        raise DimensionError("all factors must have the same row count")

    grams = [A @ A.conj().T for A in factors]
    lhs = np.ones((n, n), dtype=np.complex128)
    for G in grams:
        lhs = lhs * G
    coeff = 1.0
    w = np.ones(n, dtype=np.complex128)
    per_pair = []
    ambiguous = False
    for j in range(l):
        g = _min_rank_gamma(grams[j], grams[j + l], tol, f"pair {j}: ")
        coeff *= g.value
        ambiguous |= g.ambiguous
        per_pair.append(g.candidates)
        w = w * transpose_diag(factors[j], factors[j + l])
    cands = tuple(sorted({float(np.prod(c)) for c in itertools.product(*per_pair)}))
    g = _Gamma(coeff, ambiguous, cands)
    return certify_rank_one(BoundKind.MULTIFACTOR, lhs, coeff, w, tol, g)


def classical_bounds(M, N, tol: Tolerances = DEFAULT_TOL):
    """Known bounds that predate the rank-one refinements.

    Returns ``(reports, skipped)`` where ``skipped`` lists ``(kind, reason)``
    for each bound whose hypothesis fails:

    * ``lambda_min``: ``M o N >= lambda_min(N) (M o I)``, for real PSD ``M``
      and real symmetric ``N``;
    * ``quad_form``: ``M o N >= M / (e^T N^-1 e)``, for PSD ``M`` and
      positive definite ``N``;
    * ``fiedler``: ``M o M^-1 >= I`` for invertible PSD ``M``.
    """
    M = hermitian(M, tol, "M")
    N = hermitian(N, tol, "N")
    if M.shape != N.shape:
        raise DimensionError(f"M{M.shape} and N{N.shape} differ in shape")
    n = M.shape[0]
    reports, skipped = [], []
    m_cert = psd_certificate(M, tol)
    m_psd = m_cert.accepted
    m_real = max_abs(M.imag) <= tol.hermitian_tol * max(1.0, max_abs(M))
    n_real = max_abs(N.imag) <= tol.hermitian_tol * max(1.0, max_abs(N))
    lhs = M * N

    if m_psd and m_real and n_real:
        lam_n = float(hermitian_eigen(N.real, tol)[0][0])
        bound = lam_n * (M * np.eye(n))
        reports.append(BoundReport(BoundKind.LAMBDA_MIN, lhs, bound, loewner_geq(lhs, bound, tol)))
    else:
        skipped.append((BoundKind.LAMBDA_MIN.value, "requires real PSD M and real symmetric N"))

    n_pd = psd_certificate(N, tol).accepted and numerical_rank(N, tol) == n
    if m_psd and n_pd:
        e = np.ones(n)
        q = float(np.real(e @ np.linalg.solve(N, e)))
        bound = M / q
        reports.append(BoundReport(BoundKind.QUAD_FORM, lhs, bound, loewner_geq(lhs, bound, tol)))
    else:
        skipped.append((BoundKind.QUAD_FORM.value, "requires PSD M and det(N) > 0"))

    if m_psd and numerical_rank(M, tol) == n:
        f_lhs = M * np.linalg.inv(M)
        f_lhs = (f_lhs + f_lhs.conj().T) / 2
        bound = np.eye(n, dtype=np.complex128)
        reports.append(BoundReport(BoundKind.FIEDLER, f_lhs, bound, loewner_geq(f_lhs, bound, tol)))
    else:
        skipped.append((BoundKind.FIEDLER.value, "requires invertible PSD M"))
    return reports, skipped


def hkv_equal_gram_bound(A, B, tol: Tolerances = DEFAULT_TOL, weak: bool = False) -> BoundReport:
    """Real factors with ``A A^T = B B^T = M``: bound with coefficient ``1/rk(M)``.

    ``weak=True`` certifies the earlier ``1/(2 rk M)`` coefficient instead.
    """
    A, B = _factor_pair(A, B)
    for name, X in (("A", A), ("B", B)):
        if max_abs(X.imag) != 0.0:
            raise DomainError(f"{name} must be real")
    A, B = pad_to_common(A.real, B.real)
    MA, MB = A @ A.T, B @ B.T
    gap = max_abs(MA - MB)
    if gap > tol.psd_rtol * max(1.0, max_abs(MA)):
        raise DomainError(f"A A^T and B B^T differ by {gap:.3e}")
    r, r_lo, r_hi = _rank_range(MA, tol)
    if r == 0:
        raise DomainError("A A^T is zero")
    coeff = 1.0 / (2 * r) if weak else 1.0 / r
    ambiguous = (r_lo, r_hi) != (r, r)
    g = _Gamma(coeff, ambiguous, tuple(sorted(
        (0.5 if weak else 1.0) / q for q in range(max(r_lo, 1), r_hi + 1))))
    lhs = (MA * MB).astype(np.complex128)
    return certify_rank_one(BoundKind.HKV, lhs, coeff, np.sum(A * B, axis=1), tol, g,
                            extra={"weak": weak})


def upper_bound(M, N, tol: Tolerances = DEFAULT_TOL) -> BoundReport:
    """``M o N <= c D_M D_N`` with ``c`` the largest product of correlation column norms."""
    M = hermitian(M, tol, "M")
    N = hermitian(N, tol, "N")
    if M.shape != N.shape:
        raise DimensionError(f"M{M.shape} and N{N.shape} differ in shape")
    dm, dn = np.diagonal(M).real, np.diagonal(N).real
    n = M.shape[0]
    fm = tol.rank_rtol * max(float(np.max(dm, initial=0.0)), 0.0)
    fn = tol.rank_rtol * max(float(np.max(dn, initial=0.0)), 0.0)
    J = [j for j in range(n) if dm[j] > fm and dn[j] > fn]
    c = 0.0
    if J:
        sm, sn = np.sqrt(dm[J]), np.sqrt(dn[J])
        CM = M[np.ix_(J, J)] / np.outer(sm, sm)
        CN = N[np.ix_(J, J)] / np.outer(sn, sn)
        c = float(np.max(np.linalg.norm(CM, axis=0) * np.linalg.norm(CN, axis=0)))
    lhs = M * N
    bound = np.diag(c * dm * dn).astype(np.complex128)
    cert = loewner_geq(bound, lhs, tol)
    return BoundReport(BoundKind.UPPER, lhs, bound, cert, extra={"c": c, "J": J})


def sqrt_bound(M, N, tol: Tolerances = DEFAULT_TOL) -> BoundReport:
    """Main bound applied to the factors ``sqrt(M)``, ``sqrt(N)``."""
    RM, RN = principal_sqrt(M, tol), principal_sqrt(N, tol)
    if max_abs(RM) == 0.0 or max_abs(RN) == 0.0:
        raise DomainError("sqrt bound needs nonzero M and N")
    rep = main_lower_bound(RM, RN, tol)
    rep.kind = BoundKind.SQRT
    return rep


def rank_one_sum_exact(A, B) -> np.ndarray:
    """``sum_{j,k} (v_j o w_k)(v_j o w_k)*`` over columns ``v_j`` of A, ``w_k`` of B."""
    A, B = _factor_pair(A, B)
    Z = (A[:, :, None] * B[:, None, :]).reshape(A.shape[0], -1)
    return Z @ Z.conj().T
