"""Seeded property battery behind ``hbound selfcheck``."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bounds import main_lower_bound, upper_bound
from .errors import HadaboundError
from .kernels import (
    entrywise_power_preserver_check,
    gaussian_novak_matrix,
    novak_matrix,
)
from .matcore import (
    DEFAULT_TOL,
    EPS,
    Tolerances,
    bilinear_trace_residual,
    bilinear_trace_scale,
    psd_certificate,
)
from .witness import dnn_counterexample, tight_example

MAX_RECORDED_FAILURES = 5


def random_factor(rng, n: int, rank: int, cols: int, complex_: bool = True) -> np.ndarray:
    """``n x cols`` factor of exact rank ``rank`` (``rank <= min(n, cols)``)."""
    def gauss(*shape):
        z = rng.standard_normal(shape)
        if complex_:
            z = z + 1j * rng.standard_normal(shape)
        return z
    return gauss(n, rank) @ gauss(rank, cols)


def random_correlation(rng, n: int, rank: int | None = None) -> np.ndarray:
    G = rng.standard_normal((n, rank or n))
    M = G @ G.T
    s = np.sqrt(np.diagonal(M))
    return M / np.outer(s, s)


def random_psd(rng, n: int, rank: int | None = None, complex_: bool = True) -> np.ndarray:
    A = random_factor(rng, n, rank or n, rank or n, complex_)
    return A @ A.conj().T


@dataclass
class PropertyTally:
    passed: int = 0
    failed: int = 0
    failures: list[str] = field(default_factory=list)

    def record(self, ok: bool, detail: str) -> None:
        if ok:
            self.passed += 1
        else:
            self.failed += 1
            if len(self.failures) < MAX_RECORDED_FAILURES:
                self.failures.append(detail)


@dataclass
class SelfCheckReport:
    seed: int
    n_max: int
    trials: int
    properties: dict[str, PropertyTally]

    @property
    def all_passed(self) -> bool:
        return all(t.failed == 0 for t in self.properties.values())

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "n_max": self.n_max,
            "trials": self.trials,
            "all_passed": self.all_passed,
            "properties": {
                name: {"passed": t.passed, "failed": t.failed, "failures": t.failures}
                for name, t in self.properties.items()
            },
        }


def _guard(tally: PropertyTally, label: str, fn) -> None:
    try:
        ok, detail = fn()
    except HadaboundError as exc:
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    tally.record(ok, f"{label}: {detail}")


def selfcheck(seed: int = 0, n_max: int = 6, trials: int = 100,
              tol: Tolerances = DEFAULT_TOL) -> SelfCheckReport:
    if n_max < 2 or trials < 1:
        raise ValueError("need n_max >= 2 and trials >= 1")
    rng = np.random.default_rng(seed)
    names = ["dominance", "tightness", "rank_one_equality", "counterexample",
             "kernel_psd", "trace_identity", "upper_bound"]
    props = {name: PropertyTally() for name in names}

    for t in range(trials):
        n = int(rng.integers(1, n_max + 1))
        ra, rb = (int(x) for x in rng.integers(1, n + 1, size=2))
        cols = int(rng.integers(max(ra, rb), n + 3))
        cplx = bool(rng.integers(2))
        A = random_factor(rng, n, ra, cols, cplx)
        B = random_factor(rng, n, rb, cols, cplx)

        def dominance():
            rep = main_lower_bound(A, B, tol)
            return rep.accepted, f"lambda_min={rep.certificate.lambda_min:.3e}"
        _guard(props["dominance"], f"trial {t} n={n} ranks=({ra},{rb})", dominance)

        nn = int(rng.integers(1, n_max + 1))
        r, s = (int(x) for x in rng.integers(1, nn + 1, size=2))
        wseed = int(rng.integers(2**31))

        def tightness():
            w = tight_example(nn, nn, r, s, seed=wseed, tol=tol)
            return w.confirmed, f"margin={w.achieved_margin:.3e} inflated={w.inflated.lambda_min:.3e}"
        _guard(props["tightness"], f"trial {t} n={nn} r={r} s={s}", tightness)

        u = random_factor(rng, n, 1, 1, cplx)
        v = random_factor(rng, n, 1, 1, cplx)

        def rank_one():
            rep = main_lower_bound(u, v, tol)
            diff = float(np.linalg.norm(rep.lhs - rep.bound_matrix))
            scale = max(1.0, float(np.linalg.norm(rep.lhs)))
            return rep.accepted and diff <= 1e4 * EPS * scale, f"frobenius={diff:.3e}"
        _guard(props["rank_one_equality"], f"trial {t} n={n}", rank_one)

        a, b = (float(x) for x in rng.uniform(0.1, 3.0, size=2))
        lo, hi = math.sqrt(a * b / 2), math.sqrt(a * b)
        c = float(lo + (hi - lo) * rng.uniform(0.0, 0.999))

        def counterexample():
            x = dnn_counterexample(a, b, c, tol)
            return x.confirmed, f"det={x.defect_det:.3e} closed={x.closed_form_det:.3e}"
        _guard(props["counterexample"], f"trial {t} a={a:.4g} b={b:.4g} c={c:.4g}", counterexample)

        k = int(rng.integers(1, 5))
        X = rng.uniform(-np.pi, np.pi, size=(k, n))
        sets = [rng.standard_normal((n, 3)) for _ in range(min(k, 3))]
        corr = random_correlation(rng, n, int(rng.integers(1, n + 1)))

        def kernels():
            c1 = psd_certificate(novak_matrix(X), tol)
            c2 = psd_certificate(gaussian_novak_matrix(sets), tol)
            c3 = entrywise_power_preserver_check(corr, min(k, 3), tol).certificate
            ok = c1.accepted and c2.accepted and c3.accepted
            return ok, f"lambda_min=({c1.lambda_min:.3e}, {c2.lambda_min:.3e}, {c3.lambda_min:.3e})"
        _guard(props["kernel_psd"], f"trial {t} n={n} k={k}", kernels)

        M, N = A @ A.conj().T, B @ B.conj().T
        x, y = random_factor(rng, n, 1, 1, cplx)[:, 0], random_factor(rng, n, 1, 1, cplx)[:, 0]

        def identity():
            res = bilinear_trace_residual(M, N, x, y)
            bound = 1e3 * EPS * bilinear_trace_scale(M, N, x, y)
            return res <= bound, f"residual={res:.3e} bound={bound:.3e}"
        _guard(props["trace_identity"], f"trial {t} n={n}", identity)

        def upper():
            rep = upper_bound(M, N, tol)
            return rep.accepted, f"lambda_min={rep.certificate.lambda_min:.3e}"
        _guard(props["upper_bound"], f"trial {t} n={n}", upper)

    return SelfCheckReport(seed, n_max, trials, props)
