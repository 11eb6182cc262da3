"""Acceptance criteria, one test each.

Every test prints a single ``PASS``/``FAIL`` line (visible with ``pytest -s``
or by running this file directly) and then asserts the same verdict.
"""

import math
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import EPS, correlation, eig_scale, factor_of_rank, gauss, min_eig, psd  # noqa: E402
from hadabound.bounds import (  # noqa: E402
    classical_bounds,
    hkv_equal_gram_bound,
    main_lower_bound,
    multiplier_lower_bound,
    orthoprojection_P,
    upper_bound,
)
from hadabound.factor import gram_factor  # noqa: E402
from hadabound.kernels import (  # noqa: E402
    cosine_gram,
    entrywise_power_preserver_check,
    gaussian_gram,
    gaussian_novak_matrix,
    novak_matrix,
    product_kernel_lower_bound,
)
from hadabound.matcore import (  # noqa: E402
    bilinear_trace_residual,
    bilinear_trace_scale,
    trace_inner,
)
from hadabound.witness import dimension_embedding, dnn_counterexample, tight_example  # noqa: E402

PSD_RTOL = 1e-8
RANK_ONE_RTOL = 1e-10
IDENTITY_RTOL = 1e3 * EPS
PROJECTION_RTOL = 1e4 * EPS
PROJECTION_SLACK = 1e-6
DET_RTOL = 1e-10


def report(number, title, ok, detail):
    print(f"{'PASS' if ok else 'FAIL'} criterion {number:>2}: {title} ({detail})")
    return ok


def dominated(diff):
    """Independent oracle: lambda_min(diff) >= -PSD_RTOL * scale."""
    return min_eig(diff) >= -PSD_RTOL * eig_scale(diff)


def rng_for(number):
    return np.random.default_rng(1000 + number)


def criterion_1():
    rng, fails, worst = rng_for(1), 0, 0.0
    for t in range(1000):
        n = int(rng.integers(1, 11))
        ra, rb = (int(x) for x in rng.integers(1, n + 1, 2))
        cplx = t % 2 == 1
        A = factor_of_rank(rng, n, ra, int(rng.integers(max(ra, 1), n + 3)), cplx)
        B = factor_of_rank(rng, n, rb, int(rng.integers(max(rb, 1), n + 3)), cplx)
        rep = main_lower_bound(A, B)
        diff = rep.lhs - rep.bound_matrix
        worst = min(worst, min_eig(diff) / eig_scale(diff))
        fails += not (rep.accepted and dominated(diff))
    return report(1, "main-bound dominance, 1000 pairs", fails == 0,
                  f"failures={fails}, worst lambda_min/scale={worst:.2e}")


def criterion_2():
    fails = cases = 0
    for n in range(1, 7):
        for r in range(1, n + 1):
            for s in range(1, n + 1):
                w = tight_example(n, n, r, s, seed=97 * n + 7 * r + s)
                diff = w.report.lhs - w.report.bound_matrix
                tight = abs(min_eig(diff)) <= PSD_RTOL * eig_scale(diff)
                inflated_rejected = not w.inflated.accepted
                cases += 1
                fails += not (tight and inflated_rejected and w.confirmed)
    return report(2, "tightness, all 1 <= r, s <= n <= 6", fails == 0,
                  f"cases={cases}, failures={fails}")


def criterion_3():
    rng, worst, fails = rng_for(3), 0.0, 0
    for t in range(500):
        n = int(rng.integers(1, 11))
        u, v = gauss(rng, (n, 1), t % 2 == 1), gauss(rng, (n, 1), t % 2 == 1)
        rep = main_lower_bound(u, v)
        ratio = np.linalg.norm(rep.lhs - rep.bound_matrix) / max(1.0, np.linalg.norm(rep.lhs))
        worst = max(worst, ratio)
        fails += not (rep.gamma == 1 and ratio <= RANK_ONE_RTOL)
    return report(3, "rank-one equality", fails == 0, f"worst frobenius/scale={worst:.2e}")


def criterion_4():
    rng = rng_for(4)
    counts = dict.fromkeys(["correlation_over_n", "diagonal_over_n", "factor_product", "one_over_max", "lambda_min", "quad_form", "fiedler"], 0)
    for _ in range(200):
        n = int(rng.integers(1, 9))
        cplx = bool(rng.integers(2))

        C = correlation(rng, n, int(rng.integers(1, n + 1)), complex_=cplx)
        A = gram_factor(C).factor
        lhs = main_lower_bound(A, A.conj()).lhs
        counts["correlation_over_n"] += dominated(lhs - np.ones((n, n)) / n)

        M = psd(rng, n, int(rng.integers(1, n + 1)), cplx)
        rep = multiplier_lower_bound([M])
        dM = np.diagonal(M)
        counts["diagonal_over_n"] += rep.accepted and dominated(rep.lhs - np.outer(dM, dM.conj()) / n)

        X, Y = gauss(rng, (n, n), cplx), gauss(rng, (n, n), cplx)
        XY = X * Y
        counts["factor_product"] += dominated((X @ X.conj().T) * (Y @ Y.conj().T) - XY @ XY.conj().T)

        ra, rb = (int(x) for x in rng.integers(1, n + 1, 2))
        rep = main_lower_bound(factor_of_rank(rng, n, ra, n, cplx), factor_of_rank(rng, n, rb, n, cplx))
        counts["one_over_max"] += dominated(rep.lhs - rep.bound_matrix * min(ra, rb) / max(ra, rb))

        reps, _ = classical_bounds(psd(rng, n, complex_=False), psd(rng, n, complex_=False))
        for r in reps:
            counts[r.kind.value] += r.accepted and dominated(r.lhs - r.bound_matrix)
    ok = all(c == 200 for c in counts.values())
    return report(4, "specialization cross-checks", ok,
                  ", ".join(f"{k}={v}/200" for k, v in counts.items()))


def criterion_5():
    rng, fails, deficient = rng_for(5), 0, 0
    for _ in range(200):
        n = int(rng.integers(1, 9))
        # full row rank keeps A A^T o A A^T nonsingular, so margins can differ
        A = rng.standard_normal((n, int(rng.integers(n, n + 3))))
        Q, _ = np.linalg.qr(rng.standard_normal((A.shape[1], A.shape[1])))
        strong = hkv_equal_gram_bound(A, A @ Q)
        weak = hkv_equal_gram_bound(A, A @ Q, weak=True)
        ok = (strong.accepted and dominated(strong.lhs - strong.bound_matrix) and weak.accepted
              and weak.certificate.lambda_min > strong.certificate.lambda_min)
        fails += not ok
        # rank-deficient factors: both bounds must still certify
        A = rng.standard_normal((n, int(rng.integers(1, n + 1))))
        Q, _ = np.linalg.qr(rng.standard_normal((A.shape[1], A.shape[1])))
        strong = hkv_equal_gram_bound(A, A @ Q)
        deficient += not (strong.accepted and dominated(strong.lhs - strong.bound_matrix)
                          and hkv_equal_gram_bound(A, A @ Q, weak=True).accepted)
    return report(5, "equal-Gram corollary vs the 1/(2 rk) bound", fails == 0 and deficient == 0,
                  f"pairs=200+200, strict-margin failures={fails}, rank-deficient failures={deficient}")


def criterion_6():
    rng, worst, fails = rng_for(6), 0.0, 0
    for _ in range(1000):
        n = int(rng.integers(1, 13))
        M, N, u, v = gauss(rng, (n, n)), gauss(rng, (n, n)), gauss(rng, n), gauss(rng, n)
        ratio = bilinear_trace_residual(M, N, u, v) / bilinear_trace_scale(M, N, u, v)
        worst = max(worst, ratio)
        fails += not ratio <= IDENTITY_RTOL
    return report(6, "trace identity, 1000 instances", fails == 0, f"worst residual/scale={worst:.2e}")


def criterion_7():
    rng, fails = rng_for(7), 0
    worst_res = worst_trace = 0.0
    for _ in range(500):
        n, a = int(rng.integers(1, 9)), int(rng.integers(1, 9))
        ra, rb = (int(x) for x in rng.integers(1, min(n, a) + 1, 2))
        A, B = factor_of_rank(rng, n, ra, a), factor_of_rank(rng, n, rb, a)
        P = orthoprojection_P(A, B)
        scale = max(1.0, np.linalg.norm(A) * np.linalg.norm(B))
        res = np.max(np.abs(A @ P @ B.T - A @ B.T)) / scale
        excess = trace_inner(P, P).real - min(ra, rb)
        worst_res, worst_trace = max(worst_res, res), max(worst_trace, excess)
        fails += not (res <= PROJECTION_RTOL and excess <= PROJECTION_SLACK)
    return report(7, "projection property, 500 pairs", fails == 0,
                  f"worst residual/scale={worst_res:.2e}, worst <P,P> - min rank={worst_trace:.2e}")


def criterion_8():
    rng, fails = rng_for(8), 0
    plug = dnn_counterexample(1, 1, 0.8)
    for _ in range(100):
        a, b = rng.uniform(0.05, 10, 2)
        lo, hi = math.sqrt(a * b / 2), math.sqrt(a * b)
        x = dnn_counterexample(a, b, lo + (hi - lo) * rng.uniform(0, 0.999))
        scale = max(1.0, float(np.max(np.abs(x.defect))) ** 3)
        ok = (np.all(x.matrix >= 0) and dominated(x.matrix) and x.det_error <= DET_RTOL * scale
              and x.defect_det < 0 and not x.defect_certificate.accepted)
        fails += not ok
    ok = fails == 0 and abs(plug.defect_det + 0.0192) <= DET_RTOL
    return report(8, "doubly non-negative counterexamples", ok,
                  f"triples=100, failures={fails}, det(1,1,0.8)={plug.defect_det:.6g}")


def criterion_9():
    rng = rng_for(9)
    counts = dict.fromkeys(["novak", "gaussian_novak", "product_kernel", "power_preserver"], 0)
    for _ in range(200):
        k, n = int(rng.integers(1, 5)), int(rng.integers(1, 9))
        counts["novak"] += dominated(novak_matrix(rng.uniform(-np.pi, np.pi, (k, n))))

        k, n = int(rng.integers(1, 4)), int(rng.integers(1, 9))
        sets = [rng.standard_normal((n, int(rng.integers(1, 4)))) for _ in range(k)]
        counts["gaussian_novak"] += dominated(gaussian_novak_matrix(sets))

        k, n = int(rng.integers(1, 4)), int(rng.integers(1, 9))
        grams = [rng.uniform(0.2, 3) * (cosine_gram(rng.uniform(-4, 4, n)) if rng.integers(2)
                                        else gaussian_gram(rng.standard_normal((n, 2)), rng.uniform(0.1, 2)))
                 for _ in range(k)]
        rep = product_kernel_lower_bound(grams)
        counts["product_kernel"] += rep.accepted and dominated(rep.lhs - rep.bound_matrix)

        k, n = int(rng.integers(1, 4)), int(rng.integers(1, 7))
        rep = entrywise_power_preserver_check(correlation(rng, n, int(rng.integers(1, n + 1))), k)
        counts["power_preserver"] += rep.accepted and dominated(rep.lhs - rep.bound_matrix)
    ok = all(c == 200 for c in counts.values())
    return report(9, "kernel suite", ok, ", ".join(f"{k}={v}/200" for k, v in counts.items()))


def criterion_10():
    rng, fails = rng_for(10), 0
    for _ in range(100):
        n = int(rng.integers(1, 9))
        ra, rb = (int(x) for x in rng.integers(1, n + 1, 2))
        A, B = factor_of_rank(rng, n, ra, n), factor_of_rank(rng, n, rb, n)
        before = main_lower_bound(A, B)
        m = 10 * n
        after = main_lower_bound(*dimension_embedding(A, B, m))
        # exact integer rank equality, while the naive coefficient 1/m shrinks
        same = round(1 / before.gamma) == round(1 / after.gamma) == min(ra, rb)
        fails += not (same and after.accepted and 1 / m < after.gamma)
    return report(10, "dimension-free constant under embedding to m = 10n", fails == 0,
                  f"instances=100, failures={fails}")


def criterion_11():
    rng, fails, worst = rng_for(11), 0, 0.0
    for t in range(500):
        n = int(rng.integers(1, 11))
        M = psd(rng, n, int(rng.integers(1, n + 1)), t % 2 == 1)
        N = psd(rng, n, int(rng.integers(1, n + 1)), t % 2 == 0)
        rep = upper_bound(M, N)
        fails += not (rep.accepted and dominated(rep.bound_matrix - rep.lhs))
    for _ in range(100):
        n = int(rng.integers(1, 11))
        rep = upper_bound(np.diag(rng.uniform(0.1, 5, n)), np.diag(rng.uniform(0.1, 5, n)))
        ratio = np.linalg.norm(rep.bound_matrix - rep.lhs) / max(1.0, np.linalg.norm(rep.lhs))
        worst = max(worst, ratio)
        fails += not (abs(rep.extra["c"] - 1) <= 4 * EPS and ratio <= RANK_ONE_RTOL)
    return report(11, "upper bound, 500 pairs plus diagonal equality", fails == 0,
                  f"failures={fails}, worst diagonal frobenius/scale={worst:.2e}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10, criterion_11]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 12)])
def test_criterion(criterion):
    assert criterion()


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    sys.exit(0 if all(results) else 1)
