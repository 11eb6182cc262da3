"""Command-line front end.

Exit codes: 0 when every certificate in the report is accepted (for
``witness --dnn``: when the counterexample is confirmed), 1 when at least
one is rejected, 2 for usage, parse, shape or hypothesis errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import bounds, kernels, witness
from .errors import HadaboundError
from .io import (
    FormatError,
    is_pointset,
    load_json,
    matrix_from_json,
    matrix_to_json,
    points_from_json,
)
from .matcore import (
    DEFAULT_TOL,
    EPS,
    Tolerances,
    as_vector,
    bilinear_trace_residual,
    bilinear_trace_scale,
    loewner_geq,
    psd_certificate,
)
from .selfcheck import selfcheck

ENV_TOL = "HB_DEFAULT_TOL"
TABLE_DIGITS = 6


class InputError(Exception):
    """Raised for problems that map to exit code 2."""


def _read(path):
    try:
        return load_json(path)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}")
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}")


def _matrix(path):
    try:
        return matrix_from_json(_read(path))
    except (FormatError, HadaboundError) as exc:
        raise InputError(f"{path}: {exc}")


def _points(path):
    try:
        return points_from_json(_read(path))
    except (FormatError, HadaboundError) as exc:
        raise InputError(f"{path}: {exc}")


def _cert_item(name, cert, **extra):
    item = {"item": name, **cert.to_dict()}
    item.update(extra)
    return item


def _need(files, count, what):
    if count is not None and len(files) != count:
        raise InputError(f"{what} expects {count} input file(s), got {len(files)}")


# -- subcommands -----------------------------------------------------------

def _cmd_bound(args, tol):
    f = args.files
    mode = args.mode
    if mode == "main":
        _need(f, 2, "--main")
        reports = [bounds.main_lower_bound(_matrix(f[0]), _matrix(f[1]), tol, p=args.pad)]
    elif mode == "compressed":
        _need(f, 3, "--compressed")
        reports = [bounds.compressed_lower_bound(_matrix(f[0]), _matrix(f[1]), _matrix(f[2]), tol)]
    elif mode == "multiplier":
        if not f:
            raise InputError("--multiplier expects at least one matrix file")
        us = ys = None
        if args.weights:
            doc = _read(args.weights)
            try:
                us = [as_vector(matrix_from_json(m)) for m in doc["u"]]
                ys = [as_vector(matrix_from_json(m)) for m in doc["y"]]
            except (KeyError, TypeError, FormatError, HadaboundError) as exc:
                raise InputError(f"{args.weights}: expected {{\"u\": [...], \"y\": [...]}}: {exc}")
        reports = [bounds.multiplier_lower_bound([_matrix(p) for p in f], us, ys, tol)]
    elif mode == "multifactor":
        reports = [bounds.multifactor_lower_bound([_matrix(p) for p in f], tol=tol)]
    elif mode == "classical":
        _need(f, 2, "--classical")
        reports, skipped = bounds.classical_bounds(_matrix(f[0]), _matrix(f[1]), tol)
        items = [r.to_dict() for r in reports]
        items += [{"kind": k, "skipped": True, "reason": why} for k, why in skipped]
        return items
    elif mode == "hkv":
        _need(f, 2, "--hkv")
        A, B = _matrix(f[0]), _matrix(f[1])
        reports = [bounds.hkv_equal_gram_bound(A, B, tol),
                   bounds.hkv_equal_gram_bound(A, B, tol, weak=True)]
    elif mode == "upper":
        _need(f, 2, "--upper")
        reports = [bounds.upper_bound(_matrix(f[0]), _matrix(f[1]), tol)]
    elif mode == "sqrt":
        _need(f, 2, "--sqrt")
        reports = [bounds.sqrt_bound(_matrix(f[0]), _matrix(f[1]), tol)]
    return [r.to_dict() for r in reports]


def _cmd_verify(args, tol):
    f = args.files
    if args.mode == "loewner":
        _need(f, 2, "--loewner")
        return [_cert_item("loewner", loewner_geq(_matrix(f[0]), _matrix(f[1]), tol))]
    if args.mode == "psd":
        return [_cert_item(p, psd_certificate(_matrix(p), tol)) for p in f]
    _need(f, 4, "--identity")
    M, N, u, v = (_matrix(p) for p in f)
    res = bilinear_trace_residual(M, N, u, v)
    bound = 1e3 * EPS * bilinear_trace_scale(M, N, u, v)
    return [{"item": "trace_identity", "residual": float(res), "bound": float(bound),
             "accepted": bool(res <= bound)}]


def _gram_for(points, args):
    if args.kernel == "cosine":
        if points.shape[1] != 1:
            raise InputError("cosine kernel needs dim 1 point sets")
        return kernels.cosine_gram(points[:, 0])
    return kernels.gaussian_gram(points, args.lam)


def _cmd_kernel(args, tol):
    f = args.files
    mode = args.mode
    if mode == "power-preserver":
        _need(f, 1, "--power-preserver")
        return [kernels.entrywise_power_preserver_check(_matrix(f[0]), args.k, tol).to_dict()]
    if mode == "product":
        if not f:
            raise InputError("--product expects at least one input file")
        grams = []
        for p in f:
            doc = _read(p)
            try:
                grams.append(_gram_for(points_from_json(doc), args) if is_pointset(doc)
                             else matrix_from_json(doc))
            except (FormatError, HadaboundError) as exc:
                raise InputError(f"{p}: {exc}")
        return [kernels.product_kernel_lower_bound(grams, tol=tol).to_dict()]
    if mode == "novak":
        if not f:
            raise InputError("--novak expects at least one point set")
        sets = [_points(p) for p in f]
        if args.kernel == "gaussian":
            M = kernels.gaussian_novak_matrix(sets)
        else:
            if any(s.shape[1] != 1 for s in sets):
                raise InputError("cosine Novak matrix needs dim 1 point sets")
            lengths = {s.shape[0] for s in sets}
            if len(lengths) != 1:
                raise InputError(f"point sets have different sizes {sorted(lengths)}")
            M = kernels.novak_matrix(np.vstack([s[:, 0] for s in sets]))
        return [_cert_item("novak", psd_certificate(M, tol), matrix=matrix_to_json(M))]
    _need(f, 1, f"--{mode}")
    pts = _points(f[0])
    if mode == "cosine":
        args.kernel = "cosine"
    else:
        args.kernel = "gaussian"
    G = _gram_for(pts, args)
    return [_cert_item(mode, psd_certificate(G, tol), matrix=matrix_to_json(G))]


def _cmd_witness(args, tol):
    if args.mode == "tight":
        for name in ("n", "r", "s"):
            if getattr(args, name) is None:
                raise InputError(f"--tight needs --{name}")
        cols = args.cols if args.cols is not None else args.n
        w = witness.tight_example(args.n, cols, args.r, args.s, seed=args.seed, tol=tol)
        return [{**w.to_dict(), "accepted": w.confirmed}]
    if args.mode == "dnn":
        if None in (args.a, args.b, args.c):
            raise InputError("--dnn needs --a, --b and --c")
        x = witness.dnn_counterexample(args.a, args.b, args.c, tol)
        # a confirmed counterexample is the successful outcome here
        return [{**x.to_dict(), "accepted": x.confirmed}]
    _need(args.files, 2, "--embed")
    if args.m is None:
        raise InputError("--embed needs --m")
    A, B = _matrix(args.files[0]), _matrix(args.files[1])
    before = bounds.main_lower_bound(A, B, tol)
    A2, B2 = witness.dimension_embedding(A, B, args.m)
    after = bounds.main_lower_bound(A2, B2, tol)
    same = before.gamma == after.gamma
    return [{
        "family": "embed",
        "parameters": {"n": A.shape[0], "m": args.m},
        "seed": None,
        "margin": after.certificate.lambda_min,
        "gamma_before": before.gamma,
        "gamma_after": after.gamma,
        "naive_coefficient": 1.0 / args.m,
        "accepted": same and after.accepted,
        "A": matrix_to_json(A2),
        "B": matrix_to_json(B2),
    }]


# -- output ----------------------------------------------------------------

def _fmt(value):
    if isinstance(value, float):
        return f"{value:.{TABLE_DIGITS}g}"
    if isinstance(value, dict) and "rows" in value and "data" in value:
        return f"<{value['rows']}x{value['cols']} matrix>"
    if isinstance(value, list) and value and isinstance(value[0], list) and len(value[0]) == 2:
        return "[" + ", ".join(_fmt_complex(*z) for z in value) + "]"
    if isinstance(value, dict):
        return "{" + ", ".join(f"{k}: {_fmt(v)}" for k, v in value.items()) + "}"
    return str(value)


def _fmt_complex(re, im):
    if im == 0:
        return _fmt(float(re))
    return f"{_fmt(float(re))}{'+' if im >= 0 else '-'}{_fmt(abs(float(im)))}j"


def _json_scalar(value):
    if isinstance(value, np.generic):
        return value.item()
    raise TypeError(f"cannot serialize {type(value).__name__}")


def render(doc, fmt):
    if fmt == "json":
        return json.dumps(doc, indent=2, default=_json_scalar)
    lines = [f"command: {doc['command']}  status: {doc['status']}"]
    for i, item in enumerate(doc["items"]):
        lines.append(f"[{i}]")
        width = max(len(k) for k in item)
        for key, value in item.items():
            lines.append(f"  {key:<{width}}  {_fmt(value)}")
    return "\n".join(lines)


# -- parser ----------------------------------------------------------------

def _common(p):
    p.add_argument("--tol-rank", type=float, help="relative rank cutoff (default 1e-9)")
    p.add_argument("--tol-psd", type=float, help="relative PSD allowance (default 1e-8)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=["json", "table"], default="json")
    p.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")


def _modes(p, names):
    g = p.add_mutually_exclusive_group(required=True)
    for name in names:
        g.add_argument(f"--{name}", dest="mode", action="store_const", const=name)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hbound",
        description="Certified lower/upper bounds for Schur products of PSD matrices.",
        epilog="Exit codes: 0 all accepted, 1 some certificate rejected, 2 usage/parse error.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", help="certify a Schur-product bound")
    _modes(p, ["main", "compressed", "multiplier", "multifactor", "classical", "hkv", "upper", "sqrt"])
    p.add_argument("files", nargs="*", help="matrix JSON files")
    p.add_argument("--weights", help='JSON {"u": [...], "y": [...]} for --multiplier')
    p.add_argument("--pad", type=int, default=0, help="extra zero columns for --main")
    _common(p)

    p = sub.add_parser("verify", help="check a Loewner/PSD claim or the trace identity")
    _modes(p, ["loewner", "psd", "identity"])
    p.add_argument("files", nargs="*")
    _common(p)

    p = sub.add_parser("kernel", help="kernel Gram matrices and their lower bounds")
    _modes(p, ["cosine", "gaussian", "novak", "product", "power-preserver"])
    p.add_argument("files", nargs="*", help="point-set (or matrix) JSON files")
    p.add_argument("--kernel", choices=["cosine", "gaussian"], default="cosine",
                   help="kernel for --novak/--product (default cosine)")
    p.add_argument("--lambda", dest="lam", type=float, default=1.0, help="Gaussian width")
    p.add_argument("--k", type=int, default=1, help="power for --power-preserver")
    _common(p)

    p = sub.add_parser("witness", help="tightness witnesses and counterexamples")
    _modes(p, ["tight", "dnn", "embed"])
    p.add_argument("files", nargs="*")
    p.add_argument("--n", type=int)
    p.add_argument("--cols", type=int, help="column count a for --tight (default n)")
    p.add_argument("--r", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--c", type=float)
    p.add_argument("--m", type=int, help="target row count for --embed")
    _common(p)

    p = sub.add_parser("selfcheck", help="run the seeded property battery")
    p.add_argument("--n-max", type=int, default=6)
    p.add_argument("--trials", type=int, default=100)
    _common(p)
    return parser


def resolve_tolerances(args, environ=os.environ) -> Tolerances:
    tol = DEFAULT_TOL
    if environ.get(ENV_TOL):
        tol = Tolerances.parse(environ[ENV_TOL], tol)
    return tol.replace(rank_rtol=args.tol_rank, psd_rtol=args.tol_psd)


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        tol = resolve_tolerances(args)
    except ValueError as exc:
        print(f"hbound: bad tolerance: {exc}", file=sys.stderr)
        return 2
    try:
        if args.command == "selfcheck":
            if args.n_max < 2 or args.trials < 1:
                raise InputError("need --n-max >= 2 and --trials >= 1")
            rep = selfcheck(args.seed, args.n_max, args.trials, tol)
            items = [{"property": name, **t} for name, t in rep.to_dict()["properties"].items()]
            for item in items:
                item["accepted"] = item["failed"] == 0
        else:
            handler = {"bound": _cmd_bound, "verify": _cmd_verify,
                       "kernel": _cmd_kernel, "witness": _cmd_witness}[args.command]
            items = handler(args, tol)
    except InputError as exc:
        print(f"hbound: {exc}", file=sys.stderr)
        return 2
    except (HadaboundError, ValueError, np.linalg.LinAlgError) as exc:
        print(f"hbound: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2

    ok = all(item.get("accepted", True) for item in items)
    doc = {"command": args.command, "mode": getattr(args, "mode", None),
           "status": "accepted" if ok else "rejected", "items": items}
    text = render(doc, args.format)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return 0 if ok else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
