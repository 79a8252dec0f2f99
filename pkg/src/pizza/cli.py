"""Command-line interface: ``pizza arr|compute|verify|sweep``.

Exit codes: 0 success, 1 a verification case failed, 2 usage or validation
error, 3 an engine precondition failed.
"""
from __future__ import annotations

import argparse
import inspect
import io
import json
import math
import sys
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import __version__
from . import arrangement as arr
from .coxeter import CoxeterArrangement, build_type, minus_id_in_group
from .errors import PizzaError, PreconditionError
from .formulas import ENGINES, ball_value
from .integrate import QuadratureConfig
from .restriction import even_restricted, is_even_arrangement
from .streams import default_workers, derive_seed
from .verify import SUITES, SuiteReport

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_PRECONDITION = 0, 1, 2, 3


class UsageError(Exception):
    pass


# --- serialization -----------------------------------------------------------


def _encode(x) -> str:
    if isinstance(x, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_encode(v)}" for k, v in x.items()) + "}"
    if isinstance(x, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_encode(v) for v in x) + "]"
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if x is None:
        return "null"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return format(x, ".17g") if math.isfinite(x) else "null"
    return json.dumps(str(x))


def dump_json(obj) -> str:
    """JSON text with every float written to 17 significant digits."""
    return _encode(obj) + "\n"


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --- argument helpers -------------------------------------------------------------


def parse_vector(text: str) -> np.ndarray:
    try:
        v = np.array([float(t) for t in text.split(",")], dtype=float)
    except ValueError as exc:
        raise UsageError(f"bad vector {text!r}: expected comma-separated decimals") from exc
    if not np.all(np.isfinite(v)):
        raise UsageError(f"bad vector {text!r}: values must be finite")
    return v


def parse_radii(text: str, scale: str) -> List[float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError("radii must be start:stop:steps")
    try:
        r0, r1, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise UsageError(f"bad radii {text!r}") from exc
    if steps < 1 or r0 <= 0 or r1 < r0:
        raise UsageError("radii need 0 < start <= stop and steps >= 1")
    if steps == 1:
        return [r0]
    grid = np.geomspace(r0, r1, steps) if scale == "geometric" else np.linspace(r0, r1, steps)
    return [float(r) for r in grid]


def _load(args):
    """Arrangement from ``--type`` (Coxeter) or ``--in`` (text file)."""
    if bool(args.type) == bool(getattr(args, "infile", None)):
        raise UsageError("give exactly one of --type or --in")
    if args.type:
        return build_type(args.type)
    return arr.read(args.infile)


def _base(A):
    return A.base if isinstance(A, CoxeterArrangement) else A


def _config(args, keys: Sequence[str]) -> Dict:
    # workers never enters the config: it must not change any output
    return {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}


# --- commands ----------------------------------------------------------------------


def cmd_arr(args) -> int:
    if args.action == "build":
        if args.type:
            A = build_type(args.type)
            text = arr.dumps(A.base, comments=[f"Coxeter type {A.spec}"])
        elif args.normals:
            rows = [parse_vector(r) for r in args.normals.split(";")]
            text = arr.dumps(arr.build(rows, auto_orient=args.auto_orient))
        else:
            raise UsageError("arr build needs --type or --normals")
        _emit(text, args.out)
        return EXIT_OK
    A = _load(args)
    base = _base(A)
    if args.action == "info":
        info = {
            "command": "arr info",
            "version": __version__,
            "hyperplanes": len(base),
            "dim": base.dim,
            "parity_condition": arr.parity_condition(base),
            "components": arr.irreducible_components(base),
            "essential": arr.is_essential(base),
        }
        info["even"] = is_even_arrangement(base) if base.dim <= 4 else None
        if isinstance(A, CoxeterArrangement):
            info["type"] = str(A.spec)
            info["minus_id"] = minus_id_in_group(A)
        _emit(dump_json(info), args.out)
        return EXIT_OK
    # restrict
    k = args.root_index
    if k is None or not 0 <= k < len(base):
        raise UsageError(f"--root-index must lie in [0, {len(base) - 1}]")
    step = even_restricted(base, k)
    comments = [
        f"restriction to hyperplane {k} ({base.labels[k]}) of a {base.dim}-dim arrangement",
        f"z0 sign {step.z0_sign}",
        "subspace basis rows: " + "; ".join(" ".join(f"{v:.17g}" for v in row)
                                            for row in step.child_basis.vectors),
    ]
    _emit(arr.dumps(step.child, comments=comments), args.out)
    return EXIT_OK


def cmd_compute(args) -> int:
    A = _load(args)
    base = _base(A)
    a = parse_vector(args.center)
    if a.shape[0] != base.dim:
        raise UsageError(f"--center has {a.shape[0]} coordinates, the arrangement lives in R^{base.dim}")
    if args.radius <= 0:
        raise UsageError("--radius must be positive")
    cfg = QuadratureConfig(abs_tol=args.quad_tol) if args.quad_tol else QuadratureConfig()
    if args.method == "exact2d" and base.dim != 2:
        raise PreconditionError("exact2d needs a 2-dimensional arrangement")
    value, stderr = ball_value(A, a, args.radius, args.method, args.samples, args.seed,
                               args.workers, cfg)
    rec = {
        "command": "compute",
        "version": __version__,
        "method": args.method,
        "value": value,
        "seed": args.seed,
        "config": _config(args, ["type", "infile", "center", "radius", "method", "quad_tol"]),
    }
    if args.method == "mc":
        rec["stderr"] = stderr
        rec["n_samples"] = args.samples
        rec["config"]["samples"] = args.samples
    _emit(dump_json(rec), args.out)
    return EXIT_OK


def _suite_kwargs(fn, args) -> Dict:
    params = inspect.signature(fn).parameters
    kw = {}
    if "seed" in params:
        kw["seed"] = args.seed
    if "workers" in params:
        kw["workers"] = args.workers
    if args.samples is not None and "N" in params:
        kw["N"] = args.samples
    if fn is SUITES["sharing"] and (args.k is not None or args.p is not None):
        if args.k is None or args.p is None:
            raise UsageError("sharing needs both --k and --p")
        kw["cases"] = [(args.k, args.p)]
    if fn is SUITES["conjecture"] and args.n is not None:
        kw["n"] = args.n
    return kw


def cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    reports: List[SuiteReport] = []
    for name in names:
        fn = SUITES[name]
        try:
            reports.append(fn(**_suite_kwargs(fn, args)))
        except PreconditionError as exc:
            raise UsageError(f"suite {name}: {exc}") from exc
    ok = all(r.passed for r in reports)
    if args.format == "text":
        text = "\n".join(r.render() for r in reports) + "\n"
    else:
        body = [dict(r.to_dict(), version=__version__) for r in reports]
        if len(body) == 1:
            text = dump_json(body[0])
        else:
            text = dump_json({"suite": "all", "version": __version__, "seed": args.seed,
                              "config": _config(args, ["samples"]), "pass": ok, "reports": body})
    _emit(text, args.out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_sweep(args) -> int:
    A = _load(args)
    base = _base(A)
    a = parse_vector(args.center)
    if a.shape[0] != base.dim:
        raise UsageError(f"--center has {a.shape[0]} coordinates, the arrangement lives in R^{base.dim}")
    radii = parse_radii(args.radii, args.scale)
    if args.method == "exact2d" and base.dim != 2:
        raise PreconditionError("exact2d needs a 2-dimensional arrangement")
    if float(np.linalg.norm(a)) > radii[0] * (1 + 1e-12) and args.method != "mc":
        raise PreconditionError("every radius must be at least |center|")
    buf = io.StringIO()
    buf.write("R,value,stderr\n")
    for k, R in enumerate(radii):
        v, s = ball_value(A, a, R, args.method, args.samples, derive_seed(args.seed, k), args.workers)
        buf.write(f"{R:.17g},{v:.17g},{s:.17g}\n")
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


# --- parser ------------------------------------------------------------------------


def _source(p):
    p.add_argument("--type", help="Coxeter type such as B3, I2(6) or A2xE1")
    p.add_argument("--in", dest="infile", help="arrangement text file")


def _run_opts(p):
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--workers", type=int, default=default_workers())
    p.add_argument("--out", help="output path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pizza", description="Pizza quantities of hyperplane arrangements.")
    ap.add_argument("--version", action="version", version=f"pizza {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("arr", help="build, inspect and restrict arrangements")
    p.add_argument("action", choices=["build", "info", "restrict"])
    _source(p)
    p.add_argument("--normals", help="semicolon-separated normals, e.g. '1,0;0,1'")
    p.add_argument("--auto-orient", action="store_true", help="orient normals by a fixed generic vector")
    p.add_argument("--root-index", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_arr)

    p = sub.add_parser("compute", help="pizza quantity of a ball")
    _source(p)
    p.add_argument("--center", required=True, help="comma-separated coordinates")
    p.add_argument("--radius", type=float, required=True)
    p.add_argument("--method", choices=ENGINES, default="mc")
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--quad-tol", type=float)
    _run_opts(p)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=list(SUITES) + ["all"])
    p.add_argument("--samples", type=int, help="Monte Carlo samples per estimate")
    p.add_argument("--k", type=int, help="sharing: number of lines")
    p.add_argument("--p", type=int, help="sharing: number of people")
    p.add_argument("--n", type=int, choices=[2, 3], help="conjecture: dimension of A_n")
    p.add_argument("--format", choices=["json", "text"], default="json")
    _run_opts(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="pizza quantity of balls over a range of radii (CSV)")
    _source(p)
    p.add_argument("--center", required=True)
    p.add_argument("--radii", required=True, help="start:stop:steps")
    p.add_argument("--scale", choices=["geometric", "linear"], default="geometric")
    p.add_argument("--method", choices=ENGINES, default="exact2d")
    p.add_argument("--samples", type=int, default=1_000_000)
    _run_opts(p)
    p.set_defaults(func=cmd_sweep)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "workers", 1) < 1:
        print("error: --workers must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    if getattr(args, "samples", None) is not None and args.samples < 64:
        print("error: --samples must be at least 64", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except PreconditionError as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (UsageError, PizzaError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
