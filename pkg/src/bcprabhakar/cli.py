"""Command-line front end: ``bcprabhakar <subcommand> ...``.

Exit codes: 0 on success, 2 for invalid input (bad parameters, malformed
CSV/JSON), 3 when a numerical procedure cannot meet its tolerance, and 1
when ``verify`` finishes with a failing identity.

A ``--config`` JSON file may supply any long option (``{"tol": 1e-9,
"grids": "257,513"}``); explicit flags win over the file, the file over the
built-in defaults.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import formats
from .bicomplex import Bicomplex
from .cauchy import MODES, CauchyProblem, residual_check, resolvent_kernel, solve
from .errors import MalformedInput, NumericalError, ValidationError
from .laplace import inverse_lt, kernel_contour, kernel_lt, sampled_lt
from .ops import Grid, OperatorKind, OperatorSpec, apply_operator, sampled_kernel
from .special import DEFAULT_TOL, MLParams, ml3, ml_k3, prabhakar_kernel
from .verify import DEFAULT_GRIDS, DEFAULT_SEED, SUITES, VerifyConfig, environment, run_suite

EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_NUMERICAL = 0, 1, 2, 3

# built-in defaults, applied after the config file
DEFAULTS = {
    "tol": None,
    "seed": hex(DEFAULT_SEED),
    "grids": ",".join(map(str, DEFAULT_GRIDS)),
    "M": 0.0,
    "suite": "all",
    "out": None,
}


# -- parsing helpers ----------------------------------------------------------


def _floats(text: str, what: str) -> list:
    try:
        return [float(s) for s in str(text).split(",") if s.strip()]
    except ValueError:
        raise MalformedInput(f"{what}: expected a comma list of numbers, got {text!r}") from None


def _ints(text: str, what: str) -> list:
    try:
        vals = [int(s) for s in str(text).split(",") if s.strip()]
    except ValueError:
        raise MalformedInput(f"{what}: expected a comma list of integers, got {text!r}") from None
    if not vals:
        raise MalformedInput(f"{what}: empty list")
    return vals


def _seed(text) -> int:
    try:
        return int(str(text), 0)
    except ValueError:
        raise MalformedInput(f"--seed: expected an integer (decimal or 0x hex), got {text!r}") from None


def _grid(text: str) -> Grid:
    vals = _floats(text, "--grid")
    if len(vals) != 3 or vals[2] != int(vals[2]):
        raise MalformedInput(f"--grid: expected a,b,n_points, got {text!r}")
    return Grid(vals[0], vals[1], int(vals[2]))


def _params(source) -> MLParams:
    obj = formats.load_json(source)
    if not isinstance(obj, dict):
        raise MalformedInput("--params: expected a JSON object with keys m, n, l, r (and optionally k)")
    return MLParams.from_json({key: v for key, v in obj.items() if key != "alpha"})


def _bicomplex(source, what: str) -> Bicomplex:
    obj = formats.load_json(source) if isinstance(source, str) and source.strip().startswith("{") else source
    if isinstance(obj, str):
        try:
            obj = float(obj)
        except ValueError:
            obj = formats.load_json(obj)
    try:
        return Bicomplex.from_json(obj)
    except ValueError as exc:
        raise MalformedInput(f"{what}: {exc}") from None


def _emit(text: str, out) -> None:
    if out:
        formats.atomic_write(out, text)
    else:
        sys.stdout.write(text)


def _tol(args, default):
    return default if args.tol is None else float(args.tol)


# -- subcommands --------------------------------------------------------------


def cmd_eval(args) -> int:
    p = _params(args.params)
    tol = _tol(args, DEFAULT_TOL)
    if args.ml1:
        p, fn = p.replace(n=1, l=1), ml3
    elif args.ml2:
        p, fn = p.replace(l=1), ml3
    elif args.mlk3:
        fn = ml_k3
    else:
        fn = ml3
    if args.bicomplex_points:
        pts = formats.load_json(args.bicomplex_points)
        if not isinstance(pts, list):
            raise MalformedInput("--bicomplex-points: expected a JSON list of {x0,x1,x2,x3} objects")
        zetas = [_bicomplex(z, "--bicomplex-points") for z in pts]
        header = ("z0", "z1", "z2", "z3", "x0", "x1", "x2", "x3", "terms_used", "tail_estimate")
        keys = [list(z.to_real_components()) for z in zetas]
    else:
        ts = _floats(args.points, "--points")
        zetas = [Bicomplex(t, t) for t in ts]
        header = ("t", "x0", "x1", "x2", "x3", "terms_used", "tail_estimate")
        keys = [[t] for t in ts]
    rows = []
    for key, z in zip(keys, zetas):
        val, diag = fn(z, p, tol)
        rows.append(key + [x + 0.0 for x in val.to_real_components()] + [diag.terms_used, float(diag.tail_estimate)])
    _emit(formats.rows_csv_text(header, rows), args.out)
    return EXIT_OK


def cmd_kernel(args) -> int:
    p = _params(args.params)
    tol = _tol(args, 1e-12)
    if args.grid:
        f = sampled_kernel(_grid(args.grid), p, tol)
        _emit(formats.function_csv_text(f.t, f.values), args.out)
    else:
        t = np.array(_floats(args.points, "--points"))
        _emit(formats.function_csv_text(t, prabhakar_kernel(t, p, tol)), args.out)
    return EXIT_OK


def cmd_apply(args) -> int:
    kind = OperatorKind(args.op)
    f = formats.read_function_csv(args.input, formats.parse_exponents(args.exponents))
    if kind in (OperatorKind.RL_INTEGRAL, OperatorKind.RL_DERIVATIVE):
        if args.alpha is not None:
            alpha = _bicomplex(args.alpha, "--alpha")
        else:
            obj = formats.load_json(args.params) if args.params else {}
            if not isinstance(obj, dict) or "alpha" not in obj:
                raise MalformedInput(f"--op {kind.value} needs an order: --alpha or an 'alpha' key in --params")
            alpha = _bicomplex(obj["alpha"], "alpha")
        spec = OperatorSpec(kind, alpha=alpha)
    else:
        if not args.params:
            raise MalformedInput(f"--op {kind.value} needs --params with m, n, l, r")
        spec = OperatorSpec(kind, p=_params(args.params))
    res = apply_operator(spec, f, split_order=args.split_order)
    _emit(formats.function_csv_text(res.t, res.values), args.out)
    return EXIT_OK


def cmd_lt(args) -> int:
    f = formats.read_function_csv(args.input)
    if f.grid.a != 0:
        raise MalformedInput(f"lt: the function must start at t=0, got t={f.grid.a:g}")
    xi = _bicomplex(args.xi, "--xi")
    M = float(args.M)
    val = sampled_lt(f, xi)
    # tail beyond b, from |f(t)| <= C e^{M t} with C fitted on the samples
    b = f.grid.b
    tails = []
    for c, x in zip(f.components, xi.components):
        gap = x.real - M
        if not gap > 0:
            raise ValidationError(f"lt: Re(xi_i)={x.real:g} must exceed the exponential order M={M:g} (a0 > M + |a3|)")
        C = float(np.max(np.abs(c) * np.exp(-M * f.t)))
        tails.append(C * np.exp(-gap * b) / gap)
    report = {
        "xi": xi.to_json(),
        "M": M,
        "value": val.to_json(),
        "truncation_bound": {"d1": float(tails[0]), "d2": float(tails[1])},
        "T": b,
        "n_points": f.grid.n_points,
    }
    _emit(json.dumps(report, indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_ilt(args) -> int:
    p = _params(args.params)
    tol = _tol(args, 1e-10)
    if args.grid:
        g = _grid(args.grid)
        t = g.nodes
    else:
        t = np.array(_floats(args.points, "--points"))
    pos = t > 0
    if args.family == "kernel":

        def F(s):
            return Bicomplex(*(kernel_lt(s.components[i], *p.component(i)) for i in range(2)))

        inner = inverse_lt(F, t[pos], kernel_contour(p), tol=tol)
    else:
        k = _bicomplex(args.k, "--k") if args.k is not None else Bicomplex(0, 0)
        inner = resolvent_kernel(p, k, t[pos], tol)
    comps = []
    for c in inner.components:
        full = np.full(t.size, np.nan, dtype=complex)
        full[pos] = c
        comps.append(full)
    if not pos.all():
        print("ilt: t <= 0 is outside the inversion domain; written as nan", file=sys.stderr)
    _emit(formats.function_csv_text(t, Bicomplex(*comps)), args.out)
    return EXIT_OK


def _problem(source) -> CauchyProblem:
    obj = formats.load_json(source)
    if not isinstance(obj, dict):
        raise MalformedInput("--problem: expected a JSON object")
    base = Path(source).parent if not str(source).strip().startswith("{") else Path(".")
    unknown = set(obj) - {"params", "mode", "A", "k_const", "taus", "grid", "forcing_csv"}
    if unknown:
        raise MalformedInput(f"--problem: unknown keys {sorted(unknown)}")
    for key in ("params", "taus", "grid"):
        if key not in obj:
            raise MalformedInput(f"--problem: missing key {key!r}")
    mode = obj.get("mode", "")
    if mode and mode not in MODES:
        raise MalformedInput(f"--problem: mode must be one of {', '.join(MODES)}, got {mode!r}")
    gj = obj["grid"]
    try:
        grid = Grid(float(gj["a"]), float(gj["b"]), int(gj["n_points"]))
    except (KeyError, TypeError):
        raise MalformedInput("--problem: grid must be {a, b, n_points}") from None
    taus = obj["taus"]
    if not isinstance(taus, list):
        raise MalformedInput("--problem: taus must be a list of bicomplex values")
    g = None
    if obj.get("forcing_csv"):
        g = formats.read_function_csv(base / obj["forcing_csv"])
        if g.grid != grid:
            raise MalformedInput(f"--problem: forcing grid {g.grid.to_json()} differs from problem grid {grid.to_json()}")
    return CauchyProblem(
        MLParams.from_json(obj["params"]),
        tuple(_bicomplex(v, "taus") for v in taus),
        grid,
        A=_bicomplex(obj["A"], "A") if "A" in obj else None,
        k_const=_bicomplex(obj["k_const"], "k_const") if "k_const" in obj else None,
        g=g,
        mode=mode,
    )


def cmd_solve(args) -> int:
    prob = _problem(args.problem)
    kw = {} if args.tol is None else {"tol": float(args.tol)}
    f = solve(prob, **kw)
    _emit(formats.function_csv_text(f.t, f.values), args.out)
    if args.residual:
        res = residual_check(f, prob)
        print(json.dumps({"mode": prob.mode, "residual": res.to_json(), "info": _jsonable(f.info)}), file=sys.stderr)
    return EXIT_OK


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, int, float, str)) or x is None:
        return x
    if hasattr(x, "to_json"):
        return x.to_json()
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    return str(x)


def cmd_verify(args) -> int:
    cfg = VerifyConfig(seed=_seed(args.seed), grids=tuple(_ints(args.grids, "--grids")))
    if args.suite != "all" and args.suite not in SUITES:
        raise MalformedInput(f"--suite must be all or one of {', '.join(SUITES)}")
    quiet = args.json and not args.out
    records = run_suite(args.suite, cfg, progress=None if quiet else (lambda r: print(r.line(), flush=True)))
    failed = [r for r in records if not r.passed]
    report = {
        "suite": args.suite,
        "config": {"seed": hex(cfg.seed), "grids": list(cfg.grids), "suite": args.suite},
        "environment": environment(),
        "records": [r.to_json() for r in records],
        "passed": not failed,
        "summary": {"total": len(records), "failed": len(failed)},
    }
    text = json.dumps(report, indent=2, allow_nan=True) + "\n"
    if args.out:
        formats.atomic_write(args.out, text)
    if quiet:
        sys.stdout.write(text)
    else:
        print(f"{len(records) - len(failed)}/{len(records)} identities passed")
        for r in failed:
            print(f"  failed: {r.name}")
    return EXIT_OK if not failed else EXIT_FAIL


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bcprabhakar", description="Bicomplex Prabhakar fractional calculus.")
    ap.add_argument("--config", help="JSON file of option defaults (flags override it)")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, params=True, out=True):
        if params:
            sp.add_argument("--params", help="MLParams JSON (inline or file): {m, n, l, r[, k]} in x0..x3 form")
        if out:
            sp.add_argument("--out", help="output path (default: stdout)")
        sp.add_argument("--tol", type=float, help="tolerance override")

    sp = sub.add_parser("eval", help="evaluate a Mittag-Leffler function at points")
    fam = sp.add_mutually_exclusive_group(required=True)
    for name in ("ml1", "ml2", "ml3", "mlk3"):
        fam.add_argument(f"--{name}", action="store_true")
    pts = sp.add_mutually_exclusive_group(required=True)
    pts.add_argument("--points", help="comma list of real arguments")
    pts.add_argument("--bicomplex-points", help="JSON list of {x0,x1,x2,x3}")
    common(sp)
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("kernel", help="sample the Prabhakar kernel t^(n-1) E^l_{m,n}(r t^m)")
    where = sp.add_mutually_exclusive_group(required=True)
    where.add_argument("--grid", help="a,b,n_points")
    where.add_argument("--points", help="comma list of t > 0")
    common(sp)
    sp.set_defaults(func=cmd_kernel)

    sp = sub.add_parser("apply", help="apply a fractional operator to a function CSV")
    sp.add_argument("--op", required=True, choices=[k.value for k in OperatorKind])
    sp.add_argument("--in", dest="input", required=True, help="function CSV t,x0,x1,x2,x3")
    sp.add_argument("--alpha", help="order of rl-int / rl-der (number or JSON bicomplex)")
    sp.add_argument("--exponents", help="non-integer powers of t present at t=a, e.g. '0.5,0.3+0.1j'")
    sp.add_argument("--split-order", action="store_true", help="allow different ceil(Re) per component")
    common(sp)
    sp.set_defaults(func=cmd_apply)

    sp = sub.add_parser("lt", help="Laplace transform of a function CSV starting at t=0")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--xi", required=True, help="JSON bicomplex transform variable")
    sp.add_argument("--M", type=float, help="exponential order of f")
    common(sp, params=False)
    sp.set_defaults(func=cmd_lt)

    sp = sub.add_parser("ilt", help="inverse transform of a closed-form family on a t grid")
    sp.add_argument("--family", required=True, choices=["kernel", "cauchy-H"])
    sp.add_argument("--k", help="constant k of H = 1/(xi^n (1 - r xi^-m)^l + k)")
    where = sp.add_mutually_exclusive_group(required=True)
    where.add_argument("--grid", help="a,b,n_points")
    where.add_argument("--points", help="comma list of t > 0")
    common(sp)
    sp.set_defaults(func=cmd_ilt)

    sp = sub.add_parser("solve", help="solve a Cauchy problem from a problem JSON")
    sp.add_argument("--problem", required=True)
    sp.add_argument("--residual", action="store_true", help="print the residual check to stderr as JSON")
    common(sp, params=False)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("verify", help="run the identity suites")
    sp.add_argument("--suite", choices=["all", *SUITES])
    sp.add_argument("--grids", help="comma list of grid sizes")
    sp.add_argument("--seed", help="random seed (default 0xB1C0)")
    sp.add_argument("--json", action="store_true", help="print the JSON report instead of the summary")
    sp.add_argument("--out", help="write the JSON report here")
    sp.set_defaults(func=cmd_verify)
    return ap


def _apply_config(args) -> None:
    cfg = {}
    if args.config:
        cfg = formats.load_json(args.config)
        if not isinstance(cfg, dict):
            raise MalformedInput("--config: expected a JSON object of option defaults")
    for key in set(vars(args)) | set(DEFAULTS):
        if getattr(args, key, None) is not None:
            continue
        if key in cfg:
            setattr(args, key, cfg[key])
        elif key in DEFAULTS and hasattr(args, key):
            setattr(args, key, DEFAULTS[key])
    for key in ("tol", "M"):
        if getattr(args, key, None) is not None:
            setattr(args, key, float(getattr(args, key)))


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args)
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
